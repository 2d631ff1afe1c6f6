"""Serialization: JSON and DOT forms of trees, spaces and maps.

The JSON tree schema mirrors the presentation fields one to one, so a file
round-trips through tree_from_json . tree_to_json unchanged.  DOT output is
plain graphviz: presentation skeletons draw successor edges solid and top
edges dashed, space diagrams draw one vertex per point class with the limit
relation as directed edges and isolated classes double-circled.
"""
from __future__ import annotations

from .counts import C
from .points import Space
from .staged import StagedTree, Tree, ValidationError, validate


def tree_to_json(tree: Tree) -> dict:
    return {
        "name": tree.name,
        "cardinals": [n for n in tree.cardinals.names if n != "aleph0"],
        "nodes": list(tree.nodes),
        "root": tree.root,
        "parent": {n: tree.parent[n] for n in tree.nodes if n != tree.root},
        "edge_kind": {n: tree.kind[n] for n in tree.nodes if n != tree.root},
        "ladder_flag": {n: f for n, f in tree.ladder.items() if f != "none"},
        "multiplicity": {n: str(m) for n, m in tree.mult.items() if m != C(1)},
    }


def _count_of(text: str):
    return C(int(text)) if text.isdigit() else C(text)


def tree_from_json(data: dict) -> Tree:
    try:
        spec = StagedTree(
            nodes=list(data["nodes"]),
            root=data["root"],
            parent=dict(data.get("parent", {})),
            edge_kind=dict(data.get("edge_kind", {})),
            ladder_flag=dict(data.get("ladder_flag", {})),
            multiplicity={n: _count_of(str(m))
                          for n, m in data.get("multiplicity", {}).items()},
            cardinals=list(data.get("cardinals", [])),
            name=data.get("name"),
        )
    except (KeyError, TypeError) as ex:
        raise ValidationError(f"malformed tree JSON: {ex}")
    return validate(spec)


def _q(s: str) -> str:
    return '"' + s.replace('"', r'\"') + '"'


def tree_to_dot(tree: Tree) -> str:
    lines = [f"digraph {_q(tree.name or 'tree')} {{", "  rankdir=TB;"]
    for v in tree.nodes:
        parts = [v]
        if tree.mult[v] != C(1):
            parts.append(f"x{tree.mult[v]}")
        if tree.is_laddered(v):
            parts.append(f"ladder {tree.ladder[v]}")
        shape = "box" if tree.is_laddered(v) else "ellipse"
        lines.append(f"  {_q(v)} [label={_q(' '.join(parts))}, shape={shape}];")
    for v in tree.nodes:
        if v == tree.root:
            continue
        style = "solid" if tree.kind[v] == "succ" else "dashed"
        lines.append(f"  {_q(tree.parent[v])} -> {_q(v)} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def space_to_dot(space: Space) -> str:
    name = f"{space.kind}_{space.tree.name or 'space'}"
    lines = [f"digraph {_q(name)} {{", "  rankdir=BT;"]
    iso = set(space.isolated_classes())
    for info in space.classes:
        label = f"{info.cls} #{info.count}"
        extra = ", peripheries=2" if info.cls in iso else ""
        lines.append(f"  {_q(str(info.cls))} [label={_q(label)}{extra}];")
    for row in space.class_limits():
        attr = f' [label={_q("per top " + str(row.per_top))}]' \
            if row.per_top is not None else ""
        lines.append(f"  {_q(str(row.of))} -> {_q(str(row.at))}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def map_to_json(m) -> dict:
    return m.describe()


def map_to_dot(m) -> str:
    lines = [f"digraph {_q(m.name)} {{", "  rankdir=LR;"]
    seen = set()
    for row in m.rows:
        s, d = f"src: {row.src}", f"dst: {row.dst}"
        for side in (s, d):
            if side not in seen:
                seen.add(side)
                lines.append(f"  {_q(side)};")
        note = []
        for comp, want in row.pins:
            note.append(f"{comp}={'rest' if repr(want) == 'REST' else want}")
        for sc, dc, off in row.comp_map:
            note.append(f"{sc}->{dc}" + (f"{off:+d}" if off else ""))
        if row.rung_to:
            note.append(f"rung->{row.rung_to[0]}")
        attr = f" [label={_q(', '.join(note))}]" if note else ""
        lines.append(f"  {_q(s)} -> {_q(d)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
