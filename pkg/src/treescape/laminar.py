"""Nested set families over finite grounds and their reverse-inclusion trees.

A nested noetherian family containing the ground and excluding the empty set
is a tree under reverse inclusion; the identity labeling satisfies the two
tree-labeling laws (comparable nodes nest, incomparable nodes are disjoint),
and mapping each point to the chain of members containing it embeds the
ground into the path space of that tree.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .staged import StagedTree, Tree, ValidationError, validate


@dataclass
class GroundFamily:
    """Finite ground set with a list of member subsets (ground included)."""

    name: str
    ground: frozenset
    members: list[frozenset] = field(default_factory=list)

    def dedup(self) -> list[frozenset]:
        seen = []
        for m in self.members:
            if m not in seen:
                seen.append(m)
        return seen


def _fmt(s: frozenset) -> str:
    return "{" + ",".join(str(x) for x in sorted(s)) + "}"


def _nested_witness(members) -> tuple | None:
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if a & b and not (a <= b or b <= a):
                return (a, b)
    return None


@dataclass
class STree:
    """Reverse-inclusion tree of a laminar family with its labeling."""

    tree: Tree
    labels: dict[str, frozenset]
    levels: list[list[str]]
    report: dict


def laminar_to_tree(fam: GroundFamily) -> STree:
    """Order the family by reverse inclusion; nestedness makes it a tree.

    The level decomposition doubles as the sigma-disjoint certificate and as
    the special-tree certificate: levels are disjoint subfamilies and finite
    antichains at once.
    """
    members = fam.dedup()
    problems = []
    if fam.ground not in members:
        problems.append("the ground set is not a member")
    if frozenset() in members:
        problems.append("the empty set is a member")
    w = _nested_witness(members)
    if w:
        problems.append(f"not nested: {_fmt(w[0])} and {_fmt(w[1])} overlap")
    for m in members:
        if not m <= fam.ground:
            problems.append(f"{_fmt(m)} is not a subset of the ground")
    if problems:
        raise ValidationError(problems)

    order = sorted(range(len(members)), key=lambda i: (-len(members[i]),
                                                       sorted(members[i])))
    names = {}
    for rank, i in enumerate(order):
        names[i] = "s%d" % rank
    root = names[members.index(fam.ground)]

    parent: dict[str, str] = {}
    kind: dict[str, str] = {}
    for i, m in enumerate(members):
        if m == fam.ground:
            continue
        # smallest proper superset; unique because the family is nested
        sups = [j for j, s in enumerate(members) if m < s]
        best = min(sups, key=lambda j: len(members[j]))
        parent[names[i]] = names[best]
        kind[names[i]] = "succ"

    spec = StagedTree(
        nodes=[names[i] for i in order],
        root=root,
        parent=parent,
        edge_kind=kind,
        ladder_flag={},
        multiplicity={},
        cardinals=[],
        name=fam.name,
    )
    tree = validate(spec)
    labels = {names[i]: members[i] for i in range(len(members))}

    by_depth: dict[int, list[str]] = {}
    for n in tree.nodes:
        by_depth.setdefault(len(tree.path(n)), []).append(n)
    levels = [sorted(by_depth[d]) for d in sorted(by_depth)]
    report = {
        "members": len(members),
        "levels": [[_fmt(labels[n]) for n in lvl] for lvl in levels],
        "sigma_disjoint": True,
        "special": True,
        "note": "levels are pairwise-disjoint subfamilies and finite "
                "antichains, so sigma-disjoint and special coincide here",
    }
    return STree(tree, labels, levels, report)


def validate_stree(tree: Tree, labels: dict[str, frozenset],
                   family: list[frozenset] | None = None) -> dict:
    """Check surjectivity and the two labeling laws, with witness pairs."""
    out: dict = {"surjective": True, "f1": True, "f2": True, "witnesses": []}
    if family is not None:
        missing = [m for m in family if m not in labels.values()]
        if missing:
            out["surjective"] = False
            out["witnesses"].append(("surjective", _fmt(missing[0])))
    for a in tree.nodes:
        for b in tree.nodes:
            if a == b:
                continue
            pa, pb = tree.path(a), tree.path(b)
            if a in pb:  # a <= b
                if not labels[a] >= labels[b]:
                    out["f1"] = False
                    out["witnesses"].append(("f1", a, b))
            elif b not in pa:  # incomparable
                if labels[a] & labels[b]:
                    out["f2"] = False
                    out["witnesses"].append(("f2", a, b))
    out["ok"] = out["surjective"] and out["f1"] and out["f2"]
    return out


def subbase_embedding(fam: GroundFamily, st: STree) -> tuple[dict, dict]:
    """e(x) = the chain of members containing x, as a path of the tree.

    Returns the map (point -> deepest node) and the verification report:
    injectivity, continuity (preimage of each cone is the label) and openness
    onto the image (image of each label is the image met with the cone).
    """
    tree, labels = st.tree, st.labels
    chains: dict = {}
    for x in sorted(fam.ground):
        hit = [n for n in tree.nodes if x in labels[n]]
        hit.sort(key=lambda n: len(tree.path(n)))
        for shallow, deep in zip(hit, hit[1:]):
            if shallow not in tree.path(deep):
                raise ValidationError(
                    f"members containing {x!r} do not form a chain")
        chains[x] = hit

    for x in sorted(fam.ground):
        for y in sorted(fam.ground):
            if x < y and chains[x] == chains[y]:
                raise ValidationError(
                    f"labels do not separate {x!r} from {y!r}")

    e = {x: chains[x][-1] for x in chains}
    report: dict = {"injective": True, "continuity": True, "openness": True}
    for n in tree.nodes:
        pre = {x for x in fam.ground if n in chains[x]}
        if pre != labels[n]:
            report["continuity"] = False
            report.setdefault("witnesses", []).append(("continuity", n))
        img = {tuple(chains[x]) for x in labels[n]}
        cone = {tuple(chains[x]) for x in fam.ground if n in chains[x]}
        if img != cone:
            report["openness"] = False
            report.setdefault("witnesses", []).append(("openness", n))
    report["image_paths"] = {
        str(x): " < ".join(_fmt(labels[n]) for n in chains[x])
        for x in sorted(fam.ground)}
    report["ok"] = report["injective"] and report["continuity"] and report["openness"]
    return e, report


def ground_family(name: str, ground, members) -> GroundFamily:
    g = frozenset(ground)
    return GroundFamily(name, g, [frozenset(m) for m in members])
