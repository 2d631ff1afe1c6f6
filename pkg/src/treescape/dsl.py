"""Line-oriented DSL for presentations and set families.

Declarations end with ``;`` and may span lines; ``#`` comments to end of
line.  Tree form:

    cardinal K uncountable;
    node r root;
    ladder r topped;
    node u parent r kind top mult K;
    ladder u open;

Family form, over a finite ground set or a named space:

    family F on ground {1,2,3,4,5,6} { X; {1,2,3}; {1}; }
    family G on space P1 { gen [r:0]; rungs [r]; }

The printer emits a canonical layout (cardinals, then each node followed by
its ladder line); parse then print is the identity on canonical sources.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .counts import ALEPH0, C, parse_count
from .staged import NodeCoord, StagedTree, Tree, ValidationError, validate


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


class DslError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self._fmt(d) for d in self.diagnostics))

    @staticmethod
    def _fmt(d):
        line, col, msg = d
        if line:
            return f"line {line}, col {col}: {msg}"
        return msg


_PUNCT = set(";{},[]:=#()")


def tokenize(text: str) -> list[Token]:
    out = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch in _PUNCT:
            out.append(Token(ch, line, col))
            col += 1
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in _PUNCT:
            j += 1
        out.append(Token(text[i:j], line, col))
        col += j - i
        i = j
    return out


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self, expected: str | None = None) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", 1, 1)
            want = f"expected {expected!r}" if expected else "unexpected end of input"
            raise DslError([(last.line, last.col, f"{want} at end of input")])
        if expected is not None and tok.text != expected:
            raise DslError([(tok.line, tok.col,
                             f"expected {expected!r}, found {tok.text!r}")])
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text


@dataclass
class FamilySpec:
    """Parsed family declaration, before semantic resolution."""

    name: str
    ground: list[int] | None = None
    space: str | None = None
    ground_members: list[frozenset] = field(default_factory=list)
    member_coords: list[tuple[str, str]] = field(default_factory=list)  # (form, coord text)


def _parse_tree_decls(cur: _Cursor):
    nodes: list[str] = []
    root = None
    parent: dict[str, str] = {}
    kind: dict[str, str] = {}
    ladders: dict[str, str] = {}
    mult: dict[str, object] = {}
    cardinals = [ALEPH0]
    diags = []
    while cur.peek() is not None:
        tok = cur.next()
        if tok.text == "cardinal":
            name = cur.next()
            mode = cur.next()
            if mode.text != "uncountable":
                diags.append((mode.line, mode.col,
                              f"expected 'uncountable', found {mode.text!r}"))
            cur.next(";")
            cardinals.append(name.text)
        elif tok.text == "node":
            name = cur.next()
            nodes.append(name.text)
            nxt = cur.next()
            if nxt.text == "root":
                if root is not None:
                    diags.append((name.line, name.col, "second root declared"))
                root = name.text
                cur.next(";")
                continue
            if nxt.text != "parent":
                diags.append((nxt.line, nxt.col,
                              f"expected 'root' or 'parent', found {nxt.text!r}"))
                break
            parent[name.text] = cur.next().text
            cur.next("kind")
            k = cur.next()
            if k.text not in ("succ", "top"):
                diags.append((k.line, k.col, f"kind must be succ or top, found {k.text!r}"))
            kind[name.text] = k.text
            if cur.at("mult"):
                cur.next("mult")
                m = cur.next()
                try:
                    mult[name.text] = parse_count(m.text)
                except ValueError as e:
                    diags.append((m.line, m.col, str(e)))
            cur.next(";")
        elif tok.text == "ladder":
            name = cur.next()
            flag = cur.next()
            if flag.text not in ("open", "topped"):
                diags.append((flag.line, flag.col,
                              f"ladder flag must be open or topped, found {flag.text!r}"))
            ladders[name.text] = flag.text
            cur.next(";")
        else:
            diags.append((tok.line, tok.col, f"unknown declaration {tok.text!r}"))
            break
    if diags:
        raise DslError(diags)
    if root is None:
        raise DslError([(0, 0, "no root declared")])
    mult.setdefault(root, C(1))
    for n in nodes:
        mult.setdefault(n, C(1))
    return StagedTree(nodes, root, parent, kind, ladders, mult, cardinals, name=root)


def parse_tree(text: str, name: str | None = None) -> Tree:
    cur = _Cursor(tokenize(text))
    if not cur.tokens:
        raise DslError([(0, 0, "no root declared")])
    spec = _parse_tree_decls(cur)
    if name:
        spec = StagedTree(spec.nodes, spec.root, spec.parent, spec.edge_kind,
                          spec.ladder_flag, spec.multiplicity, spec.cardinals, name)
    try:
        return validate(spec)
    except ValidationError as e:
        raise DslError([(0, 0, p) for p in e.problems])


def _parse_set(cur: _Cursor) -> frozenset:
    cur.next("{")
    vals = []
    while not cur.at("}"):
        tok = cur.next()
        try:
            vals.append(int(tok.text))
        except ValueError:
            raise DslError([(tok.line, tok.col, f"expected integer, found {tok.text!r}")])
        if cur.at(","):
            cur.next(",")
    cur.next("}")
    return frozenset(vals)


def parse_family(text: str) -> FamilySpec:
    cur = _Cursor(tokenize(text))
    cur.next("family")
    name = cur.next().text
    cur.next("on")
    mode = cur.next()
    spec = FamilySpec(name)
    if mode.text == "ground":
        spec.ground = sorted(_parse_set(cur))
        cur.next("{")
        while not cur.at("}"):
            tok = cur.peek()
            if tok is not None and tok.text == "X":
                cur.next()
                spec.ground_members.append(frozenset(spec.ground))
            else:
                spec.ground_members.append(_parse_set(cur))
            cur.next(";")
        cur.next("}")
    elif mode.text == "space":
        spec.space = cur.next().text
        cur.next("{")
        while not cur.at("}"):
            form = cur.next()
            if form.text not in ("gen", "rungs"):
                raise DslError([(form.line, form.col,
                                 f"family member must be gen or rungs, found {form.text!r}")])
            cur.next("[")
            parts = []
            while not cur.at("]"):
                parts.append(cur.next().text)
            cur.next("]")
            spec.member_coords.append((form.text, "".join(parts)))
            cur.next(";")
        cur.next("}")
    else:
        raise DslError([(mode.line, mode.col,
                         f"expected 'ground' or 'space', found {mode.text!r}")])
    return spec


def parse_source(text: str):
    """Either a validated tree or a FamilySpec, by leading keyword."""
    toks = tokenize(text)
    if toks and toks[0].text == "family":
        return parse_family(text)
    return parse_tree(text)


def parse_coord(tree: Tree, text: str) -> NodeCoord:
    """Coordinate syntax: node, node:rung, node#comp=i,comp=j:rung.

    Inside source files "@" replaces "#", which would start a comment.
    """
    body = text.strip().replace("@", "#")
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    rung = None
    copies = []
    if "#" in body:
        node, rest = body.split("#", 1)
    else:
        node, rest = body, ""
        if ":" in node:
            node, r = node.split(":", 1)
            rung = int(r)
    if rest:
        if ":" in rest:
            rest, r = rest.rsplit(":", 1)
            rung = int(r)
        for part in rest.split(","):
            if not part:
                continue
            comp, _, val = part.partition("=")
            copies.append((comp.strip(), int(val)))
    node = node.strip()
    return tree.coord(node, dict(copies), rung)


def print_tree(tree: Tree) -> str:
    lines = []
    for nm in tree.cardinals.names:
        if nm != ALEPH0:
            lines.append(f"cardinal {nm} uncountable;")
    for n in tree.nodes:
        if n == tree.root:
            lines.append(f"node {n} root;")
        else:
            decl = f"node {n} parent {tree.parent[n]} kind {tree.kind[n]}"
            if tree.mult[n] != C(1):
                decl += f" mult {tree.mult[n]}"
            lines.append(decl + ";")
        if tree.is_laddered(n):
            lines.append(f"ladder {n} {tree.ladder[n]};")
    return "\n".join(lines) + "\n"


def print_family(fam) -> str:
    """Canonical family source; takes a FamilySpec or a GroundFamily."""
    if isinstance(fam, FamilySpec) and fam.space is not None:
        lines = [f"family {fam.name} on space {fam.space} {{"]
        for form, coord in fam.member_coords:
            lines.append(f"  {form} [{coord}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def fmt(s) -> str:
        return "{" + ",".join(str(x) for x in sorted(s)) + "}"

    ground = frozenset(fam.ground)
    members = fam.ground_members if isinstance(fam, FamilySpec) else fam.members
    lines = [f"family {fam.name} on ground {fmt(ground)} {{"]
    for m in members:
        lines.append("  X;" if frozenset(m) == ground else f"  {fmt(m)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
