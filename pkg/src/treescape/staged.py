"""Finite presentations of (possibly infinite) order trees.

A presentation is a finite skeleton of named nodes.  Each non-root node hangs
off its parent either as an immediate successor ("succ") or as a limit above
the parent's ladder ("top").  A node may carry one endless ladder of anonymous
rungs; a ladder is "topped" when limit children sit above it and "open" when
nothing does.  A node's multiplicity replicates the node and its whole subtree
that many times under each copy of the parent; symbolic cardinals are allowed.

The expansion is the actual order tree: one element per concrete coordinate
(skeleton node plus copy indices plus optional rung).  Everything downstream
(point classes, regions, limits) is computed against the expansion without
materializing it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .counts import ALEPH0, C, CardinalContext, Count, CountError, add, cmp, maximum, mul
from .ordinal import OMEGA, ONE, ZERO, Ordinal, fin

SUCC = "succ"
TOP = "top"
NONE = "none"
OPEN = "open"
TOPPED = "topped"


class ValidationError(ValueError):
    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass
class StagedTree:
    """Raw presentation data, as parsed; validate() produces a Tree."""

    nodes: list[str]
    root: str
    parent: dict[str, str]
    edge_kind: dict[str, str]
    ladder_flag: dict[str, str]
    multiplicity: dict[str, Count]
    cardinals: CardinalContext = field(default_factory=CardinalContext)
    name: str = ""


@dataclass(frozen=True)
class NodeCoord:
    """A concrete element of the expansion.

    `copies` assigns an index (1-based) to every multiplicity-bearing node on
    the root path, the node itself included.  `rung` addresses the k-th rung
    of the node's ladder; None addresses the node.
    """

    node: str
    copies: tuple[tuple[str, int], ...] = ()
    rung: int | None = None

    def copy_of(self, n: str) -> int | None:
        for k, v in self.copies:
            if k == n:
                return v
        return None

    def __str__(self) -> str:
        parts = ",".join(f"{n}={i}" for n, i in self.copies)
        s = self.node
        if parts:
            s += f"#{parts}"
        if self.rung is not None:
            s += f":{self.rung}"
        return s


class Tree:
    """A validated presentation with derived lookups."""

    def __init__(self, spec: StagedTree):
        problems = []
        if spec.root not in spec.nodes:
            problems.append(f"root {spec.root!r} is not a node")
        if len(set(spec.nodes)) != len(spec.nodes):
            problems.append("duplicate node names")
        for n in spec.nodes:
            if n != spec.root and n not in spec.parent:
                problems.append(f"node {n!r} has no parent")
        if spec.root in spec.parent:
            problems.append("root must not have a parent")

        self.spec = spec
        self.nodes = list(spec.nodes)
        self.root = spec.root
        self.parent = dict(spec.parent)
        self.cardinals = CardinalContext()
        for nm in spec.cardinals:
            if nm not in self.cardinals.names:
                self.cardinals.declare(nm)
        self.name = spec.name

        self.ladder: dict[str, str] = {n: spec.ladder_flag.get(n, NONE) for n in self.nodes}
        self.kind: dict[str, str] = dict(spec.edge_kind)
        self.mult: dict[str, Count] = {n: spec.multiplicity.get(n, C(1)) for n in self.nodes}

        for n, flag in self.ladder.items():
            if flag not in (NONE, OPEN, TOPPED):
                problems.append(f"bad ladder flag {flag!r} on {n!r}")
        for n, k in self.kind.items():
            if k not in (SUCC, TOP):
                problems.append(f"bad edge kind {k!r} on {n!r}")
            if n not in self.nodes:
                problems.append(f"edge kind given for unknown node {n!r}")
        for n in self.nodes:
            if n != self.root and n in self.parent and n not in self.kind:
                problems.append(f"node {n!r} missing edge kind")
        for n, m in self.mult.items():
            if m.is_finite and m.finite < 1:
                problems.append(f"multiplicity of {n!r} must be >= 1")
            if m.is_infinite and m.symbol not in self.cardinals.names:
                problems.append(f"multiplicity of {n!r} uses undeclared cardinal {m.symbol!r}")
        if self.mult.get(self.root, C(1)) != C(1):
            problems.append("root multiplicity must be 1")

        # reject cycles / unreachable parents before walking paths
        for n in self.nodes:
            if n == self.root or n not in self.parent:
                continue
            seen, cur = {n}, self.parent.get(n)
            while cur is not None and cur not in seen:
                if cur not in self.nodes:
                    problems.append(f"parent chain of {n!r} leaves the node set")
                    break
                seen.add(cur)
                cur = self.parent.get(cur)
            else:
                if cur is not None:
                    problems.append(f"parent chain of {n!r} has a cycle")
        if problems:
            raise ValidationError(problems)

        self.succ_children: dict[str, list[str]] = {n: [] for n in self.nodes}
        self.top_children: dict[str, list[str]] = {n: [] for n in self.nodes}
        for n in self.nodes:
            if n == self.root:
                continue
            p = self.parent[n]
            (self.succ_children if self.kind[n] == SUCC else self.top_children)[p].append(n)

        for n in self.nodes:
            flag = self.ladder[n]
            if self.top_children[n] and flag != TOPPED:
                problems.append(f"{n!r} has top children but ladder flag {flag!r}")
            if flag == TOPPED and not self.top_children[n]:
                problems.append(f"{n!r} is topped but has no top children")
            if flag in (OPEN, TOPPED) and self.succ_children[n]:
                problems.append(
                    f"{n!r} carries a ladder and successor children; "
                    "interpose a child to separate the limit direction"
                )
        if problems:
            raise ValidationError(problems)

        self._path: dict[str, list[str]] = {}
        for n in self.nodes:
            chain = [n]
            while chain[-1] != self.root:
                chain.append(self.parent[chain[-1]])
            self._path[n] = chain[::-1]

    # --- skeleton lookups ---

    def path(self, node: str) -> list[str]:
        """Root path in the skeleton, root first, `node` last."""
        return self._path[node]

    def children(self, node: str) -> list[str]:
        return self.succ_children[node] + self.top_children[node]

    def is_laddered(self, node: str) -> bool:
        return self.ladder[node] != NONE

    def mult_components(self, node: str) -> list[str]:
        """Multiplicity-bearing nodes on the root path, shallowest first."""
        return [w for w in self._path[node] if self.mult[w] != C(1)]

    def leaves(self) -> list[str]:
        return [n for n in self.nodes if not self.children(n) and not self.is_laddered(n)]

    def terminals(self) -> list[str]:
        """Nodes where maximal chains end: bare leaves and open ladders."""
        return [n for n in self.nodes if not self.children(n)]

    def is_pruned(self) -> bool:
        return not self.leaves()

    def path_count(self, node: str) -> Count:
        """Number of copies of `node`: product of multiplicities down the path."""
        total = C(1)
        for w in self._path[node]:
            total = mul(self.cardinals, total, self.mult[w])
        return total

    # --- coordinates ---

    def check_coord(self, c: NodeCoord) -> None:
        problems = []
        if c.node not in self.nodes:
            raise ValidationError(f"unknown node {c.node!r}")
        comps = self.mult_components(c.node)
        given = [n for n, _ in c.copies]
        if given != comps:
            problems.append(
                f"coordinate {c} must assign copies exactly to {comps} in path order"
            )
        for n, i in c.copies:
            m = self.mult.get(n)
            if i < 1:
                problems.append(f"copy index {n}={i} must be >= 1")
            elif m is not None and m.is_finite and i > m.finite:
                problems.append(f"copy index {n}={i} exceeds multiplicity {m}")
        if c.rung is not None:
            if not self.is_laddered(c.node):
                problems.append(f"{c.node!r} has no ladder, rung {c.rung} is invalid")
            if c.rung < 0:
                problems.append("rung must be >= 0")
        if problems:
            raise ValidationError(problems)

    def coord(self, node: str, copies: dict[str, int] | None = None,
              rung: int | None = None) -> NodeCoord:
        if node not in self._path:
            raise ValidationError(f"unknown node {node!r}")
        copies = copies or {}
        comps = self.mult_components(node)
        c = NodeCoord(node, tuple((w, copies.get(w, 1)) for w in comps), rung)
        self.check_coord(c)
        return c

    def relation(self, a: NodeCoord, b: NodeCoord) -> str:
        """One of "=", "<", ">", "||" in the expansion order."""
        self.check_coord(a)
        self.check_coord(b)
        pa, pb = self._path[a.node], self._path[b.node]

        def below(x: NodeCoord, y: NodeCoord) -> bool:
            # x strictly below y
            px, py = self._path[x.node], self._path[y.node]
            if x.node == y.node:
                if x.copies != y.copies:
                    return False
                if x.rung is None:
                    return y.rung is not None
                return y.rung is not None and x.rung < y.rung
            if len(px) >= len(py) or py[: len(px)] != px:
                return False
            dx = dict(x.copies)
            dy = dict(y.copies)
            if any(dy.get(n) != i for n, i in dx.items()):
                return False
            # a rung of x lies under everything past x's ladder, and any child
            # of a laddered node is a top, so the rung imposes no extra check
            return True

        if a.node == b.node and a.copies == b.copies and a.rung == b.rung:
            return "="
        if below(a, b):
            return "<"
        if below(b, a):
            return ">"
        return "||"

    def height_of(self, c: NodeCoord) -> Ordinal:
        self.check_coord(c)
        h = ZERO
        chain = self._path[c.node]
        for child in chain[1:]:
            h = h + (ONE if self.kind[child] == SUCC else OMEGA)
        if c.rung is not None:
            h = h + fin(c.rung + 1)
        return h

    def node_height(self, node: str) -> Ordinal:
        return self.height_of(self.coord(node))

    def tree_height(self) -> Ordinal:
        """Supremum of branch order types."""
        best = ZERO
        for n in self.terminals():
            h = self.node_height(n)
            h = h + (OMEGA if self.is_laddered(n) else ONE)
            best = max(best, h)
        return best

    def successor_count(self, c: NodeCoord) -> Count:
        self.check_coord(c)
        if c.rung is not None or self.is_laddered(c.node):
            return C(1)
        total = C(0)
        for s in self.succ_children[c.node]:
            total = add(self.cardinals, total, self.mult[s])
        return total

    def node_successor_count(self, node: str) -> Count:
        return self.successor_count(self.coord(node))

    def successor_sup(self) -> Count:
        """Supremum of successor counts over the expansion."""
        counts = [C(1)]
        for n in self.nodes:
            counts.append(self.node_successor_count(n))
        return maximum(self.cardinals, counts)

    # --- antichain structure ---

    def frontier_slices(self, n: int) -> list["Slice"]:
        out = []
        for v in self.terminals():
            out.append(Slice(v, n if self.is_laddered(v) else None))
        return out

    def cofinal_antichain_sequence(self, length: int) -> list[list["Slice"]]:
        """Maximal antichains A_1 <= A_2 <= ..., cofinal as the pattern continues.

        A_n takes every copy of every bare leaf together with rung n of every
        open ladder; comparability to some member follows because every node
        sits below a terminal.
        """
        if length < 1:
            raise ValidationError("length must be >= 1")
        if not self.terminals():
            raise ValidationError("presentation has no terminal nodes")
        return [self.frontier_slices(n) for n in range(1, length + 1)]

    def special_decomposition(self) -> dict:
        """Cover of the expansion by countably many antichains.

        Distinct copies of one skeleton node are pairwise incomparable, and so
        are the k-th rungs of one ladder across copies, so the node slices plus
        the per-rung ladder slices always work for a finite skeleton.
        """
        return {
            "node_slices": [Slice(v, None) for v in self.nodes],
            "ladder_rung_families": [v for v in self.nodes if self.is_laddered(v)],
        }

    # --- finite truncation ---

    def truncate(self, depth: int = 4, copies: int = 3) -> "Expansion":
        return Expansion(self, depth, copies)

    def copy_range(self, node: str, cap: int) -> range:
        m = self.mult[node]
        top = cap if m.is_infinite else min(m.finite, cap)
        return range(1, top + 1)


@dataclass(frozen=True)
class Slice:
    """All copies of one skeleton node, or of one rung of its ladder."""

    node: str
    rung: int | None = None

    def __str__(self) -> str:
        return self.node if self.rung is None else f"{self.node}:{self.rung}"


class Expansion:
    """Finite truncation of the expansion: `depth` rungs per ladder, copy
    indices capped at `copies`.  Used by oracles and reports."""

    def __init__(self, tree: Tree, depth: int, copies: int):
        if depth < 1 or copies < 1:
            raise ValidationError("truncation parameters must be >= 1")
        self.tree = tree
        self.depth = depth
        self.copies = copies
        self.parent_of: dict[NodeCoord, NodeCoord | None] = {}
        self._place_node(tree.root, {}, None)
        self.elements = list(self.parent_of)
        self.children_of: dict[NodeCoord, list[NodeCoord]] = {e: [] for e in self.elements}
        for e, p in self.parent_of.items():
            if p is not None:
                self.children_of[p].append(e)

    def _place_node(self, node: str, copies: dict[str, int], parent: NodeCoord | None):
        t = self.tree
        if t.mult[node] != C(1):
            for i in t.copy_range(node, self.copies):
                self._place_copy(node, {**copies, node: i}, parent)
        else:
            self._place_copy(node, copies, parent)

    def _place_copy(self, node: str, copies: dict[str, int], parent: NodeCoord | None):
        t = self.tree
        me = t.coord(node, copies)
        self.parent_of[me] = parent
        for s in t.succ_children[node]:
            self._place_node(s, copies, me)
        anchor = me
        if t.is_laddered(node):
            for k in range(self.depth):
                r = t.coord(node, copies, rung=k)
                self.parent_of[r] = anchor
                anchor = r
            # tops sit above the whole ladder; in the truncation they hang off
            # the last rung so the induced order matches the expansion
            for u in t.top_children[node]:
                self._place_node(u, copies, anchor)

    def ancestors(self, c: NodeCoord) -> list[NodeCoord]:
        out = []
        cur = self.parent_of[c]
        while cur is not None:
            out.append(cur)
            cur = self.parent_of[cur]
        return out[::-1]

    def leq(self, a: NodeCoord, b: NodeCoord) -> bool:
        return a == b or a in self.ancestors(b)

    def down_sets(self) -> list[frozenset[NodeCoord]]:
        """All nonempty down-closed chains: the truncation's path census."""
        out = []
        for c in self.elements:
            chain = frozenset([c, *self.ancestors(c)])
            out.append(chain)
        return out


def validate(spec: StagedTree) -> Tree:
    return Tree(spec)


def split_named_copies(tree: Tree, picks: dict[str, list[int]]) -> tuple[StagedTree, dict]:
    """Rewrite the presentation so the picked copy indices of each picked node
    become individual multiplicity-1 siblings (with cloned subtrees), leaving a
    residual node for the unnamed copies when any remain.

    Returns the new raw presentation and a map
    (old node, frozenset of (picked node, index) choices) -> new node name.
    """
    for n, idx in picks.items():
        if n not in tree.nodes:
            raise ValidationError(f"unknown node {n!r}")
        if tree.mult[n] == C(1):
            raise ValidationError(f"{n!r} has multiplicity 1, nothing to split")
        m = tree.mult[n]
        if m.is_finite and (len(idx) > m.finite or any(i > m.finite for i in idx)):
            raise ValidationError(f"picked indices exceed multiplicity of {n!r}")
        if len(set(idx)) != len(idx):
            raise ValidationError(f"duplicate picked index on {n!r}")

    spec = StagedTree(
        nodes=[], root="", parent={}, edge_kind={}, ladder_flag={},
        multiplicity={}, cardinals=CardinalContext(list(tree.cardinals.names)),
        name=tree.name,
    )
    naming: dict = {}

    def clone(node: str, suffix: str, choice: frozenset, parent: str | None, kind: str | None,
              mult_override: Count | None):
        new = node + suffix
        spec.nodes.append(new)
        naming[(node, choice)] = new
        if parent is None:
            spec.root = new
        else:
            spec.parent[new] = parent
            spec.edge_kind[new] = kind
        spec.ladder_flag[new] = tree.ladder[node]
        spec.multiplicity[new] = mult_override if mult_override is not None else tree.mult[node]
        for ch in tree.children(node):
            place(ch, suffix, choice, new)
        return new

    def place(node: str, suffix: str, choice: frozenset, parent: str | None):
        kind = tree.kind.get(node)
        if node in picks:
            m = tree.mult[node]
            named = picks[node]
            for i in named:
                clone(node, f"{suffix}_{i}", choice | {(node, i)}, parent, kind, C(1))
            rest = m if m.is_infinite else C(m.finite - len(named))
            if rest != C(0):
                clone(node, f"{suffix}_rest", choice | {(node, 0)}, parent, kind, rest)
        else:
            clone(node, suffix, choice, parent, kind, None)

    place(tree.root, "", frozenset(), None)
    return spec, naming
