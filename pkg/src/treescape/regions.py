"""Point classes and a decidable algebra of subsets for the three spaces.

Points of the path space of a presented tree fall into finitely many classes:
`node_path(v)` (chains with maximum a copy of v), `ladder_path(v)` (maximum a
rung of v's ladder) and `ray(v)` (the endless chain through a copy of v's
ladder).  The ray and branch spaces keep the appropriate subsets.  Points of
one class differ only in their copy indices (and rung index), so a finite
"atom" table — one row per pattern of named/unnamed indices — evaluates any
finite boolean combination of cone generators exactly.

Generators are [c] = "points whose chain contains coordinate c" where c may
pin copy indices or range over all-but-finitely-many of them, plus the ladder
cone "points whose chain contains every rung of a ladder".  Membership,
emptiness, inclusion, disjointness and counting are all decided against the
atom table; the table is exact because a point with an unnamed index cannot be
told apart from any other unnamed choice by the regions that named the table's
material.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .counts import C, Count, add, mul, sub_finite
from .staged import NodeCoord, Tree, ValidationError

PATH = "path"
RAY = "ray"
BRANCH = "branch"
KINDS = (PATH, RAY, BRANCH)

NODE_PATH = "node_path"
LADDER_PATH = "ladder_path"
RAY_CLASS = "ray"


class _Residual:
    __slots__ = ()

    def __repr__(self):
        return "*"


class _Tail:
    __slots__ = ()

    def __repr__(self):
        return "tail"


RESIDUAL = _Residual()
TAIL = _Tail()


@dataclass(frozen=True)
class PointClass:
    kind: str
    anchor: str

    def __str__(self) -> str:
        return f"{self.kind}({self.anchor})"


@dataclass(frozen=True)
class ClassInfo:
    cls: PointClass
    count: Count
    components: tuple[str, ...]
    is_branch: bool


def class_table(tree: Tree, kind: str) -> list[ClassInfo]:
    """Point classes of the chosen space, in node declaration order."""
    if kind not in KINDS:
        raise ValidationError(f"unknown space kind {kind!r}")
    out = []
    for v in tree.nodes:
        comps = tuple(tree.mult_components(v))
        base = tree.path_count(v)
        bare_leaf = not tree.children(v) and not tree.is_laddered(v)
        if kind in (PATH, BRANCH):
            if kind == PATH or bare_leaf:
                out.append(ClassInfo(PointClass(NODE_PATH, v), base, comps, bare_leaf))
        if tree.is_laddered(v):
            if kind == PATH:
                cnt = mul(tree.cardinals, base, C("aleph0"))
                out.append(ClassInfo(PointClass(LADDER_PATH, v), cnt, comps, False))
            open_ray = tree.ladder[v] == "open"
            if kind in (PATH, RAY) or open_ray:
                out.append(ClassInfo(PointClass(RAY_CLASS, v), base, comps, open_ray))
    return out


# --- region syntax ---


@dataclass(frozen=True)
class Sel:
    """Copy-index selector: a named index, or everything outside `excluded`."""

    index: int | None = None
    excluded: frozenset = frozenset()

    def matches(self, val) -> bool:
        if self.index is not None:
            return val == self.index
        if val is RESIDUAL:
            return True
        return val not in self.excluded

    def __str__(self) -> str:
        if self.index is not None:
            return str(self.index)
        if self.excluded:
            return "!" + ",".join(str(i) for i in sorted(self.excluded))
        return "*"


ANY = Sel()


@dataclass(frozen=True)
class Gen:
    """[c]: points whose chain contains the selected coordinate."""

    node: str
    sels: tuple[tuple[str, Sel], ...] = ()
    rung: int | None = None

    def sel_of(self, comp: str) -> Sel:
        for n, s in self.sels:
            if n == comp:
                return s
        return ANY

    def __str__(self) -> str:
        s = self.node
        if self.sels:
            s += "#" + ",".join(f"{n}={sel}" for n, sel in self.sels)
        if self.rung is not None:
            s += f":{self.rung}"
        return f"[{s}]"


@dataclass(frozen=True)
class Cone:
    """Points whose chain contains every rung of the selected ladder."""

    node: str
    sels: tuple[tuple[str, Sel], ...] = ()

    def sel_of(self, comp: str) -> Sel:
        for n, s in self.sels:
            if n == comp:
                return s
        return ANY

    def __str__(self) -> str:
        s = self.node
        if self.sels:
            s += "#" + ",".join(f"{n}={sel}" for n, sel in self.sels)
        return f"[{s}:all]"


@dataclass(frozen=True)
class Union:
    parts: tuple

    def __str__(self):
        return "(" + " | ".join(str(p) for p in self.parts) + ")" if self.parts else "0"


@dataclass(frozen=True)
class Inter:
    parts: tuple

    def __str__(self):
        return "(" + " & ".join(str(p) for p in self.parts) + ")" if self.parts else "1"


@dataclass(frozen=True)
class Not:
    part: object

    def __str__(self):
        return f"~{self.part}"


FULL = Inter(())
EMPTY = Union(())


def union(*parts):
    return Union(tuple(parts))


def inter(*parts):
    return Inter(tuple(parts))


def minus(a, b):
    return Inter((a, Not(b)))


def gen_of(tree: Tree, node: str, sels: dict[str, Sel] | None = None,
           rung: int | None = None) -> Gen:
    """Validated generator for `node`, selectors defaulting to generic."""
    if node not in tree.nodes:
        raise ValidationError(f"unknown node {node!r}")
    sels = sels or {}
    comps = tree.mult_components(node)
    for n in sels:
        if n not in comps:
            raise ValidationError(f"{n!r} bears no copy index on the path to {node!r}")
    if rung is not None:
        if not tree.is_laddered(node):
            raise ValidationError(f"{node!r} has no ladder")
        if rung < 0:
            raise ValidationError("rung must be >= 0")
    for n, s in sels.items():
        m = tree.mult[n]
        if s.index is not None and m.is_finite and s.index > m.finite:
            raise ValidationError(f"copy index {n}={s.index} exceeds multiplicity {m}")
    return Gen(node, tuple((n, sels[n]) for n in comps if n in sels), rung)


def cone_of(tree: Tree, node: str, sels: dict[str, Sel] | None = None) -> Cone:
    if not tree.is_laddered(node):
        raise ValidationError(f"{node!r} has no ladder")
    g = gen_of(tree, node, sels, None)
    return Cone(g.node, g.sels)


def gen_for_coord(tree: Tree, c: NodeCoord) -> Gen:
    tree.check_coord(c)
    return Gen(c.node, tuple((n, Sel(index=i)) for n, i in c.copies), c.rung)


# --- atoms ---


@dataclass(frozen=True)
class Atom:
    cls: PointClass
    pattern: tuple[tuple[str, object], ...]  # comp -> int | RESIDUAL
    rung: object = None  # int | TAIL | None

    def value(self, comp: str):
        for n, v in self.pattern:
            if n == comp:
                return v
        return None

    def __str__(self) -> str:
        parts = ",".join(f"{n}={v}" for n, v in self.pattern)
        s = str(self.cls)
        if parts:
            s += "#" + parts
        if self.rung is not None:
            s += f":{self.rung}"
        return s


def _walk(region, on_gen, on_cone):
    if isinstance(region, Gen):
        on_gen(region)
    elif isinstance(region, Cone):
        on_cone(region)
    elif isinstance(region, (Union, Inter)):
        for p in region.parts:
            _walk(p, on_gen, on_cone)
    elif isinstance(region, Not):
        _walk(region.part, on_gen, on_cone)
    else:
        raise ValidationError(f"not a region: {region!r}")


class Ctx:
    """Atom table for one space, exact for regions over the given material.

    `material` is any iterable of regions and atoms whose named copy indices
    and rungs the table must distinguish; `extra` maps a node name to how many
    additional concrete indices to reserve (used for pairwise-distinctness
    arguments).
    """

    def __init__(self, tree: Tree, kind: str, material=(), extra: dict[str, int] | None = None):
        self.tree = tree
        self.kind = kind
        self.classes = class_table(tree, kind)
        used: dict[str, set[int]] = {}
        rung_hi: dict[str, int] = {}

        def see_sel(node, sels):
            for n, s in sels:
                box = used.setdefault(n, set())
                if s.index is not None:
                    box.add(s.index)
                box.update(s.excluded)

        def on_gen(g: Gen):
            see_sel(g.node, g.sels)
            if g.rung is not None:
                rung_hi[g.node] = max(rung_hi.get(g.node, -1), g.rung)

        def on_cone(c: Cone):
            see_sel(c.node, c.sels)

        for m in material:
            if isinstance(m, Atom):
                for n, v in m.pattern:
                    if v is not RESIDUAL:
                        used.setdefault(n, set()).add(v)
                if isinstance(m.rung, int):
                    rung_hi[m.cls.anchor] = max(rung_hi.get(m.cls.anchor, -1), m.rung)
            else:
                _walk(m, on_gen, on_cone)

        for node, k in (extra or {}).items():
            mult = tree.mult[node]
            box = used.setdefault(node, set())
            i = 1
            while k > 0:
                if mult.is_finite and i > mult.finite:
                    break
                if i not in box:
                    box.add(i)
                    k -= 1
                i += 1

        self.used: dict[str, tuple[int, ...]] = {
            n: tuple(sorted(v)) for n, v in used.items()
        }
        self.rung_hi = rung_hi
        self.atoms: list[Atom] = []
        for info in self.classes:
            axes = [self._axis(comp) for comp in info.components]
            rungs: list
            if info.cls.kind == LADDER_PATH:
                rungs = list(range(self.rung_top(info.cls.anchor) + 1)) + [TAIL]
            else:
                rungs = [None]
            for combo in itertools.product(*axes):
                if any(v is None for v in combo):
                    continue
                pattern = tuple(zip(info.components, combo))
                for r in rungs:
                    self.atoms.append(Atom(info.cls, pattern, r))

    def _axis(self, comp: str) -> list:
        vals: list = [i for i in self.used.get(comp, ()) if self._in_domain(comp, i)]
        if self.residual_count(comp) != C(0):
            vals.append(RESIDUAL)
        return vals or [None]

    def _in_domain(self, comp: str, i: int) -> bool:
        m = self.tree.mult[comp]
        return m.is_infinite or i <= m.finite

    def rung_top(self, node: str) -> int:
        """Largest concretely tabled rung; TAIL covers everything above."""
        return self.rung_hi.get(node, -1) + 1

    def residual_count(self, comp: str) -> Count:
        m = self.tree.mult[comp]
        k = len([i for i in self.used.get(comp, ()) if self._in_domain(comp, i)])
        return sub_finite(m, k)

    def class_info(self, cls: PointClass) -> ClassInfo:
        for info in self.classes:
            if info.cls == cls:
                return info
        raise ValidationError(f"{cls} is not a class of the {self.kind} space")

    def atom_count(self, a: Atom) -> Count:
        total = C(1)
        for comp, v in a.pattern:
            if v is RESIDUAL:
                total = mul(self.tree.cardinals, total, self.residual_count(comp))
        if a.rung is TAIL:
            total = mul(self.tree.cardinals, total, C("aleph0"))
        return total

    def atoms_of(self, cls: PointClass) -> list[Atom]:
        return [a for a in self.atoms if a.cls == cls]

    def atom_for(self, cls: PointClass, copies: dict[str, int], rung: int | None = None) -> Atom:
        """The atom holding the concrete point; its indices must be tabled."""
        info = self.class_info(cls)
        pattern = []
        for comp in info.components:
            i = copies.get(comp, 1)
            if i not in self.used.get(comp, ()):
                raise ValidationError(
                    f"index {comp}={i} is not tabled; include the point in the material"
                )
            pattern.append((comp, i))
        r: object = None
        if cls.kind == LADDER_PATH:
            r = rung if rung is not None else 0
            if r > self.rung_top(cls.anchor):
                r = TAIL
        elif rung is not None:
            raise ValidationError(f"{cls} takes no rung")
        return Atom(cls, tuple(pattern), r)


# --- evaluation ---


def _chain_has(tree: Tree, atom: Atom, node: str, sels, rung: int | None) -> bool:
    v = atom.cls.anchor
    path = tree.path(v)
    if node not in path:
        return False
    for comp, sel in sels:
        val = atom.value(comp)
        if val is None or not sel.matches(val):
            return False
    if rung is None:
        return True
    if node != v:
        # a laddered proper ancestor on the chain contributes all its rungs
        return True
    if atom.cls.kind == RAY_CLASS:
        return True
    if atom.cls.kind == LADDER_PATH:
        return atom.rung is TAIL or rung <= atom.rung
    return False  # node_path(v) stops below its own ladder


def _chain_has_cone(tree: Tree, atom: Atom, node: str, sels) -> bool:
    v = atom.cls.anchor
    path = tree.path(v)
    if node not in path:
        return False
    for comp, sel in sels:
        val = atom.value(comp)
        if val is None or not sel.matches(val):
            return False
    if node != v:
        return True
    return atom.cls.kind == RAY_CLASS


def holds(ctx: Ctx, region, atom: Atom) -> bool:
    if isinstance(region, Gen):
        return _chain_has(ctx.tree, atom, region.node, region.sels, region.rung)
    if isinstance(region, Cone):
        return _chain_has_cone(ctx.tree, atom, region.node, region.sels)
    if isinstance(region, Union):
        return any(holds(ctx, p, atom) for p in region.parts)
    if isinstance(region, Inter):
        return all(holds(ctx, p, atom) for p in region.parts)
    if isinstance(region, Not):
        return not holds(ctx, region.part, atom)
    raise ValidationError(f"not a region: {region!r}")


def atoms_in(ctx: Ctx, region) -> list[Atom]:
    return [a for a in ctx.atoms if holds(ctx, region, a)]


def is_empty(ctx: Ctx, region) -> bool:
    return not atoms_in(ctx, region)


def is_subset(ctx: Ctx, a, b) -> bool:
    return is_empty(ctx, Inter((a, Not(b))))


def is_disjoint(ctx: Ctx, a, b) -> bool:
    return is_empty(ctx, Inter((a, b)))


def region_count(ctx: Ctx, region, cls: PointClass | None = None) -> Count:
    total = C(0)
    for a in atoms_in(ctx, region):
        if cls is None or a.cls == cls:
            total = add(ctx.tree.cardinals, total, ctx.atom_count(a))
    return total


def class_region(ctx: Ctx, cls: PointClass, sels: dict[str, Sel] | None = None):
    """All points of the class (optionally with copy selectors) as a region."""
    t = ctx.tree
    v = cls.anchor
    base = gen_of(t, v, sels)
    if cls.kind == NODE_PATH:
        if t.is_laddered(v):
            return minus(base, Gen(v, base.sels, 0))
        kids = [gen_of(t, c, dict(base.sels)) for c in t.children(v)]
        return minus(base, Union(tuple(kids))) if kids else base
    if cls.kind == LADDER_PATH:
        return minus(Gen(v, base.sels, 0), Cone(v, base.sels))
    if cls.kind == RAY_CLASS:
        cone = Cone(v, base.sels)
        tops = [gen_of(t, u, dict(base.sels)) for u in t.top_children[v]]
        return minus(cone, Union(tuple(tops))) if tops else cone
    raise ValidationError(f"bad class kind {cls.kind!r}")


def atom_region(ctx: Ctx, atom: Atom):
    """A region whose points are exactly the atom's points."""
    sels = {}
    for comp, val in atom.pattern:
        if val is RESIDUAL:
            sels[comp] = Sel(excluded=frozenset(ctx.used.get(comp, ())))
        else:
            sels[comp] = Sel(index=val)
    base = class_region(ctx, atom.cls, sels)
    if atom.cls.kind != LADDER_PATH:
        return base
    v = atom.cls.anchor
    gsels = tuple((c, s) for c, s in gen_of(ctx.tree, v, sels).sels)
    if atom.rung is TAIL:
        return inter(base, Gen(v, gsels, ctx.rung_top(v) + 1))
    pins = inter(base, Gen(v, gsels, atom.rung))
    return minus(pins, Gen(v, gsels, atom.rung + 1))


# --- basic opens and openness ---


@dataclass(frozen=True)
class Basic:
    """A standard basic open: the cone of t minus finitely many cones.

    `t` may carry all-but selectors, in which case the object stands for the
    family of basics obtained by instantiating them (one per copy), and each
    block repeats the instantiation choice.
    """

    t: Gen
    blocks: tuple = ()

    def region(self):
        if not self.blocks:
            return self.t
        return Inter((self.t, Not(Union(self.blocks))))

    def __str__(self):
        if not self.blocks:
            return str(self.t)
        return f"{self.t} - {{{', '.join(str(b) for b in self.blocks)}}}"


def _sels_for_atom(ctx: Ctx, atom: Atom, upto: str) -> dict[str, Sel]:
    """Selectors pinning the atom's copies for components at or below `upto`."""
    t = ctx.tree
    keep = set(t.path(upto))
    out = {}
    for comp, val in atom.pattern:
        if comp not in keep:
            continue
        if val is RESIDUAL:
            out[comp] = Sel(excluded=frozenset(ctx.used.get(comp, ())))
        else:
            out[comp] = Sel(index=val)
    return out


def chain_coords(ctx: Ctx, atom: Atom) -> list[Gen]:
    """Coordinates along the atom's chain, shallowest first."""
    t = ctx.tree
    v = atom.cls.anchor
    out = []
    for w in t.path(v):
        sels = _sels_for_atom(ctx, atom, w)
        out.append(gen_of(t, w, sels))
        deep_rungs = t.is_laddered(w) and (
            w != v or atom.cls.kind == RAY_CLASS
        )
        if deep_rungs:
            for k in range(ctx.rung_top(w) + 1):
                out.append(gen_of(t, w, sels, k))
        elif w == v and atom.cls.kind == LADDER_PATH:
            top = atom.rung if isinstance(atom.rung, int) else ctx.rung_top(v)
            for k in range(top + 1):
                out.append(gen_of(t, w, sels, k))
    return out


def _named_top_blocks(ctx: Ctx, atom: Atom) -> list[Gen]:
    t = ctx.tree
    v = atom.cls.anchor
    sels = _sels_for_atom(ctx, atom, v)
    out = []
    for u in t.top_children[v]:
        if t.mult[u] == C(1):
            out.append(gen_of(t, u, sels))
            continue
        for i in ctx.used.get(u, ()):
            if ctx._in_domain(u, i):
                out.append(gen_of(t, u, {**sels, u: Sel(index=i)}))
    return out


def _succ_block_choices(ctx: Ctx, atom: Atom) -> list[list[Gen]]:
    """Block-set menu at a node-path point: per successor child, any named
    subset, optionally topped off with the whole remainder when finite."""
    t = ctx.tree
    v = atom.cls.anchor
    sels = _sels_for_atom(ctx, atom, v)
    if t.is_laddered(v):
        return [[], [gen_of(t, v, sels, 0)]]
    per_child = []
    for c in t.succ_children[v]:
        named = [i for i in ctx.used.get(c, ()) if ctx._in_domain(c, i)]
        opts: list[list[Gen]] = []
        for r in range(len(named) + 1):
            for combo in itertools.combinations(named, r):
                opts.append([gen_of(t, c, {**sels, c: Sel(index=i)}) for i in combo])
        if t.mult[c].is_finite:
            # with finite multiplicity "all copies but these" is a legal
            # finite block set, so keeping a named subset is on the menu
            whole = t.mult[c].finite
            for r in range(len(named) + 1):
                for keep in itertools.combinations(named, r):
                    if len(keep) >= whole:
                        opts.append([])
                    elif whole == 1:
                        opts.append([gen_of(t, c, sels)])
                    else:
                        opts.append([gen_of(
                            t, c, {**sels, c: Sel(excluded=frozenset(keep))})])
        per_child.append(opts)
    out = []
    for combo in itertools.product(*per_child) if per_child else [()]:
        out.append([g for part in combo for g in part])
    return out


def basic_opens_at(ctx: Ctx, atom: Atom) -> list[Basic]:
    """The canonical neighbourhood menu at the atom, coarsest first."""
    out = []
    if atom.cls.kind == RAY_CLASS:
        tops = _named_top_blocks(ctx, atom)
        for t_gen in chain_coords(ctx, atom):
            for r in range(len(tops) + 1):
                for blocked in itertools.combinations(tops, r):
                    out.append(Basic(t_gen, tuple(blocked)))
        return out
    if atom.cls.kind == NODE_PATH:
        v = atom.cls.anchor
        sels = _sels_for_atom(ctx, atom, v)
        t_gen = gen_of(ctx.tree, v, sels)
        for blocks in _succ_block_choices(ctx, atom):
            out.append(Basic(t_gen, tuple(blocks)))
        return out
    # ladder_path: [rung k] minus [rung k+1] isolates the point
    v = atom.cls.anchor
    sels = _sels_for_atom(ctx, atom, v)
    k = atom.rung if isinstance(atom.rung, int) else ctx.rung_top(v) + 1
    out.append(Basic(gen_of(ctx.tree, v, sels, k),
                     (gen_of(ctx.tree, v, sels, k + 1),)))
    return out


def find_basic_inside(ctx: Ctx, atom: Atom, target_atoms: frozenset) -> Basic | None:
    """Smallest-t basic neighbourhood of the atom inside the atom set, if any.

    The menu is exact: block sets beyond the tabled names never help, and
    coordinates deeper than the tabled rungs behave like the tabled deep one.
    A ladder-path atom is isolated by [rung k] minus [rung k+1], instantiated
    per point of the atom, so it only needs itself covered.
    """
    if atom.cls.kind == LADDER_PATH:
        if atom in target_atoms:
            return basic_opens_at(ctx, atom)[0]
        return None
    for b in basic_opens_at(ctx, atom):
        if not holds(ctx, b.region(), atom):
            continue
        if all(a in target_atoms for a in atoms_in(ctx, b.region())):
            return b
    return None


def open_in(ctx: Ctx, atoms: frozenset) -> tuple[bool, Atom | None]:
    """Is the atom set open?  Returns a witness atom on failure."""
    for a in atoms:
        if find_basic_inside(ctx, a, atoms) is None:
            return False, a
    return True, None


def is_open(ctx: Ctx, region) -> tuple[bool, Atom | None]:
    return open_in(ctx, frozenset(atoms_in(ctx, region)))


def closure_atoms(ctx: Ctx, region_atoms: frozenset) -> frozenset:
    """Atoms meeting every basic neighbourhood: the closure, atomwise."""
    out = set(region_atoms)
    for a in ctx.atoms:
        if a in out:
            continue
        if a.cls.kind == LADDER_PATH:
            continue  # each of its points has a singleton neighbourhood
        touches = True
        for b in basic_opens_at(ctx, a):
            if not holds(ctx, b.region(), a):
                continue
            if not any(x in region_atoms for x in atoms_in(ctx, b.region())):
                touches = False
                break
        if touches:
            out.add(a)
    return frozenset(out)


def closure_of(ctx: Ctx, region) -> frozenset:
    return closure_atoms(ctx, frozenset(atoms_in(ctx, region)))


def is_dense(ctx: Ctx, region) -> bool:
    return closure_of(ctx, region) == frozenset(ctx.atoms)
