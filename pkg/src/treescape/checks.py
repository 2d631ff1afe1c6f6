"""Property checkers and operators over presented spaces.

Every negative verdict carries a finite witness that the region algebra can
re-check.  The family checkers work on parameterized member shapes: a plain
region, or the rung family of one ladder (the only way a staged generator
family is infinite along a chain, which is why completeness only has content
on rung tails: a finite centered family has nonempty intersection by
definition).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .counts import ALEPH0, C
from .points import Space
from .regions import (
    ANY,
    RAY,
    RAY_CLASS,
    Atom,
    Basic,
    Cone,
    Ctx,
    Gen,
    Not,
    PointClass,
    Sel,
    ValidationError,
    _walk,
    atom_region,
    atoms_in,
    basic_opens_at,
    chain_coords,
    closure_atoms,
    find_basic_inside,
    gen_for_coord,
    gen_of,
    holds,
    is_disjoint,
    is_empty,
    is_open,
    is_subset,
    minus,
    union,
)
from .staged import NodeCoord, Tree


# --- monotone normality ---


def _forced_depth(ctx: Ctx, atom: Atom, region) -> int:
    """Index into the atom's chain of the deepest coordinate the region's own
    generators mention; 0 when the region names nothing on the chain."""
    tree = ctx.tree
    coords = chain_coords(ctx, atom)
    copies = dict(atom.pattern)
    onpath = set(tree.path(atom.cls.anchor))
    mentioned = []

    def see(node, sels, rung):
        if node not in onpath:
            return
        if any(not s.matches(copies.get(c, 1)) for c, s in sels):
            return
        mentioned.append((node, rung))

    _walk(region, lambda g: see(g.node, g.sels, g.rung),
          lambda c: see(c.node, c.sels, None))

    best = 0
    for node, rung in mentioned:
        for i, g in enumerate(coords):
            if g.node == node and g.rung == rung:
                best = max(best, i)
    return best


def mono_normal_operator(space: Space, x: NodeCoord, u_region) -> Basic:
    """Canonical standard basic [t,F] with x inside and [t,F] within U.

    t is the deepest coordinate on x's chain that U itself mentions (the
    target leaves anything deeper indistinguishable), F the fewest blocked
    tops.  For pairs with x outside V and y outside U the outputs are
    disjoint, which is the strong clause of the property.
    """
    tree = space.tree
    if space.kind != RAY:
        raise ValidationError("the operator is defined on ray spaces")
    if not tree.is_laddered(x.node):
        raise ValidationError(f"{x} is not a ray of the space")
    ctx = space.ctx(material=[u_region, gen_for_coord(tree, NodeCoord(x.node, x.copies))])
    x_atom = ctx.atom_for(PointClass(RAY_CLASS, x.node), dict(x.copies))
    if not holds(ctx, u_region, x_atom):
        raise ValidationError(f"{x} is not in the target region")
    target = frozenset(atoms_in(ctx, u_region))
    t_star = chain_coords(ctx, x_atom)[_forced_depth(ctx, x_atom, u_region)]
    for b in basic_opens_at(ctx, x_atom):
        if b.t != t_star or not holds(ctx, b.region(), x_atom):
            continue
        if all(a in target for a in atoms_in(ctx, b.region())):
            return b
    b = find_basic_inside(ctx, x_atom, target)
    if b is None:
        raise ValidationError("no standard basic neighbourhood fits inside the "
                              "target; the region is not open at the point")
    return b


def hausdorff_witness(space: Space, x: NodeCoord, y: NodeCoord) -> dict:
    """Disjoint standard basics around two distinct rays, via the operator."""
    tree = space.tree
    gx = gen_for_coord(tree, NodeCoord(x.node, x.copies))
    gy = gen_for_coord(tree, NodeCoord(y.node, y.copies))
    ctx = space.ctx(material=[gx, gy])
    ax = ctx.atom_for(PointClass(RAY_CLASS, x.node), dict(x.copies))
    ay = ctx.atom_for(PointClass(RAY_CLASS, y.node), dict(y.copies))
    if ax == ay:
        raise ValidationError("points coincide")
    bx = mono_normal_operator(space, x, Not(atom_region(ctx, ay)))
    by = mono_normal_operator(space, y, Not(atom_region(ctx, ax)))
    ctx2 = space.ctx(material=[bx.region(), by.region()])
    return {
        "x": str(bx),
        "y": str(by),
        "disjoint": is_disjoint(ctx2, bx.region(), by.region()),
    }


def _concrete_rays(space: Space, ctx: Ctx) -> list[tuple[NodeCoord, Atom]]:
    """Rays of the table with fully named copy patterns, as coordinates."""
    out = []
    for a in ctx.atoms:
        if a.cls.kind != RAY_CLASS:
            continue
        if any(not isinstance(val, int) for _, val in a.pattern):
            continue
        out.append((space.tree.coord(a.cls.anchor, dict(a.pattern)), a))
    return out


def mono_normal_scan(space: Space, copies: int = 2,
                     max_quadruples: int | None = None) -> dict:
    """Operator disjointness over every tabled quadruple (x, U, y, V) with
    x outside V and y outside U, the defining clause of the property."""
    if space.kind != RAY:
        raise ValidationError("the scan is defined on ray spaces")
    ctx = space.ctx(extra={n: copies for n in space.tree.nodes
                           if space.tree.mult[n] != C(1)})
    rays = _concrete_rays(space, ctx)
    checked = 0
    failures = []
    for (x, ax), (y, ay) in itertools.permutations(rays, 2):
        us = [b for b in basic_opens_at(ctx, ax) if not holds(ctx, b.region(), ay)]
        vs = [b for b in basic_opens_at(ctx, ay) if not holds(ctx, b.region(), ax)]
        for u in us:
            bu = mono_normal_operator(space, x, u.region())
            for v in vs:
                if max_quadruples is not None and checked >= max_quadruples:
                    return {"holds": not failures, "quadruples": checked,
                            "failures": failures, "truncated": True}
                bv = mono_normal_operator(space, y, v.region())
                pair_ctx = space.ctx(material=[bu.region(), bv.region()])
                checked += 1
                if not is_disjoint(pair_ctx, bu.region(), bv.region()):
                    failures.append({
                        "x": str(x), "u": str(u), "y": str(y), "v": str(v),
                        "bx": str(bu), "by": str(bv),
                    })
    return {"holds": not failures, "quadruples": checked, "failures": failures}


def seeded_cover(space: Space, seed: int, copies: int = 2) -> list:
    """Deterministic open cover of the ray space: one randomly chosen
    canonical basic around every tabled atom."""
    import random

    if space.kind != RAY:
        raise ValidationError("covers are drawn on ray spaces")
    rng = random.Random(seed)
    ctx = space.ctx(extra={n: copies for n in space.tree.nodes
                           if space.tree.mult[n] != C(1)})
    cover = []
    seen = set()
    for a in sorted(ctx.atoms, key=str):
        menu = basic_opens_at(ctx, a)
        pick = rng.choice(menu)
        if str(pick) not in seen:
            seen.add(str(pick))
            cover.append(pick.region())
    return cover


# --- compactness and Lindelof tier ---


def lindelof_number(tree: Tree) -> dict:
    """Smallest tier bounding subcover sizes, with an irreducible witness."""
    if not tree.is_pruned():
        raise ValidationError("the criterion is stated for pruned trees")
    sup = tree.successor_sup()
    if sup.is_finite:
        tier = ALEPH0
    else:
        tier = tree.cardinals.successor_tier(sup.symbol)
    witness = None
    if sup.is_infinite:
        worst = next(v for v in tree.nodes if tree.node_successor_count(v) == sup)
        witness = _fan_cover_witness(tree, worst)
    return {"tier": tier, "sup": str(sup), "witness": witness}


def _fan_cover_witness(tree: Tree, v: str) -> dict:
    """The cover that forces the tier: outside [v], plus one cone per child.

    Each fan cone holds a ray missed by every other member, so no subfamily
    of smaller size covers; verified with two named fan copies per child.
    """
    space = Space(tree, RAY)
    base = gen_of(tree, v)
    fan = [gen_of(tree, c) for c in tree.succ_children[v]]
    pieces = [Not(base)] + fan
    ctx = space.ctx(material=pieces, extra={c: 2 for c in tree.succ_children[v]})
    covers = is_empty(ctx, Not(union(*pieces)))
    irreducible = True
    for c in tree.succ_children[v]:
        named = gen_of(tree, c, {c: Sel(index=1)} if tree.mult[c] != C(1) else {})
        others = [Not(base)] + [gen_of(tree, d) for d in tree.succ_children[v] if d != c]
        if tree.mult[c] != C(1):
            others.append(gen_of(tree, c, {c: Sel(excluded=frozenset([1]))}))
        if is_empty(ctx, minus(named, union(*others))):
            irreducible = False
    return {
        "node": v,
        "members": [str(p) for p in pieces],
        "covers": covers,
        "irreducible": irreducible,
        "fan_size": str(tree.node_successor_count(v)),
    }


def is_compact(tree: Tree) -> bool:
    return tree.is_pruned() and lindelof_number(tree)["tier"] == ALEPH0


# --- families ---


@dataclass(frozen=True)
class FamilyMember:
    """A region, or the whole rung family of one ladder (label kind rungs)."""

    label: str
    kind: str  # "region" | "rungs"
    region: object = None
    node: str | None = None
    sels: tuple = ()


def standard_family(tree: Tree) -> list[FamilyMember]:
    """The generator family: one cone per node, one rung family per ladder."""
    out = []
    for v in tree.nodes:
        out.append(FamilyMember(f"[{v}]", "region", gen_of(tree, v)))
        if tree.is_laddered(v):
            out.append(FamilyMember(f"[{v}:*]", "rungs", None, v))
    return out


def _sel_patterns(ctx: Ctx, node: str, pinned: dict[str, Sel] | None = None):
    """Concrete selector assignments: named indices plus the residual band."""
    tree = ctx.tree
    pinned = pinned or {}
    axes = []
    for c in tree.mult_components(node):
        s0 = pinned.get(c)
        if s0 is not None and s0 != ANY:
            axes.append([(c, s0)])
            continue
        opts = [Sel(index=i) for i in ctx.used.get(c, ()) if ctx._in_domain(c, i)]
        if ctx.residual_count(c) != C(0):
            opts.append(Sel(excluded=frozenset(ctx.used.get(c, ()))))
        axes.append([(c, s) for s in opts])
    for combo in itertools.product(*axes) if axes else [()]:
        yield dict(combo)


def _member_samples(ctx: Ctx, m: FamilyMember) -> list[tuple[str, object]]:
    """Concrete representatives of a parameterized member."""
    tree = ctx.tree
    if m.kind == "region" and not isinstance(m.region, Gen):
        return [(m.label, m.region)]
    node = m.node if m.kind == "rungs" else m.region.node
    pinned = dict(m.sels) if m.kind == "rungs" else dict(m.region.sels)
    out = []
    for sels in _sel_patterns(ctx, node, pinned):
        tag = ",".join(f"{c}={s}" for c, s in sels.items() if pinned.get(c) != s)
        if m.kind == "region":
            g = gen_of(tree, node, sels, m.region.rung)
            out.append((f"{m.label}|{tag}" if tag else m.label, g))
        else:
            for k in (0, 1, ctx.rung_top(node) + 1):
                lab = f"{m.label}|{tag}:{k}" if tag else f"{m.label}:{k}"
                out.append((lab, gen_of(tree, node, sels, k)))
    return out


def _family_material(tree: Tree, members) -> list:
    mats = []
    for m in members:
        if m.kind == "region":
            mats.append(m.region)
        else:
            mats.append(gen_of(tree, m.node, dict(m.sels) or None, 1))
    return mats


def family_report(space: Space, members: list[FamilyMember],
                  restrict_to=None, check_hereditary: bool = True) -> dict:
    tree = space.tree
    ctx = space.ctx(material=_family_material(tree, members),
                    extra={n: 2 for n in tree.nodes})
    flat = [(lab, g) for m in members for lab, g in _member_samples(ctx, m)]

    report: dict = {}
    report["nested"] = _nested(ctx, flat)
    report["noetherian"] = _noetherian(ctx, flat)
    report["sigma_disjoint"] = _sigma_disjoint(ctx, flat, report["nested"])
    report["complete"] = _complete(space, ctx, members, flat, restrict_to)
    if check_hereditary:
        report["hereditarily_complete"] = hereditarily_complete(space, members)
    return report


def _nested(ctx: Ctx, flat) -> dict:
    for (la, a), (lb, b) in itertools.combinations(flat, 2):
        if is_disjoint(ctx, a, b) or is_subset(ctx, a, b) or is_subset(ctx, b, a):
            continue
        return {"holds": False, "witness": [la, lb]}
    return {"holds": True}


def _chain_bound(ctx: Ctx) -> int:
    """Structural cap on strict inclusion chains among sampled generators:
    a strict chain follows one branch, gaining at most the node pin, the copy
    pin and the tabled rung window at each step."""
    tree = ctx.tree
    best = 0
    for v in tree.nodes:
        total = 0
        for w in tree.path(v):
            total += 1
            if tree.mult[w] != C(1):
                total += 1
            if tree.is_laddered(w):
                total += ctx.rung_top(w) + 3
        best = max(best, total)
    return best


def _noetherian(ctx: Ctx, flat) -> dict:
    n = len(flat)
    above = {i: [] for i in range(n)}
    for i, j in itertools.permutations(range(n), 2):
        a, b = flat[i][1], flat[j][1]
        if is_subset(ctx, a, b) and not is_subset(ctx, b, a):
            above[i].append(j)
    depth: dict[int, int] = {}

    def longest(i):
        if i in depth:
            return depth[i]
        depth[i] = 1 + max((longest(j) for j in above[i]), default=0)
        return depth[i]

    chain = max((longest(i) for i in range(n)), default=0)
    bound = _chain_bound(ctx)
    return {"holds": chain <= bound, "longest_chain": chain,
            "structural_bound": bound,
            "note": "ascending rung chains stop at rung 0"}


def _sigma_disjoint(ctx: Ctx, flat, nested: dict) -> dict:
    if not nested["holds"]:
        return {"holds": False, "reason": "family is not nested", "levels": None}
    keys = list(range(len(flat)))
    strict_above = {i: 0 for i in keys}
    for i, j in itertools.permutations(keys, 2):
        a, b = flat[i][1], flat[j][1]
        if is_subset(ctx, a, b) and not is_subset(ctx, b, a):
            strict_above[i] += 1
    levels: dict[int, list[int]] = {}
    for i in keys:
        levels.setdefault(strict_above[i], []).append(i)
    for idx in levels.values():
        for i, j in itertools.combinations(idx, 2):
            a, b = flat[i][1], flat[j][1]
            if not is_disjoint(ctx, a, b) and not (
                is_subset(ctx, a, b) and is_subset(ctx, b, a)
            ):
                return {"holds": False,
                        "witness": [flat[i][0], flat[j][0]],
                        "levels": None}
    return {"holds": True,
            "levels": [sorted(flat[i][0] for i in levels[k]) for k in sorted(levels)],
            "note": "rung families continue the levels, one rung per level"}


def _restrict_atoms(ctx: Ctx, restrict_to) -> frozenset | None:
    if restrict_to is None:
        return None
    if isinstance(restrict_to, (frozenset, set)):
        return frozenset(restrict_to)
    return frozenset(atoms_in(ctx, restrict_to))


def _complete(space: Space, ctx: Ctx, members, flat, restrict_to) -> dict:
    """A centered subfamily with empty intersection must run along a rung
    tail, and the maximal one through a tail meets exactly in the ladder cone;
    so each surviving tail is answered by its cone's trace."""
    tree = space.tree
    y_atoms = _restrict_atoms(ctx, restrict_to)

    def trace(region) -> list[Atom]:
        got = atoms_in(ctx, region)
        if y_atoms is None:
            return got
        return [a for a in got if a in y_atoms]

    for m in members:
        if m.kind != "rungs":
            continue
        v = m.node
        for sels in _sel_patterns(ctx, v, dict(m.sels) or None):
            deep = gen_of(tree, v, sels, ctx.rung_top(v) + 1)
            deep_trace = trace(deep)
            if not deep_trace:
                continue  # the tail leaves the subspace; no centered family here
            if trace(Cone(deep.node, deep.sels)):
                continue
            chain = [f"{m.label}:{k}" for k in ("0", "1", "...")]
            for lab, g in flat:
                if any(holds(ctx, g, a) for a in deep_trace):
                    chain.append(lab)
            return {"holds": False,
                    "witness": {"centered_chain": chain,
                                "tail": str(deep),
                                "intersection": "empty"}}
    return {"holds": True,
            "note": "finite centered subfamilies intersect by definition; "
                    "every rung tail was checked against its ladder cone"}


def hereditarily_complete(space: Space, members, max_union: int = 2) -> dict:
    """Completeness restricted to closures of class unions (singletons, pairs,
    and the whole table): the closed sets the algebra can present."""
    ctx = space.ctx(material=_family_material(space.tree, members),
                    extra={n: 2 for n in space.tree.nodes})
    flat = [(lab, g) for m in members for lab, g in _member_samples(ctx, m)]
    groups: list[tuple[str, frozenset]] = []
    infos = space.classes
    for r in range(1, min(max_union, len(infos)) + 1):
        for combo in itertools.combinations(infos, r):
            atoms = frozenset(a for a in ctx.atoms if any(a.cls == i.cls for i in combo))
            groups.append(("+".join(str(i.cls) for i in combo),
                           closure_atoms(ctx, atoms)))
    groups.append(("whole", frozenset(ctx.atoms)))
    for label, y in groups:
        res = _complete(space, ctx, members, flat, y)
        if not res["holds"]:
            return {"holds": False, "closed_region": label, "witness": res["witness"]}
    return {"holds": True, "closed_regions_checked": len(groups)}


# --- sequence convergence ---


@dataclass
class SequenceSpec:
    """Class-constant ray sequence: one component runs over pairwise distinct
    copies, the others are pinned; or an explicit eventually-equal point list."""

    cls: PointClass | None = None
    fixed: dict[str, int] = field(default_factory=dict)
    distinct: str | None = None
    points: list[NodeCoord] | None = None


def tau_seq_limit(space: Space, spec: SequenceSpec, x: NodeCoord) -> dict:
    """Does the described sequence converge to x?

    Members extending x form the A-part, the rest the B-part; an infinite
    A-part must hit every top of x finitely often, and an infinite B-part
    would have to leave every coordinate of x eventually, which a chain
    through the root never does.
    """
    tree = space.tree
    if not tree.is_laddered(x.node):
        raise ValidationError(f"{x} is not a ray")
    if spec.points is not None:
        same = all(p.node == x.node and dict(p.copies) == dict(x.copies)
                   for p in spec.points)
        return {"converges": same,
                "a_part": "empty",
                "b_part": "eventually equal" if same else "constant away from x",
                "reasons": ["every listed point equals x" if same else
                            "a point different from x repeats"]}
    if spec.cls is None or spec.cls.kind != RAY_CLASS:
        raise ValidationError("sequence members must form a ray class")
    w = spec.cls.anchor
    if w not in tree.nodes or not tree.is_laddered(w):
        raise ValidationError(f"ray({w}) is not a class")
    comps = tree.mult_components(w)
    if spec.distinct not in comps:
        raise ValidationError(
            f"distinct component {spec.distinct!r} bears no copy index for ray({w})")
    if not tree.mult[spec.distinct].is_infinite:
        raise ValidationError("pairwise distinct copies need infinite multiplicity")
    if set(spec.fixed) != set(comps) - {spec.distinct}:
        raise ValidationError("fixed components must pin the rest of the pattern")

    v = x.node
    reasons = []
    vpath = set(tree.path(v))
    extends = v in tree.path(w) and v != w
    if extends:
        xc = dict(x.copies)
        for comp, val in spec.fixed.items():
            if comp in vpath and xc.get(comp, 1) != val:
                extends = False
                reasons.append(f"fixed {comp}={val} disagrees with the limit")
        if spec.distinct in vpath:
            extends = False
            reasons.append("the distinct component already varies below x")
    else:
        reasons.append(f"members at ray({w}) do not extend the chain at {v}")
    if not extends:
        reasons.append("the non-extending part is infinite and every member "
                       "keeps the root coordinate of x")
        return {"converges": False, "a_part": "finite", "b_part": "infinite",
                "reasons": reasons}
    wpath = tree.path(w)
    u0 = wpath[wpath.index(v) + 1]
    if u0 != spec.distinct:
        reasons.append(f"top {u0} of x lies in every member")
        return {"converges": False, "a_part": "infinite", "b_part": "finite",
                "reasons": reasons}
    reasons.append(f"every top copy of {u0} is hit at most once")
    return {"converges": True, "a_part": "infinite", "b_part": "finite",
            "reasons": reasons}


# --- ultraparacompactness ---


def _atom_sort_key(ctx: Ctx, a: Atom):
    tree = ctx.tree
    named = tuple(
        (0, val) if isinstance(val, int) else (1, 0) for _, val in a.pattern
    )
    return (-len(tree.path(a.cls.anchor)), tree.nodes.index(a.cls.anchor), named)


def ultrapartition(space: Space, cover: list) -> dict:
    """Refine an open cover of the ray space into disjoint standard basics.

    Deepest uncovered ray classes are handled first (named copies before the
    residual band); the final family keeps the inclusion-maximal picks, and
    the partition laws are re-verified symbolically.
    """
    if space.kind != RAY:
        raise ValidationError("the refinement is defined on ray spaces")
    ctx = space.ctx(material=list(cover))
    missing = atoms_in(ctx, Not(union(*cover)))
    if missing:
        raise ValidationError(f"not a cover: {missing[0]} is uncovered")
    for i, u in enumerate(cover):
        ok, at = is_open(ctx, u)
        if not ok:
            raise ValidationError(f"cover member {i} is not open at {at}")

    chosen: list[tuple[Basic, int]] = []
    covered: set[Atom] = set()
    for a in sorted(ctx.atoms, key=lambda a: _atom_sort_key(ctx, a)):
        if a in covered:
            continue
        pick = None
        for i, u in enumerate(cover):
            if not holds(ctx, u, a):
                continue
            b = find_basic_inside(ctx, a, frozenset(atoms_in(ctx, u)))
            if b is not None:
                pick = (b, i)
                break
        if pick is None:
            raise ValidationError(f"no standard basic fits around {a}")
        chosen.append(pick)
        covered.update(atoms_in(ctx, pick[0].region()))

    keep: list[tuple[Basic, int]] = []
    for b, i in chosen:
        if any(
            other is not b
            and is_subset(ctx, b.region(), other.region())
            and not is_subset(ctx, other.region(), b.region())
            for other, _ in chosen
        ):
            continue
        keep.append((b, i))

    verification = _verify_partition(ctx, keep, cover)
    return {
        "pieces": [{"basic": str(b), "inside_member": i} for b, i in keep],
        "regions": [b.region() for b, _ in keep],
        "verified": verification,
    }


def _verify_partition(ctx: Ctx, keep, cover) -> dict:
    regions = [b.region() for b, _ in keep]
    exhaustive = is_empty(ctx, Not(union(*regions)))
    refining = all(
        any(is_subset(ctx, r, u) for u in cover) for r in regions
    )
    disjoint = True
    witness = None
    for (i, a), (j, b) in itertools.combinations(enumerate(regions), 2):
        if not is_disjoint(ctx, a, b):
            disjoint = False
            witness = (str(keep[i][0]), str(keep[j][0]))
            break
    out = {"disjoint": disjoint, "exhaustive": exhaustive, "refining": refining}
    if witness:
        out["witness"] = witness
    return out
