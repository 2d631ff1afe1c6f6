"""Space-level reports: class tables, the limit relation, isolated points.

The accumulation relation between point classes is decided from the
presentation by a two-case analysis.  A ray through a ladder is approached
from below by the rung paths of the same ladder (path space only), and any
point whose chain ends at a node v is approached across a fan child u of v
whenever u has infinitely many copies: every standard neighbourhood excludes
only finitely many of them.  Everything else is isolated.
"""
from __future__ import annotations

from dataclasses import dataclass

from .counts import C, Count, maximum, mul
from .regions import (
    ANY,
    KINDS,
    LADDER_PATH,
    NODE_PATH,
    PATH,
    RAY,
    RAY_CLASS,
    RESIDUAL,
    TAIL,
    Atom,
    Basic,
    ClassInfo,
    Ctx,
    PointClass,
    Sel,
    ValidationError,
    atoms_in,
    class_table,
    gen_for_coord,
    gen_of,
    minus,
    union,
)
from .staged import NodeCoord, Tree


@dataclass(frozen=True)
class LimitEdge:
    at: Atom
    of: Atom
    why: str
    per_top: Count | None = None


@dataclass(frozen=True)
class ClassLimit:
    at: PointClass
    of: PointClass
    why: str
    per_top: Count | None = None


class Space:
    """One of the three spaces of a validated tree, with decision helpers."""

    def __init__(self, tree: Tree, kind: str):
        if kind not in KINDS:
            raise ValidationError(f"unknown space kind {kind!r}")
        self.tree = tree
        self.kind = kind
        self.classes = class_table(tree, kind)

    def ctx(self, material=(), extra: dict[str, int] | None = None) -> Ctx:
        return Ctx(self.tree, self.kind, material, extra)

    def class_of(self, cls: PointClass) -> ClassInfo:
        for info in self.classes:
            if info.cls == cls:
                return info
        raise ValidationError(f"{cls} is not a class of the {self.kind} space")

    # --- accumulation ---

    def limit_edges(self, ctx: Ctx) -> list[LimitEdge]:
        t = self.tree
        edges = []
        for a in ctx.atoms:
            v = a.cls.anchor
            if a.cls.kind == RAY_CLASS and self.kind == PATH:
                below = PointClass(LADDER_PATH, v)
                for c in ctx.atoms:
                    if c.cls == below and c.rung is TAIL and c.pattern == a.pattern:
                        edges.append(LimitEdge(a, c, "from_below"))
            if a.cls.kind == RAY_CLASS:
                fans = t.top_children[v]
            elif a.cls.kind == NODE_PATH and not t.is_laddered(v):
                fans = t.succ_children[v]
            else:
                fans = []
            for u in fans:
                if not ctx.residual_count(u).is_infinite:
                    continue
                for c in ctx.atoms:
                    if u not in t.path(c.cls.anchor):
                        continue
                    if c.value(u) is not RESIDUAL:
                        continue
                    if any(c.value(comp) != val for comp, val in a.pattern):
                        continue
                    edges.append(
                        LimitEdge(a, c, f"across_tops({u})", self._per_top(ctx, c, u))
                    )
        return edges

    def _per_top(self, ctx: Ctx, c: Atom, u: str) -> Count:
        """Members of the source atom above each single copy of the fan node."""
        t = self.tree
        upath = t.path(u)
        total = C(1)
        for comp, val in c.pattern:
            if comp in upath:
                continue
            if val is RESIDUAL:
                total = mul(t.cardinals, total, ctx.residual_count(comp))
        if c.rung is TAIL:
            total = mul(t.cardinals, total, C("aleph0"))
        return total

    def class_limits(self) -> list[ClassLimit]:
        ctx = self.ctx()
        rows: dict[tuple[PointClass, PointClass, str], list[Count]] = {}
        for e in self.limit_edges(ctx):
            key = (e.at.cls, e.of.cls, e.why)
            rows.setdefault(key, [])
            if e.per_top is not None:
                rows[key].append(e.per_top)
        out = []
        for (at, of, why), tops in rows.items():
            per = maximum(self.tree.cardinals, tops) if tops else None
            out.append(ClassLimit(at, of, why, per))
        return out

    def isolated_classes(self) -> list[PointClass]:
        hit = {row.at for row in self.class_limits()}
        return [info.cls for info in self.classes if info.cls not in hit]

    def isolated_atoms(self, ctx: Ctx) -> frozenset:
        hit = {e.at for e in self.limit_edges(ctx)}
        return frozenset(a for a in ctx.atoms if a not in hit)

    # --- named neighbourhoods ---

    def tops_of(self, v: str) -> list[tuple[str, Count]]:
        if not self.tree.is_laddered(v):
            raise ValidationError(f"ray({v}) is not a class: {v!r} has no ladder")
        return [(u, self.tree.mult[u]) for u in self.tree.top_children[v]]

    def standard_nbhd(self, x: NodeCoord, t: NodeCoord, F=()):
        """The region [t,F] at the ray through x's ladder; validates t and F."""
        tree = self.tree
        if not tree.is_laddered(x.node):
            raise ValidationError(f"{x} does not name a ray: no ladder at {x.node!r}")
        t_gen = gen_for_coord(tree, t)
        if t.node not in tree.path(x.node):
            raise ValidationError(f"coordinate {t} is not on the ray at {x}")
        for comp, sel in t_gen.sels:
            want = dict(x.copies).get(comp)
            if want is not None and sel.index is not None and sel.index != want:
                raise ValidationError(f"coordinate {t} is not on the ray at {x}")
        blocks = []
        for s in F:
            if s.node not in tree.top_children[x.node] or s.rung is not None:
                raise ValidationError(f"{s} is not a top of the ray at {x}")
            s_gen = gen_for_coord(tree, s)
            for comp, sel in s_gen.sels:
                if comp == s.node:
                    continue
                want = dict(x.copies).get(comp)
                if want is not None and sel.index is not None and sel.index != want:
                    raise ValidationError(f"{s} is not a top of the ray at {x}")
            blocks.append(s_gen)
        if not blocks:
            return t_gen
        return minus(t_gen, union(*blocks))

    # --- pi-base ---

    def pi_base_report(self, max_f: int = 2) -> dict:
        """Checks that node cones and isolated singletons form a pi-base."""
        if self.kind != RAY:
            raise ValidationError("the pi-base statement is for ray spaces")
        ctx = self.ctx(extra={n: 2 for n in self.tree.nodes})
        isolated = self.isolated_atoms(ctx)
        cones = []
        for w in self.tree.nodes:
            for sels in self._sel_menu(ctx, w):
                cones.append(gen_of(self.tree, w, sels))
        checked = 0
        for b in self._basic_menu(ctx, max_f):
            inside = frozenset(atoms_in(ctx, b.region()))
            if not inside:
                continue
            checked += 1
            ok = any(a in inside for a in isolated) or any(
                atoms_in(ctx, g) and frozenset(atoms_in(ctx, g)) <= inside
                for g in cones
            )
            if not ok:
                return {"holds": False, "witness": str(b), "basics_checked": checked}
        return {"holds": True, "basics_checked": checked}

    def _sel_menu(self, ctx: Ctx, w: str):
        comps = self.tree.mult_components(w)
        if not comps:
            yield {}
            return
        last = comps[-1]
        for i in ctx.used.get(last, ()):
            yield {last: Sel(index=i)}
        yield {last: ANY}

    def _basic_menu(self, ctx: Ctx, max_f: int):
        import itertools

        tree = self.tree
        for w in tree.nodes:
            for sels in self._sel_menu(ctx, w):
                rungs: list[int | None] = [None]
                if tree.is_laddered(w):
                    rungs += list(range(ctx.rung_top(w) + 1))
                for r in rungs:
                    t_gen = gen_of(tree, w, sels, r)
                    tops = []
                    if tree.is_laddered(w):
                        for u in tree.top_children[w]:
                            for i in ctx.used.get(u, ()):
                                tops.append(gen_of(tree, u, {**sels, u: Sel(index=i)}))
                    for k in range(min(max_f, len(tops)) + 1):
                        for combo in itertools.combinations(tops, k):
                            yield Basic(t_gen, combo)

    # --- reports ---

    def analysis(self, depth: int = 4, copies: int = 3) -> dict:
        classes = [
            {
                "kind": info.cls.kind,
                "anchor": info.cls.anchor,
                "count": str(info.count),
                "branch": info.is_branch,
            }
            for info in self.classes
        ]
        iso = {str(c) for c in self.isolated_classes()}
        limits = [
            {
                "at": str(row.at),
                "of": str(row.of),
                "why": row.why,
                **({"per_top": str(row.per_top)} if row.per_top is not None else {}),
            }
            for row in self.class_limits()
        ]
        return {
            "tree": self.tree.name,
            "space": self.kind,
            "params": {"depth": depth, "copies": copies},
            "classes": classes,
            "limits": limits,
            "isolated": sorted(str(c) for c in self.classes_named(iso)),
        }

    def classes_named(self, names: set[str]) -> list[PointClass]:
        return [info.cls for info in self.classes if str(info.cls) in names]
