"""Named example presentations, canonical signatures, random generation.

The infinite-skeleton examples (binary tree, duplicate, the line with
isolated rationals) are shipped as truncation families: ``BIN``, ``ADUP`` and
``MICH`` take a depth and return the stage-d presentation.  Fixed instances
are stored as DSL sources so the parser round-trips them.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .counts import C, Count, maximum, mul
from .points import Space
from .staged import StagedTree, Tree, ValidationError, validate

P1_SRC = """\
# one ladder with an uncountable fan of open ladders on top
cardinal K uncountable;
node r root;
ladder r topped;
node u parent r kind top mult K;
ladder u open;
"""

P2_SRC = """\
# as P1, but each top carries a countable fan of open ladders
cardinal K uncountable;
node r root;
ladder r topped;
node u parent r kind top mult K;
node c parent u kind succ mult aleph0;
ladder c open;
"""

POINT_SRC = """\
node r root;
"""

OMEGA_SRC = """\
node r root;
ladder r open;
"""

FORK2_SRC = """\
# two incomparable ladders over a common root
node r root;
node a parent r kind succ;
node b parent r kind succ;
ladder a open;
ladder b open;
"""

_FIXED = {
    "P1": P1_SRC,
    "P2": P2_SRC,
    "POINT": POINT_SRC,
    "OMEGA": OMEGA_SRC,
    "FORK2": FORK2_SRC,
}


def _bin_spec(depth: int, name: str) -> StagedTree:
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    nodes = ["r"] + [f"b{i}" for i in range(1, depth + 1)]
    parent = {}
    kind = {}
    mult = {"r": C(1)}
    prev = "r"
    for i in range(1, depth + 1):
        n = f"b{i}"
        parent[n] = prev
        kind[n] = "succ"
        mult[n] = C(2)
        prev = n
    return StagedTree(nodes, "r", parent, kind, {}, mult, ["aleph0"], name)


def bin_instance(depth: int) -> Tree:
    """Finite binary tree of the given depth; branch space is discrete."""
    return validate(_bin_spec(depth, f"BIN({depth})"))


def adup_instance(depth: int) -> Tree:
    """Stage-d duplicate: every depth-d branch gets a single top twin."""
    spec = _bin_spec(depth, f"ADUP({depth})")
    leaf = f"b{depth}" if depth >= 1 else "r"
    nodes = spec.nodes + ["t"]
    parent = dict(spec.parent)
    kind = dict(spec.edge_kind)
    mult = dict(spec.multiplicity)
    parent["t"] = leaf
    kind["t"] = "top"
    mult["t"] = C(1)
    ladders = {leaf: "topped"}
    return validate(StagedTree(nodes, "r", parent, kind, ladders, mult,
                               ["aleph0"], f"ADUP({depth})"))


def mich_instance(depth: int) -> Tree:
    """Stage-d line presentation: per branch, two constant-tail rays (the
    isolated directions) and a topped ladder carrying a continuum bundle."""
    spec = _bin_spec(depth, f"MICH({depth})")
    leaf = f"b{depth}"
    nodes = spec.nodes + ["z", "o", "i", "t"]
    parent = dict(spec.parent)
    kind = dict(spec.edge_kind)
    mult = dict(spec.multiplicity)
    for n in ("z", "o", "i"):
        parent[n] = leaf
        kind[n] = "succ"
        mult[n] = C(1)
    parent["t"] = "i"
    kind["t"] = "top"
    mult["t"] = C("C")
    ladders = {"z": "open", "o": "open", "i": "topped", "t": "open"}
    return validate(StagedTree(nodes, "r", parent, kind, ladders, mult,
                               ["aleph0", "C"], f"MICH({depth})"))


def corpus_names() -> list[str]:
    return ["ADUP(2)", "BIN(3)", "FORK2", "MICH(2)", "OMEGA", "P1", "P2", "POINT"]


def corpus_instance(name: str) -> Tree:
    """A named presentation; parametric families accept NAME(d)."""
    from .dsl import parse_tree

    key = name.strip().upper()
    if key in _FIXED:
        return parse_tree(_FIXED[key], name=key)
    for prefix, make in (("BIN", bin_instance), ("ADUP", adup_instance),
                         ("MICH", mich_instance)):
        if key.startswith(prefix + "(") and key.endswith(")"):
            try:
                d = int(key[len(prefix) + 1:-1])
            except ValueError:
                raise ValidationError(f"bad depth in {name!r}")
            return make(d)
    raise ValidationError(f"unknown corpus instance {name!r}")


def corpus_sources() -> dict[str, str]:
    """DSL text of every default instance (parametric ones via the printer)."""
    from .dsl import print_tree

    out = dict(_FIXED)
    for name in corpus_names():
        if name not in out:
            out[name] = print_tree(corpus_instance(name))
    return out


# --- canonical signatures ---


@dataclass(frozen=True)
class CanonicalSignature:
    name: str
    params: tuple = ()

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({', '.join(str(p) for p in self.params)})"


def one_point_compactification(kappa) -> CanonicalSignature:
    return CanonicalSignature("one_point_compactification", (C(kappa),))


def discrete(n) -> CanonicalSignature:
    return CanonicalSignature("discrete", (C(n),))


def n_resolution(kappa) -> CanonicalSignature:
    return CanonicalSignature("N_resolution", (C(kappa),))


def alexandroff_duplicate(base) -> CanonicalSignature:
    return CanonicalSignature("alexandroff_duplicate", (C(base),))


def _renamings(space: Space, target: Count):
    """Symbol substitutions to try when matching a symbolic parameter."""
    names = [n for n in space.tree.cardinals.names]
    subs = [{}]
    if target.is_infinite:
        subs += [{target.symbol: n} for n in names]
    return subs


def _subst(count: Count, sub: dict) -> Count:
    if count.is_infinite and count.symbol in sub:
        return C(sub[count.symbol])
    return count


def signature_match(space: Space, sig: CanonicalSignature) -> dict:
    """Necessary-condition check; never claims more than signature equality."""
    tree = space.tree
    infos = space.classes
    limits = space.class_limits()
    iso = set(space.isolated_classes())

    def total(classes) -> Count:
        out = C(0)
        from .counts import add

        for info in classes:
            out = add(tree.cardinals, out, info.count)
        return out

    def fail(reason: str) -> dict:
        return {"match": False, "signature": str(sig), "reason": reason}

    if sig.name == "discrete":
        want = sig.params[0]
        if len(iso) != len(infos):
            return fail("a class is not isolated")
        for sub in _renamings(space, want):
            if total(infos) == _subst(want, sub):
                return {"match": True, "signature": str(sig)}
        return fail(f"total count {total(infos)} != {want}")

    if sig.name in ("one_point_compactification", "N_resolution"):
        want = sig.params[0]
        hubs = [i for i in infos if i.cls not in iso]
        if len(hubs) != 1 or hubs[0].count != C(1):
            return fail("need exactly one non-isolated point")
        hub = hubs[0].cls
        rest = [i for i in infos if i.cls != hub]
        if any(i.cls not in iso for i in rest):
            return fail("a second class is not isolated")
        per_tops = [row.per_top for row in limits if row.at == hub and row.per_top]
        if not per_tops:
            return fail("hub has no fan accumulation")
        per = maximum(tree.cardinals, per_tops)
        if sig.name == "one_point_compactification":
            if per != C(1):
                return fail(f"fan members per top = {per}, expected 1")
            ok_total = total(rest)
        else:
            if per != C("aleph0"):
                return fail(f"per-top structure {per}, expected a clopen aleph0 block")
            ok_total = total(rest)
        for sub in _renamings(space, want):
            w = _subst(want, sub)
            expect = w if sig.name == "one_point_compactification" else mul(
                tree.cardinals, w, C("aleph0"))
            if ok_total == expect:
                return {"match": True, "signature": str(sig)}
        return fail(f"isolated total {ok_total} does not fit {want}")

    if sig.name == "alexandroff_duplicate":
        want = sig.params[0]
        rays = [i for i in infos if i.cls.kind == "ray"]
        twins = [i for i in infos if i.cls.kind == "node_path"]
        if len(rays) != 1 or len(twins) != 1:
            return fail("need one base class and one twin class")
        base, twin = rays[0], twins[0]
        if base.count != twin.count:
            return fail("base and twin counts differ")
        if twin.cls not in iso:
            return fail("twin class is not isolated")
        anchor = twin.cls.anchor
        if tree.parent.get(anchor) != base.cls.anchor or tree.mult[anchor] != C(1):
            return fail("twin is not a single top over the base ladder")
        for sub in _renamings(space, want):
            if base.count == _subst(want, sub):
                return {"match": True, "signature": str(sig)}
        return fail(f"base count {base.count} != {want}")

    return fail(f"unknown signature {sig.name!r}")


def space_signature(space: Space) -> dict:
    """Class-level invariant of a space: per-class counts and isolation
    plus the limit pattern between classes.  The justification tags are
    dropped and an absent per-top count reads as 1, because re-presenting
    a space can turn a same-ladder approach into a fan approach without
    moving a single point."""
    iso = set(space.isolated_classes())
    classes = {
        str(info.cls): {"count": str(info.count), "isolated": info.cls in iso}
        for info in space.classes
    }
    limits = sorted(
        {(str(r.at), str(r.of),
          str(r.per_top) if r.per_top is not None else "1")
         for r in space.class_limits()})
    return {"space": space.kind, "classes": classes,
            "limits": [list(t) for t in limits]}


def signatures_equal(a: dict, b: dict) -> dict:
    """Match two space signatures up to a renaming of their classes.

    Necessary evidence only: equality here never claims a homeomorphism,
    and a mismatch refutes one.
    """
    ca, cb = a["classes"], b["classes"]
    la = {tuple(t) for t in a["limits"]}
    lb = {tuple(t) for t in b["limits"]}
    if len(ca) != len(cb) or len(la) != len(lb):
        return {"match": False,
                "reason": f"{len(ca)} classes with {len(la)} limit rows "
                          f"vs {len(cb)} with {len(lb)}"}

    def prof(cls, table, rows):
        rec = table[cls]
        return (rec["count"], rec["isolated"],
                tuple(sorted(p for x, _, p in rows if x == cls)),
                tuple(sorted(p for _, y, p in rows if y == cls)))

    pa = {x: prof(x, ca, la) for x in ca}
    pb = {y: prof(y, cb, lb) for y in cb}
    order = sorted(ca, key=lambda x: (sum(pb[y] == pa[x] for y in cb), x))

    def extend(i, used, mapping):
        if i == len(order):
            return dict(mapping)
        x = order[i]
        for y in cb:
            if y in used or pb[y] != pa[x]:
                continue
            mapping[x] = y
            ok = all((mapping[s], mapping[t], p) in lb
                     for s, t, p in la if s in mapping and t in mapping)
            if ok:
                used.add(y)
                got = extend(i + 1, used, mapping)
                if got is not None:
                    return got
                used.discard(y)
            del mapping[x]
        return None

    pairing = extend(0, set(), {})
    if pairing is None:
        return {"match": False,
                "reason": "no class pairing preserves the limit pattern"}
    return {"match": True, "pairing": {x: pairing[x] for x in sorted(pairing)}}


# --- deterministic random instances ---


@dataclass
class GenParams:
    max_nodes: int = 5
    max_mult: int = 3
    cardinals: tuple[str, ...] = ("K",)
    pruned: bool = False
    compact: bool = False


def generate_tree(seed: int, params: GenParams | None = None) -> Tree:
    """Seed-deterministic valid presentation within the size bounds."""
    p = params or GenParams()
    rng = random.Random(seed)
    n = rng.randint(1, p.max_nodes)
    names = [f"n{i}" for i in range(n)]
    parent = {}
    kind = {}
    ladders = {}
    mult = {"n0": C(1)}
    laddered = set()
    has_succ = set()
    for i in range(1, n):
        # a parent with a ladder only accepts top children, and a parent
        # with successor children can no longer grow a ladder
        anc = names[rng.randrange(i)]
        parent[names[i]] = anc
        if anc in laddered:
            kind[names[i]] = "top"
        elif anc not in has_succ and rng.random() < 0.4:
            kind[names[i]] = "top"
            ladders[anc] = "topped"
            laddered.add(anc)
        else:
            kind[names[i]] = "succ"
            has_succ.add(anc)
        choices: list = list(range(1, p.max_mult + 1))
        if not p.compact or kind[names[i]] == "top":
            choices += ["aleph0"] + list(p.cardinals)
        mult[names[i]] = C(rng.choice(choices))
    for nm in names:
        has_kids = any(parent.get(c) == nm for c in names)
        if nm in ladders:
            continue
        if not has_kids and (p.pruned or rng.random() < 0.5):
            ladders[nm] = "open"
    return validate(StagedTree(names, "n0", parent, kind, ladders, mult,
                               ["aleph0", *p.cardinals],
                               f"gen(seed={seed})"))


def shrink_tree(tree: Tree):
    """Smaller variants: drop a leaf subtree, or shrink one multiplicity."""
    spec = tree.spec
    for drop in reversed(spec.nodes):
        if drop == spec.root:
            continue
        if any(p == drop for p in spec.parent.values()):
            continue
        nodes = [n for n in spec.nodes if n != drop]
        parent = {n: v for n, v in spec.parent.items() if n != drop}
        kind = {n: v for n, v in spec.edge_kind.items() if n != drop}
        anc = spec.parent[drop]
        ladders = dict(spec.ladder_flag)
        if spec.edge_kind[drop] == "top" and not any(
            kind.get(n) == "top" and parent.get(n) == anc for n in nodes
        ):
            ladders[anc] = "open"
        mult = {n: v for n, v in spec.multiplicity.items() if n != drop}
        try:
            yield validate(StagedTree(nodes, spec.root, parent, kind, ladders,
                                      mult, spec.cardinals, spec.name))
        except ValidationError:
            pass
    for n, m in spec.multiplicity.items():
        if m.is_finite and m.finite > 1:
            mult = dict(spec.multiplicity)
            mult[n] = C(m.finite - 1)
            yield validate(StagedTree(spec.nodes, spec.root, dict(spec.parent),
                                      dict(spec.edge_kind), dict(spec.ladder_flag),
                                      mult, spec.cardinals, spec.name))


def generate_family(seed: int, ground_size: int = 6):
    """Nested noetherian family over {1..n} containing the ground set."""
    rng = random.Random(seed)
    ground = frozenset(range(1, ground_size + 1))
    members = {ground}

    def split(s: frozenset):
        if len(s) <= 1 or rng.random() < 0.3:
            return
        items = sorted(s)
        cut = rng.randint(1, len(items) - 1)
        lo, hi = frozenset(items[:cut]), frozenset(items[cut:])
        for part in (lo, hi):
            if rng.random() < 0.85:
                members.add(part)
                split(part)

    split(ground)
    return ground, sorted(members, key=lambda s: (-len(s), sorted(s)))


def mich_refinement_report(depth: int) -> dict:
    """Structural form of the crowding claim: every constant-tail cone at one
    stage is refined by at least two constant-tail classes a stage deeper."""
    lo, hi = mich_instance(depth), mich_instance(depth + 1)

    def tails(tree: Tree) -> Count:
        total = C(0)
        from .counts import add

        for v in tree.nodes:
            if v in ("z", "o"):
                total = add(tree.cardinals, total, tree.path_count(v))
        return total

    lo_t, hi_t = tails(lo), tails(hi)
    per_cone = 2  # each stage-d cone splits into two leaves, each with z and o
    ok = (
        lo_t.is_finite
        and hi_t.is_finite
        and hi_t.finite == 2 * lo_t.finite
        and per_cone >= 2
    )
    return {
        "depth": depth,
        "constant_tail_classes": lo_t.finite,
        "next_stage": hi_t.finite,
        "refines": ok,
    }
