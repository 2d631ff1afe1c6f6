import pytest

from treescape.counts import C
from treescape.points import Space
from treescape.regions import (
    RAY_CLASS,
    Atom,
    Basic,
    Not,
    PointClass,
    Sel,
    ValidationError,
    atoms_in,
    basic_opens_at,
    class_table,
    closure_of,
    gen_of,
    holds,
    inter,
    is_dense,
    is_disjoint,
    is_empty,
    is_open,
    is_subset,
    minus,
    region_count,
    union,
)
from treescape.staged import StagedTree, validate


def build(nodes, root, parent, kind, ladders, mult, cards=("aleph0", "K")):
    return validate(StagedTree(nodes, root, parent, kind, ladders,
                               {n: C(m) for n, m in mult.items()}, list(cards)))


@pytest.fixture
def p1(corpus):
    return corpus["P1"]


@pytest.fixture
def fork2(corpus):
    return corpus["FORK2"]


def ray_ctx(tree, material=(), extra=None):
    return Space(tree, "ray").ctx(material=material, extra=extra)


# --- gen_of validation ---

def test_gen_of_rejects_sel_on_unreplicated_node(p1):
    with pytest.raises(ValidationError, match="bears no copy index"):
        gen_of(p1, "r", {"r": Sel(index=1)})


def test_gen_of_rejects_foreign_component(p1):
    with pytest.raises(ValidationError, match="bears no copy index"):
        gen_of(p1, "r", {"u": Sel(index=1)})


def test_gen_of_rejects_rung_without_ladder():
    t = build(["r", "a"], "r", {"a": "r"}, {"a": "succ"}, {"a": "open"}, {})
    with pytest.raises(ValidationError):
        gen_of(t, "a", None, -1)


# --- class tables ---

def test_ray_classes(p1):
    table = class_table(p1, "ray")
    assert [(c.cls.kind, c.cls.anchor, str(c.count)) for c in table] == [
        (RAY_CLASS, "r", "1"),
        (RAY_CLASS, "u", "K"),
    ]


def test_path_classes_cover_rungs_and_nodes(p1):
    table = class_table(p1, "path")
    kinds = {(c.cls.kind, c.cls.anchor) for c in table}
    assert ("node_path", "r") in kinds
    assert ("ladder_path", "r") in kinds
    assert ("ladder_path", "u") in kinds


# --- boolean kernel ---

def test_subset_and_disjoint(p1):
    ctx = ray_ctx(p1, extra={"u": 2})
    whole = gen_of(p1, "r")
    u1 = gen_of(p1, "u", {"u": Sel(index=1)})
    u2 = gen_of(p1, "u", {"u": Sel(index=2)})
    assert is_subset(ctx, u1, whole)
    assert is_disjoint(ctx, u1, u2)
    assert not is_disjoint(ctx, u1, whole)
    assert is_empty(ctx, inter(u1, u2))
    assert not is_empty(ctx, minus(whole, union(u1, u2)))


def test_complement_partition(p1):
    ctx = ray_ctx(p1, extra={"u": 2})
    u1 = gen_of(p1, "u", {"u": Sel(index=1)})
    assert is_empty(ctx, inter(u1, Not(u1)))
    assert is_empty(ctx, Not(union(u1, Not(u1))))


def test_rung_tail_nesting(p1):
    # rays climb every rung, so tails coincide on the ray space and only
    # differ where ladder path points live
    tails = [gen_of(p1, "r", None, 1), gen_of(p1, "r", None, 2)]
    rctx = ray_ctx(p1, material=tails)
    assert is_subset(rctx, tails[1], tails[0])
    assert is_subset(rctx, tails[0], tails[1])
    pctx = Space(p1, "path").ctx(material=tails)
    assert is_subset(pctx, tails[1], tails[0])
    assert not is_subset(pctx, tails[0], tails[1])


def test_region_count_symbolic(p1):
    ctx = ray_ctx(p1, extra={"u": 2})
    assert str(region_count(ctx, gen_of(p1, "r"))) == "K"
    ray_r = PointClass(RAY_CLASS, "r")
    assert str(region_count(ctx, gen_of(p1, "r"), ray_r)) == "1"


def test_excluded_sel_matches_residual(p1):
    ctx = ray_ctx(p1, extra={"u": 2})
    rest = gen_of(p1, "u", {"u": Sel(excluded=frozenset([1]))})
    u1 = gen_of(p1, "u", {"u": Sel(index=1)})
    u2 = gen_of(p1, "u", {"u": Sel(index=2)})
    assert is_disjoint(ctx, rest, u1)
    assert is_subset(ctx, u2, rest)


# --- canonical basics ---

def atom_of(ctx, kind, anchor):
    found = [a for a in ctx.atoms
             if a.cls.kind == kind and a.cls.anchor == anchor]
    assert found, (kind, anchor, ctx.atoms)
    return found[0]


def test_basic_menu_contains_its_atom(p1):
    ctx = ray_ctx(p1, extra={"u": 2})
    for atom in ctx.atoms:
        menu = basic_opens_at(ctx, atom)
        assert menu
        for b in menu:
            assert holds(ctx, b.region(), atom), (atom, b)


def test_mult_one_succ_children_appear_in_node_path_menu(fork2):
    # regression: a multiplicity-1 successor child must still contribute a
    # removable block, or the finest basic around the fork point is wrong
    ctx = Space(fork2, "path").ctx()
    fork = atom_of(ctx, "node_path", fork2.root)
    menu = {str(b) for b in basic_opens_at(ctx, fork)}
    names = fork2.succ_children[fork2.root]
    full = f"[{fork2.root}]"
    assert full in menu
    assert any(f"{{[{names[0]}]" in s for s in menu), menu


def test_mult_one_top_children_block_the_ray_closure():
    # regression: a ray with multiplicity-1 tops is closed once each top cone
    # can be excluded from a basic
    t = build(["r", "a", "b"], "r", {"a": "r", "b": "r"},
              {"a": "top", "b": "top"},
              {"r": "topped", "a": "open", "b": "open"}, {})
    ctx = ray_ctx(t)
    ray_a = atom_of(ctx, RAY_CLASS, "a")
    closure = closure_of(ctx, gen_of(t, "a"))
    assert ray_a in closure
    assert atom_of(ctx, RAY_CLASS, "r") not in closure


def test_open_and_closure(p1):
    ctx = ray_ctx(p1, extra={"u": 2})
    u1 = gen_of(p1, "u", {"u": Sel(index=1)})
    ok, _ = is_open(ctx, u1)
    assert ok
    # the hub is in the closure of the fan
    fan = gen_of(p1, "u")
    got = closure_of(ctx, fan)
    assert atom_of(ctx, RAY_CLASS, "r") in got
    assert is_dense(ctx, fan)


def test_whole_space_not_open_below_ladder(p1):
    # [u] union nothing misses the hub; its complement {hub} is not open
    ctx = ray_ctx(p1, extra={"u": 2})
    hub_only = Not(gen_of(p1, "u"))
    ok, witness = is_open(ctx, hub_only)
    assert not ok
    assert witness.cls == PointClass(RAY_CLASS, "r")


def test_atoms_in_respects_patterns(p1):
    ctx = ray_ctx(p1, extra={"u": 2})
    u1 = gen_of(p1, "u", {"u": Sel(index=1)})
    got = atoms_in(ctx, u1)
    assert all(a.cls.anchor == "u" for a in got)
    assert all(dict(a.pattern).get("u") == 1 for a in got)
