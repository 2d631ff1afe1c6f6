import itertools

import pytest

from treescape.counts import C
from treescape.ordinal import Ordinal, fin
from treescape.staged import StagedTree, Tree, ValidationError, split_named_copies, validate


def build(nodes, root, parent, kind, ladders, mult, cardinals=("aleph0", "K")):
    return validate(StagedTree(nodes, root, parent, kind, ladders,
                               {n: C(m) for n, m in mult.items()},
                               list(cardinals)))


@pytest.fixture
def p1():
    return build(["r", "u"], "r", {"u": "r"}, {"u": "top"},
                 {"r": "topped", "u": "open"}, {"u": "K"})


@pytest.fixture
def forked():
    # succ fork under the root, one branch laddered with finite multiplicity
    return build(["r", "a", "b"], "r", {"a": "r", "b": "r"},
                 {"a": "succ", "b": "succ"},
                 {"a": "open"}, {"a": 2})


# --- validation ---

def test_rejects_missing_parent():
    with pytest.raises(ValidationError, match="no parent"):
        build(["r", "x"], "r", {}, {"x": "succ"}, {}, {})


def test_rejects_parent_cycle():
    with pytest.raises(ValidationError, match="cycle"):
        build(["r", "a", "b"], "r", {"a": "b", "b": "a"},
              {"a": "succ", "b": "succ"}, {}, {})


def test_rejects_root_multiplicity():
    with pytest.raises(ValidationError, match="root multiplicity"):
        build(["r"], "r", {}, {}, {}, {"r": 2})


def test_rejects_top_child_without_topped_flag():
    with pytest.raises(ValidationError, match="top children"):
        build(["r", "u"], "r", {"u": "r"}, {"u": "top"}, {}, {})


def test_rejects_ladder_with_succ_children(p1):
    with pytest.raises(ValidationError, match="interpose"):
        build(["r", "u"], "r", {"u": "r"}, {"u": "succ"}, {"r": "open"}, {})


def test_rejects_undeclared_cardinal():
    with pytest.raises(ValidationError, match="undeclared"):
        build(["r", "u"], "r", {"u": "r"}, {"u": "top"},
              {"r": "topped", "u": "open"}, {"u": "L"}, cardinals=("aleph0",))


def test_rejects_topped_flag_without_tops():
    with pytest.raises(ValidationError, match="topped but has no top"):
        build(["r"], "r", {}, {}, {"r": "topped"}, {})


# --- lookups ---

def test_paths_and_children(forked):
    assert forked.path("a") == ["r", "a"]
    assert forked.succ_children["r"] == ["a", "b"]
    assert forked.mult_components("a") == ["a"]
    assert forked.mult_components("b") == []
    assert forked.is_pruned() is False  # b is a bare leaf
    assert forked.leaves() == ["b"]


def test_path_count(p1, forked):
    assert p1.path_count("u") == C("K")
    assert forked.path_count("a") == C(2)


def test_coord_validation(forked):
    forked.coord("a", {"a": 2})
    # unnamed components default to copy 1
    assert forked.coord("a").copies == (("a", 1),)
    with pytest.raises(ValidationError, match="exceeds multiplicity"):
        forked.coord("a", {"a": 3})
    from treescape.staged import NodeCoord
    with pytest.raises(ValidationError, match="exactly"):
        forked.check_coord(NodeCoord("a"))
    with pytest.raises(ValidationError, match="no ladder"):
        forked.coord("b", rung=1)
    with pytest.raises(ValidationError, match="unknown node"):
        forked.coord("zz")


# --- heights ---

def test_heights(p1):
    assert p1.node_height("r") == fin(0)
    # u sits above the whole omega ladder of r
    assert p1.node_height("u") == Ordinal(1, 0)
    # its own open ladder adds another omega block
    assert p1.tree_height() == Ordinal(2, 0)


def test_rung_heights(p1):
    assert p1.height_of(p1.coord("r", rung=3)) == fin(4)
    assert p1.height_of(p1.coord("u", {"u": 1}, rung=0)) == Ordinal(1, 1)


# --- relation against a brute-force truncation oracle ---

def brute_leq(exp, a, b):
    cur = b
    while cur is not None:
        if cur == a:
            return True
        cur = exp.parent_of[cur]
    return False


def test_relation_matches_truncation_oracle(corpus):
    for name in ("P1", "P2", "FORK2", "MICH(2)"):
        tree = corpus[name]
        exp = tree.truncate(depth=3, copies=2)
        pairs = itertools.combinations(exp.elements, 2)
        for a, b in itertools.islice(pairs, 4000):
            rel = tree.relation(a, b)
            below, above = brute_leq(exp, a, b), brute_leq(exp, b, a)
            if a == b:
                want = "="
            elif below:
                want = "<"
            elif above:
                want = ">"
            else:
                want = "||"
            assert rel == want, (name, a, b, rel, want)


def test_truncation_census(p1):
    exp = p1.truncate(depth=2, copies=3)
    # r, 2 rungs, 3 copies of u, each with 2 rungs
    assert len(exp.elements) == 1 + 2 + 3 * 3
    chains = set(exp.down_sets())
    assert len(chains) == len(exp.elements)  # one chain per element


# --- decomposition and frontiers ---

def test_special_decomposition(p1):
    dec = p1.special_decomposition()
    assert [s.node for s in dec["node_slices"]] == ["r", "u"]
    assert dec["ladder_rung_families"] == ["r", "u"]


def test_frontier_and_cofinal(p1):
    levels = p1.cofinal_antichain_sequence(3)
    assert len(levels) == 3
    # every later stage climbs at least one rung on a surviving ladder
    rungs = [{s.node: s.rung for s in level} for level in levels]
    for lo, hi in zip(rungs, rungs[1:]):
        for node, r in hi.items():
            if node in lo and lo[node] is not None and r is not None:
                assert r > lo[node]
    assert p1.frontier_slices(0)


def test_successor_sup(corpus):
    assert corpus["P1"].successor_sup().is_finite
    assert str(corpus["P2"].successor_sup()) == "aleph0"


# --- split_named_copies ---

def test_split_named_copies(p1):
    spec, renames = split_named_copies(p1, {"u": [1, 2]})
    out = validate(spec)
    named = [new for (old, choice), new in renames.items()
             if old == "u" and any(i > 0 for _, i in choice)]
    assert sorted(named) == ["u_1", "u_2"]
    for nd in named:
        assert out.mult[nd] == C(1)
        assert out.is_laddered(nd)
    # the residual keeps the symbolic count
    assert out.mult["u_rest"] == C("K")


def test_split_exhausts_finite_multiplicity(forked):
    spec, renames = split_named_copies(forked, {"a": [1, 2]})
    out = validate(spec)
    # multiplicity 2 fully named: no residual node remains
    assert sorted(out.nodes) == ["a_1", "a_2", "b", "r"]
    assert all(out.mult[n] == C(1) for n in out.nodes)
