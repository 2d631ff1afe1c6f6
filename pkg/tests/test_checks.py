import pytest

from treescape.checks import (
    FamilyMember,
    SequenceSpec,
    family_report,
    hausdorff_witness,
    hereditarily_complete,
    is_compact,
    lindelof_number,
    mono_normal_operator,
    mono_normal_scan,
    seeded_cover,
    standard_family,
    tau_seq_limit,
    ultrapartition,
)
from treescape.corpus import GenParams, generate_tree
from treescape.counts import ALEPH0, C, CardinalContext
from treescape.points import Space
from treescape.regions import (
    Not,
    PointClass,
    Sel,
    ValidationError,
    atoms_in,
    gen_of,
    holds,
    is_disjoint,
    is_subset,
    union,
)
from treescape.staged import NodeCoord, StagedTree, validate


def build(nodes, root, parent, kind, ladders, mult, cardinals=("aleph0", "K")):
    return validate(StagedTree(nodes, root, parent, kind, ladders,
                               {n: C(m) for n, m in mult.items()},
                               list(cardinals)))


@pytest.fixture(scope="module")
def deep():
    # two stacked ladders before the open fan, so limits can disagree with
    # a pinned coordinate strictly between root and anchor
    return build(["a", "b", "c"], "a", {"b": "a", "c": "b"},
                 {"b": "top", "c": "top"},
                 {"a": "topped", "b": "topped", "c": "open"},
                 {"b": "K", "c": "aleph0"})


# --- the neighbourhood operator ---

def test_operator_output_sits_between_point_and_target(corpus):
    tree = corpus["P1"]
    space = Space(tree, "ray")
    x = NodeCoord("u", (("u", 1),))
    target = gen_of(tree, "u")
    b = mono_normal_operator(space, x, target)
    ctx = space.ctx(material=[b.region(), target])
    ax = ctx.atom_for(PointClass("ray", "u"), {"u": 1})
    assert holds(ctx, b.region(), ax)
    assert is_subset(ctx, b.region(), target)


def test_operator_rejects_point_outside_target(corpus):
    tree = corpus["P2"]
    space = Space(tree, "ray")
    x = NodeCoord("r")
    with pytest.raises(ValidationError, match="not in the target"):
        mono_normal_operator(space, x, gen_of(tree, "c"))


def test_operator_rejects_non_ray_point(corpus):
    tree = corpus["P2"]
    space = Space(tree, "ray")
    # u carries multiplicity but no ladder, so it anchors no ray
    with pytest.raises(ValidationError, match="not a ray"):
        mono_normal_operator(space, NodeCoord("u", (("u", 1),)), gen_of(tree, "c"))
    with pytest.raises(ValidationError, match="ray spaces"):
        mono_normal_operator(Space(tree, "path"), NodeCoord("c"), gen_of(tree, "c"))


def test_operator_strong_disjointness(corpus):
    # x outside y's target and vice versa must yield disjoint outputs
    tree = corpus["FORK2"]
    space = Space(tree, "ray")
    x, y = NodeCoord("a"), NodeCoord("b")
    gx, gy = gen_of(tree, "a"), gen_of(tree, "b")
    bx = mono_normal_operator(space, x, Not(gy))
    by = mono_normal_operator(space, y, Not(gx))
    ctx = space.ctx(material=[bx.region(), by.region()])
    assert is_disjoint(ctx, bx.region(), by.region())


def test_scan_quadruple_counts(corpus):
    expected = {
        ("P1", 2): 40,
        ("P1", 3): 120,
        ("P2", 2): 184,
        ("FORK2", 2): 8,
        ("OMEGA", 2): 0,
        ("MICH(2)", 2): 14400,
    }
    for (name, copies), n in expected.items():
        rep = mono_normal_scan(Space(corpus[name], "ray"), copies=copies,
                               max_quadruples=20000)
        assert rep["holds"], (name, rep["failures"])
        assert rep["quadruples"] == n
        assert "truncated" not in rep


def test_scan_truncation_is_flagged(corpus):
    rep = mono_normal_scan(Space(corpus["P1"], "ray"), copies=3, max_quadruples=7)
    assert rep["holds"]
    assert rep["quadruples"] == 7
    assert rep["truncated"]


def test_hausdorff_witnesses(corpus):
    space = Space(corpus["P1"], "ray")
    within = hausdorff_witness(space, NodeCoord("u", (("u", 1),)),
                               NodeCoord("u", (("u", 2),)))
    across = hausdorff_witness(space, NodeCoord("r"),
                               NodeCoord("u", (("u", 1),)))
    assert within["disjoint"] and across["disjoint"]
    with pytest.raises(ValidationError, match="coincide"):
        hausdorff_witness(space, NodeCoord("r"), NodeCoord("r"))


# --- covering numbers ---

def test_corpus_covering_tiers(corpus):
    assert lindelof_number(corpus["P1"]) == {"tier": ALEPH0, "sup": "1",
                                             "witness": None}
    p2 = lindelof_number(corpus["P2"])
    assert p2["tier"] == "aleph1" and p2["sup"] == "aleph0"
    w = p2["witness"]
    assert w["node"] == "u" and w["covers"] and w["irreducible"]
    assert w["fan_size"] == "aleph0"
    for name in ("FORK2", "MICH(2)", "OMEGA"):
        assert lindelof_number(corpus[name])["tier"] == ALEPH0


def test_covering_number_needs_pruning(corpus):
    with pytest.raises(ValidationError, match="pruned"):
        lindelof_number(corpus["ADUP(2)"])


def fan_tier_oracle(tree):
    # one cover member per successor cone is forced, so the bound sits just
    # above the largest infinite fan; with only finite fans it is countable
    worst = None
    for c in tree.nodes:
        parent = tree.parent.get(c)
        if parent is None or tree.kind.get(c) != "succ":
            continue
        m = tree.mult[c]
        if m.is_infinite and (worst is None or
                              tree.cardinals.rank(m.symbol) > tree.cardinals.rank(worst)):
            worst = m.symbol
    return ALEPH0 if worst is None else tree.cardinals.successor_tier(worst)


def test_tier_matches_fan_oracle(corpus):
    trees = [t for t in corpus.values() if t.is_pruned()]
    for seed in range(40):
        trees.append(generate_tree(seed, GenParams(pruned=True)))
    for tree in trees:
        rep = lindelof_number(tree)
        assert rep["tier"] == fan_tier_oracle(tree), tree.name
        if rep["witness"] is not None:
            assert rep["witness"]["covers"], tree.name
            assert rep["witness"]["irreducible"], tree.name


def test_compactness_facts(corpus):
    assert is_compact(corpus["P1"])
    assert not is_compact(corpus["P2"])
    assert is_compact(corpus["FORK2"])
    assert is_compact(corpus["MICH(2)"])
    assert not is_compact(corpus["ADUP(2)"])  # bare leaves


# --- the standard family ---

def test_standard_family_shape(corpus):
    tree = corpus["P2"]
    members = standard_family(tree)
    by_label = {m.label: m for m in members}
    assert set(by_label) == {"[r]", "[r:*]", "[u]", "[c]", "[c:*]"}
    assert by_label["[r]"].kind == "region"
    assert by_label["[u]"].kind == "region"  # no ladder on u, no rung family
    assert by_label["[c:*]"].kind == "rungs" and by_label["[c:*]"].node == "c"


def test_standard_family_report_corpus(corpus):
    for name in ("P1", "P2", "FORK2", "MICH(2)"):
        space = Space(corpus[name], "ray")
        rep = family_report(space, standard_family(corpus[name]),
                            check_hereditary=True)
        for key in ("nested", "noetherian", "sigma_disjoint", "complete",
                    "hereditarily_complete"):
            assert rep[key]["holds"], (name, key, rep[key])
        noe = rep["noetherian"]
        assert noe["longest_chain"] <= noe["structural_bound"]


def test_completeness_restricted_to_region(corpus):
    tree = corpus["P2"]
    space = Space(tree, "ray")
    rep = family_report(space, standard_family(tree),
                        restrict_to=gen_of(tree, "c"))
    assert rep["complete"]["holds"]


def test_overlapping_members_break_nestedness(corpus):
    tree = corpus["P2"]
    space = Space(tree, "ray")
    left = union(gen_of(tree, "c", {"c": Sel(index=1)}),
                 gen_of(tree, "c", {"c": Sel(index=2)}))
    right = union(gen_of(tree, "c", {"c": Sel(index=2)}),
                  gen_of(tree, "c", {"c": Sel(index=3)}))
    members = [FamilyMember("L", "region", region=left),
               FamilyMember("R", "region", region=right)]
    rep = family_report(space, members)
    assert not rep["nested"]["holds"]


def test_hereditary_completeness_standalone(corpus):
    space = Space(corpus["P1"], "ray")
    rep = hereditarily_complete(space, standard_family(corpus["P1"]))
    assert rep["holds"]
    assert rep["closed_regions_checked"] >= 3  # singletons, the pair, whole


# --- sequence limits ---

def test_eventually_equal_point_lists(corpus):
    space = Space(corpus["P1"], "ray")
    x = NodeCoord("u", (("u", 1),))
    same = SequenceSpec(points=[x, x, x])
    assert tau_seq_limit(space, same, x)["converges"]
    other = SequenceSpec(points=[x, NodeCoord("u", (("u", 2),))])
    rep = tau_seq_limit(space, other, x)
    assert not rep["converges"]
    assert "repeats" in rep["reasons"][0]


def test_fan_sequence_converges_to_hub(corpus):
    space = Space(corpus["P1"], "ray")
    spec = SequenceSpec(cls=PointClass("ray", "u"), fixed={}, distinct="u")
    rep = tau_seq_limit(space, spec, NodeCoord("r"))
    assert rep["converges"]
    assert rep["a_part"] == "infinite" and rep["b_part"] == "finite"


def test_interposed_top_confines_the_sequence(corpus):
    # the named copy of u sits in every member, so no subsequence escapes
    space = Space(corpus["P2"], "ray")
    spec = SequenceSpec(cls=PointClass("ray", "c"), fixed={"u": 1}, distinct="c")
    rep = tau_seq_limit(space, spec, NodeCoord("r"))
    assert not rep["converges"]
    assert any("lies in every member" in r for r in rep["reasons"])


def test_varying_the_top_component_converges(corpus):
    space = Space(corpus["P2"], "ray")
    spec = SequenceSpec(cls=PointClass("ray", "c"), fixed={"c": 1}, distinct="u")
    assert tau_seq_limit(space, spec, NodeCoord("r"))["converges"]


def test_pinned_coordinate_must_agree_with_the_limit(deep):
    space = Space(deep, "ray")
    spec = SequenceSpec(cls=PointClass("ray", "c"), fixed={"b": 1}, distinct="c")
    bad = tau_seq_limit(space, spec, NodeCoord("b", (("b", 2),)))
    assert not bad["converges"]
    assert any("disagrees with the limit" in r for r in bad["reasons"])
    assert bad["b_part"] == "infinite"
    good = tau_seq_limit(space, spec, NodeCoord("b", (("b", 1),)))
    assert good["converges"]


def test_sequence_spec_validation(corpus, deep):
    space = Space(corpus["P2"], "ray")
    spec = SequenceSpec(cls=PointClass("ray", "c"), fixed={"u": 1}, distinct="c")
    with pytest.raises(ValidationError, match="not a ray"):
        tau_seq_limit(space, spec, NodeCoord("u", (("u", 1),)))
    with pytest.raises(ValidationError, match="not a class"):
        tau_seq_limit(space, SequenceSpec(cls=PointClass("ray", "u"),
                                          fixed={}, distinct="u"),
                      NodeCoord("r"))
    with pytest.raises(ValidationError, match="bears no copy index"):
        tau_seq_limit(space, SequenceSpec(cls=PointClass("ray", "c"),
                                          fixed={}, distinct="r"),
                      NodeCoord("r"))
    with pytest.raises(ValidationError, match="pin the rest"):
        tau_seq_limit(space, SequenceSpec(cls=PointClass("ray", "c"),
                                          fixed={}, distinct="c"),
                      NodeCoord("r"))
    finite = build(["r", "u"], "r", {"u": "r"}, {"u": "top"},
                   {"r": "topped", "u": "open"}, {"u": 3})
    with pytest.raises(ValidationError, match="infinite multiplicity"):
        tau_seq_limit(Space(finite, "ray"),
                      SequenceSpec(cls=PointClass("ray", "u"), fixed={},
                                   distinct="u"),
                      NodeCoord("r"))


# --- clopen partitions ---

def test_seeded_covers_refine_to_partitions(corpus):
    for name in ("P1", "P2", "FORK2", "MICH(2)", "OMEGA"):
        space = Space(corpus[name], "ray")
        for seed in range(3):
            cover = seeded_cover(space, seed)
            rep = ultrapartition(space, cover)
            assert all(rep["verified"].values()), (name, seed, rep["verified"])
            assert len(rep["pieces"]) >= 1


def test_seeded_cover_is_deterministic(corpus):
    space = Space(corpus["P2"], "ray")
    a = [str(r) for r in seeded_cover(space, 7)]
    b = [str(r) for r in seeded_cover(space, 7)]
    assert a == b


def test_handmade_cover_partition(corpus):
    tree = corpus["FORK2"]
    space = Space(tree, "ray")
    cover = [gen_of(tree, "a"), gen_of(tree, "b")]
    rep = ultrapartition(space, cover)
    assert all(rep["verified"].values())
    assert len(rep["pieces"]) == 2
    # cross-check the returned pieces against the raw calculus
    pieces = rep["regions"]
    ctx = space.ctx(material=list(pieces) + list(cover))
    for i, p in enumerate(pieces):
        for q in pieces[i + 1:]:
            assert is_disjoint(ctx, p, q)
        assert any(is_subset(ctx, p, c) for c in cover)
    assert not atoms_in(ctx, Not(union(*pieces)))


def test_non_open_cover_members_are_rejected(corpus):
    # the hub ray sits in the closure of the fan, so the complement of the
    # fan cone is not open and cannot join a clopen partition
    tree = corpus["P1"]
    space = Space(tree, "ray")
    with pytest.raises(ValidationError, match="not open"):
        ultrapartition(space, [gen_of(tree, "u"), Not(gen_of(tree, "u"))])
