import pytest

from treescape.counts import C
from treescape.points import Space
from treescape.regions import RAY_CLASS, PointClass, ValidationError
from treescape.staged import StagedTree, validate


def build(nodes, root, parent, kind, ladders, mult, cards=("aleph0", "K")):
    return validate(StagedTree(nodes, root, parent, kind, ladders,
                               {n: C(m) for n, m in mult.items()}, list(cards)))


def test_space_rejects_unknown_kind(corpus):
    with pytest.raises(ValidationError):
        Space(corpus["P1"], "mystery")


def test_p1_ray_analysis(corpus):
    rep = Space(corpus["P1"], "ray").analysis(4, 3)
    assert [(c["kind"], c["anchor"], c["count"]) for c in rep["classes"]] == [
        ("ray", "r", "1"), ("ray", "u", "K")]
    assert rep["isolated"] == ["ray(u)"]
    assert rep["limits"] == [{"at": "ray(r)", "of": "ray(u)",
                              "why": "across_tops(u)", "per_top": "1"}]


def test_p2_ray_analysis(corpus):
    rep = Space(corpus["P2"], "ray").analysis(4, 3)
    counts = {c["anchor"]: c["count"] for c in rep["classes"]}
    assert counts["r"] == "1"
    assert counts["c"] == "K"  # K tops, aleph0 fans each: K*aleph0 = K
    assert rep["isolated"] == ["ray(c)"]
    (row,) = rep["limits"]
    assert row["at"] == "ray(r)" and row["of"] == "ray(c)"
    assert row["per_top"] == "aleph0"


def test_limit_edge_from_below_only_in_path_spaces(corpus):
    p1 = corpus["P1"]
    path = Space(p1, "path")
    ctx = path.ctx(extra={"u": 2})
    whys = {e.why for e in path.limit_edges(ctx)}
    assert any(w.startswith("from_below") for w in whys)
    ray = Space(p1, "ray")
    rctx = ray.ctx(extra={"u": 2})
    assert all(not e.why.startswith("from_below") for e in ray.limit_edges(rctx))


def test_fan_limit_needs_infinite_residual():
    # two named tops only: the hub ray is itself isolated
    t = build(["r", "a", "b"], "r", {"a": "r", "b": "r"},
              {"a": "top", "b": "top"},
              {"r": "topped", "a": "open", "b": "open"}, {})
    space = Space(t, "ray")
    assert space.class_limits() == []
    assert {str(c) for c in space.isolated_classes()} == {
        "ray(r)", "ray(a)", "ray(b)"}


def test_branch_space_drops_interior_classes(corpus):
    p1 = corpus["P1"]
    branch = Space(p1, "branch")
    anchors = {info.cls.anchor for info in branch.classes}
    assert anchors == {"u"}  # the hub ray continues into the fan, so not maximal


def test_isolated_atoms_vs_classes(corpus):
    space = Space(corpus["P1"], "ray")
    iso = space.isolated_classes()
    assert iso == [PointClass(RAY_CLASS, "u")]


def test_class_limits_aggregate_max_per_top(corpus):
    space = Space(corpus["P2"], "ray")
    (row,) = space.class_limits()
    assert str(row.per_top) == "aleph0"


def test_neighbourhood_menus_are_filter_bases(corpus):
    # any two canonical basics around an atom contain a third around it
    from treescape.regions import basic_opens_at, holds, inter, atoms_in

    for name in ("P1", "FORK2", "OMEGA"):
        space = Space(corpus[name], "ray")
        ctx = space.ctx(extra={n: 2 for n in corpus[name].nodes
                               if corpus[name].mult[n] != C(1)})
        for atom in ctx.atoms:
            menu = basic_opens_at(ctx, atom)
            for i, a in enumerate(menu):
                for b in menu[i + 1:]:
                    meet = inter(a.region(), b.region())
                    inside = [x for x in menu
                              if not atoms_in(ctx, x.region())
                              or set(atoms_in(ctx, x.region()))
                              <= set(atoms_in(ctx, meet))]
                    assert holds(ctx, meet, atom)
                    assert inside, (name, atom, str(a), str(b))


def test_pi_base_report(corpus):
    rep = Space(corpus["P1"], "ray").pi_base_report()
    assert rep["holds"]
    assert rep["basics_checked"] > 0


def test_analysis_echoes_params(corpus):
    rep = Space(corpus["OMEGA"], "ray").analysis(depth=6, copies=2)
    assert rep["params"] == {"depth": 6, "copies": 2}
