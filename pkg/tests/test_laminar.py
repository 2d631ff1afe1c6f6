import pytest

from treescape.laminar import (
    GroundFamily,
    ground_family,
    laminar_to_tree,
    subbase_embedding,
)
from treescape.staged import ValidationError


def fam(members, ground=frozenset(range(1, 7)), name="f"):
    return ground_family(name, ground, [frozenset(m) for m in members])


SEPARATING = [
    {1, 2, 3, 4, 5, 6},
    {1, 2, 3},
    {1},
    {2},
    {4, 5},
    {4},
    {6},
]


def test_tree_mirrors_reverse_inclusion():
    st = laminar_to_tree(fam(SEPARATING))
    tree = st.tree
    # one node per distinct member; the ground is the root
    assert len(tree.nodes) == len(SEPARATING)
    for node in tree.nodes:
        for child in tree.children(node):
            assert st.labels[child] < st.labels[node]
    sets = sorted(st.labels.values(), key=len, reverse=True)
    assert sets[0] == frozenset(range(1, 7))
    # the level decomposition certifies sigma-disjointness and specialness
    assert st.report["sigma_disjoint"] and st.report["special"]


def test_incomparable_members_are_disjoint_here():
    st = laminar_to_tree(fam(SEPARATING))
    tree = st.tree
    for a in tree.nodes:
        for b in tree.nodes:
            pa, pb = tree.path(a), tree.path(b)
            if a != b and a not in pb and b not in pa:
                assert not (st.labels[a] & st.labels[b])


def test_rejects_overlapping_members():
    with pytest.raises(ValidationError, match="nest"):
        laminar_to_tree(fam([{1, 2, 3, 4, 5, 6}, {1, 2}, {2, 3}]))


def test_rejects_missing_ground():
    with pytest.raises(ValidationError, match="ground"):
        laminar_to_tree(fam([{1, 2}]))


def test_rejects_empty_member():
    with pytest.raises(ValidationError, match="empty"):
        laminar_to_tree(fam([{1, 2, 3, 4, 5, 6}, set()]))


def test_duplicates_collapse():
    st = laminar_to_tree(fam([{1, 2, 3, 4, 5, 6}, {1, 2}, {1, 2}]))
    assert len(st.tree.nodes) == 2


def test_embedding_sends_points_to_deepest_member():
    f = fam(SEPARATING)
    st = laminar_to_tree(f)
    chains, emb = subbase_embedding(f, st)
    assert set(chains) == f.ground
    for pt, node in chains.items():
        assert pt in st.labels[node]
        for child in st.tree.children(node):
            assert pt not in st.labels[child]


def test_embedding_requires_separation():
    with pytest.raises(ValidationError, match="separate"):
        f = fam([{1, 2, 3, 4, 5, 6}, {1, 2}])
        subbase_embedding(f, laminar_to_tree(f))


def test_labeling_laws_verified():
    from treescape.laminar import validate_stree

    st = laminar_to_tree(fam(SEPARATING))
    out = validate_stree(st.tree, st.labels, [frozenset(m) for m in SEPARATING])
    assert out["ok"], out["witnesses"]


def test_dedup_preserves_first_appearance():
    f = GroundFamily("d", frozenset({1, 2}),
                     [frozenset({1, 2}), frozenset({1}), frozenset({1, 2})])
    assert f.dedup() == [frozenset({1, 2}), frozenset({1})]
