import pytest

from treescape.corpus import corpus_sources, generate_family, generate_tree
from treescape.dsl import (
    DslError,
    FamilySpec,
    parse_coord,
    parse_family,
    parse_source,
    parse_tree,
    print_family,
    print_tree,
)
from treescape.laminar import ground_family
from treescape.staged import ValidationError


def test_corpus_sources_parse_and_round_trip():
    for name, src in corpus_sources().items():
        tree = parse_tree(src)
        canon = print_tree(tree)
        again = print_tree(parse_tree(canon))
        assert canon == again, name


def test_generated_trees_round_trip():
    for seed in range(25):
        tree = generate_tree(seed)
        canon = print_tree(tree)
        assert print_tree(parse_tree(canon)) == canon


def test_comments_and_whitespace_ignored():
    src = """
    # leading comment
    node r root;   # trailing
    ladder r open;
    """
    tree = parse_tree(src)
    assert tree.nodes == ["r"]
    assert tree.is_laddered("r")


def test_empty_file_diagnostic():
    with pytest.raises(DslError, match="no root"):
        parse_tree("")


def test_syntax_error_carries_position():
    try:
        parse_tree("node r root")
        raise AssertionError("missing semicolon accepted")
    except DslError as err:
        (line, col, msg) = err.diagnostics[0]
        assert line == 1 and col > 1
        assert "expected" in msg


def test_semantic_error_forwarded():
    # validation problems come back as positionless diagnostics
    src = "node r root;\nnode u parent r kind top;\n"
    with pytest.raises(DslError, match="top children"):
        parse_tree(src)


def test_unknown_cardinal_diagnosed():
    src = "node r root;\nladder r topped;\nnode u parent r kind top mult L;\n"
    with pytest.raises((DslError, ValidationError), match="L"):
        parse_tree(src)


# --- families ---

def test_family_ground_round_trip():
    for seed in range(15):
        ground, members = generate_family(seed)
        fam = ground_family(f"g{seed}", ground, members)
        canon = print_family(fam)
        spec = parse_family(canon)
        assert isinstance(spec, FamilySpec)
        assert print_family(spec) == canon
        assert frozenset(spec.ground) == ground
        assert [frozenset(m) for m in spec.ground_members] == [
            frozenset(m) for m in members]


def test_family_space_mode_round_trip():
    # "@" stands in for "#", which would open a comment
    src = ("family probe on space P1 {\n"
           "  gen [u@u=1:0];\n"
           "  rungs [r];\n"
           "}\n")
    spec = parse_family(src)
    assert spec.space == "P1"
    assert spec.member_coords == [("gen", "u@u=1:0"), ("rungs", "r")]
    assert print_family(spec) == src


def test_family_member_form_checked():
    with pytest.raises(DslError, match="gen or rungs"):
        parse_family("family f on space T { cone [r]; }")


def test_parse_source_dispatches_on_keyword():
    assert isinstance(parse_source("family f on ground {1} { X; }"), FamilySpec)
    tree = parse_source("node r root; ladder r open;")
    assert tree.nodes == ["r"]


# --- coordinates ---

def test_parse_coord_forms(corpus):
    p1 = corpus["P1"]
    assert str(parse_coord(p1, "r")) == "r"
    assert str(parse_coord(p1, "r:2")) == "r:2"
    assert str(parse_coord(p1, "u#u=3")) == "u#u=3"
    assert str(parse_coord(p1, "[u#u=3:1]")) == "u#u=3:1"


def test_parse_coord_validates(corpus):
    with pytest.raises(ValidationError):
        parse_coord(corpus["P1"], "nope")
