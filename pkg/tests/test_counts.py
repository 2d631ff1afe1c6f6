import pytest

from treescape.counts import (
    ALEPH0,
    C,
    CardinalContext,
    Count,
    CountError,
    add,
    cmp,
    maximum,
    mul,
    parse_count,
    sub_finite,
)


@pytest.fixture
def ctx():
    return CardinalContext([ALEPH0, "K"])


def test_constructor_forms():
    assert C(3).is_finite and C(3).finite == 3
    assert C("K").is_infinite and C("K").symbol == "K"
    assert C(C(5)) == C(5)


def test_add_absorbs_into_larger_tier(ctx):
    assert add(ctx, C(2), C(3)) == C(5)
    assert add(ctx, C(2), C(ALEPH0)) == C(ALEPH0)
    assert add(ctx, C(ALEPH0), C("K")) == C("K")
    assert add(ctx, C("K"), C(0)) == C("K")


def test_mul(ctx):
    assert mul(ctx, C(2), C(3)) == C(6)
    assert mul(ctx, C(0), C("K")) == C(0)
    assert mul(ctx, C(ALEPH0), C("K")) == C("K")


def test_sub_finite():
    assert sub_finite(C(5), 2) == C(3)
    assert sub_finite(C("K"), 4) == C("K")


def test_cmp_and_maximum(ctx):
    assert cmp(ctx, C(1), C(2)) < 0
    assert cmp(ctx, C(ALEPH0), C(999)) > 0
    assert cmp(ctx, C("K"), C("K")) == 0
    assert maximum(ctx, [C(1), C("K"), C(ALEPH0)]) == C("K")


def test_context_order_and_successor(ctx):
    assert list(ctx) == [ALEPH0, "K"]
    assert ctx.rank(ALEPH0) < ctx.rank("K")
    assert ctx.larger(ALEPH0, "K") == "K"
    assert ctx.successor_tier(ALEPH0) == "aleph1"


def test_declare_extends_order(ctx):
    ctx.declare("L")
    assert ctx.rank("L") > ctx.rank("K")


def test_unknown_symbol_rejected(ctx):
    with pytest.raises(CountError):
        ctx.rank("Z")


def test_parse_count():
    assert parse_count("7") == C(7)
    assert parse_count("K") == C("K")
