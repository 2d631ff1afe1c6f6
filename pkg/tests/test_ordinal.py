import pytest

from treescape.ordinal import Ordinal, OrdinalError, fin, parse_ordinal


def test_parse_and_print_round_trip():
    for text in ["0", "3", "w*1", "w*2+5", "w*1+1"]:
        assert str(parse_ordinal(text)) == text


def test_finite_addition():
    assert fin(2) + fin(3) == fin(5)
    assert fin(0) + fin(0) == fin(0)


def test_left_absorption():
    # a finite left summand vanishes before a limit
    assert fin(7) + Ordinal(1, 0) == Ordinal(1, 0)
    assert Ordinal(1, 4) + Ordinal(1, 0) == Ordinal(2, 0)
    # the finite tail of the right summand survives
    assert Ordinal(1, 0) + fin(3) == Ordinal(1, 3)


def test_addition_is_not_commutative():
    w = Ordinal(1, 0)
    assert fin(1) + w == w
    assert w + fin(1) != w


def test_order_is_lexicographic_on_limit_then_finite():
    assert fin(100) < Ordinal(1, 0) < Ordinal(1, 1) < Ordinal(2, 0)


def test_negative_parts_rejected():
    with pytest.raises(OrdinalError):
        Ordinal(-1, 0)
    with pytest.raises(OrdinalError):
        Ordinal(0, -2)


def test_parse_rejects_junk():
    for bad in ["w*", "x", "w*1+", "-3", "w*w"]:
        with pytest.raises(OrdinalError):
            parse_ordinal(bad)
