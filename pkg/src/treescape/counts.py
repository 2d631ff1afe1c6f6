"""Extended counts: positive integers plus symbolic infinite cardinals.

Cardinals are opaque ordered names.  "aleph0" is always declared and is the
smallest; every further name declared in a presentation sits above everything
declared before it.  Arithmetic is max-absorbing on the infinite side
(finite * K = K, K * L = max(K, L)) and exact on finite values, which is all
the class-counting calculus requires.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

ALEPH0 = "aleph0"


class CountError(ValueError):
    pass


@dataclass
class CardinalContext:
    """Declared infinite cardinal names, smallest first."""

    names: list[str] = field(default_factory=lambda: [ALEPH0])

    def __post_init__(self):
        if not self.names or self.names[0] != ALEPH0:
            self.names = [ALEPH0] + [n for n in self.names if n != ALEPH0]

    def __iter__(self):
        return iter(self.names)

    def declare(self, name: str) -> None:
        if name in self.names:
            raise CountError(f"cardinal {name!r} already declared")
        if not name.isidentifier():
            raise CountError(f"bad cardinal name {name!r}")
        self.names.append(name)

    def rank(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise CountError(f"cardinal {name!r} not declared") from None

    def larger(self, a: str, b: str) -> str:
        return a if self.rank(a) >= self.rank(b) else b

    def successor_tier(self, name: str) -> str:
        """Name of the least cardinal tier strictly above `name`."""
        self.rank(name)
        return "aleph1" if name == ALEPH0 else f"{name}+"


@dataclass(frozen=True)
class Count:
    """A positive integer or a symbolic infinite cardinal."""

    finite: int | None = None
    symbol: str | None = None

    def __post_init__(self):
        if (self.finite is None) == (self.symbol is None):
            raise CountError("count is either finite or symbolic")
        if self.finite is not None and self.finite < 0:
            raise CountError("finite count must be >= 0")

    @property
    def is_finite(self) -> bool:
        return self.finite is not None

    @property
    def is_infinite(self) -> bool:
        return self.symbol is not None

    def __str__(self) -> str:
        return str(self.finite) if self.is_finite else str(self.symbol)

    def __repr__(self) -> str:
        return f"Count({self})"


def C(value: int | str | Count) -> Count:
    if isinstance(value, Count):
        return value
    if isinstance(value, int):
        return Count(finite=value)
    return Count(symbol=value)


ONE = C(1)
ZERO = C(0)
ALEPH_0 = C(ALEPH0)


def _pick(ctx: CardinalContext, a: str, b: str) -> str:
    try:
        return ctx.larger(a, b)
    except CountError:
        warnings.warn(
            f"comparison of cardinals {a!r} and {b!r} is undeclared; "
            "falling back to declaration order",
            stacklevel=3,
        )
        names = ctx.names + [n for n in (a, b) if n not in ctx.names]
        return a if names.index(a) >= names.index(b) else b


def add(ctx: CardinalContext, a: Count, b: Count) -> Count:
    if a.is_finite and b.is_finite:
        return C(a.finite + b.finite)
    if a.is_finite:
        return b
    if b.is_finite:
        return a
    return C(_pick(ctx, a.symbol, b.symbol))


def mul(ctx: CardinalContext, a: Count, b: Count) -> Count:
    if a.is_finite and b.is_finite:
        return C(a.finite * b.finite)
    if a.is_finite:
        return ZERO if a.finite == 0 else b
    if b.is_finite:
        return ZERO if b.finite == 0 else a
    return C(_pick(ctx, a.symbol, b.symbol))


def sub_finite(a: Count, n: int) -> Count:
    """a - n for finite n; infinite counts absorb."""
    if a.is_infinite:
        return a
    if a.finite < n:
        raise CountError(f"cannot remove {n} from {a}")
    return C(a.finite - n)


def cmp(ctx: CardinalContext, a: Count, b: Count) -> int:
    if a.is_finite and b.is_finite:
        return (a.finite > b.finite) - (a.finite < b.finite)
    if a.is_finite:
        return -1
    if b.is_finite:
        return 1
    if a.symbol == b.symbol:
        return 0
    return 1 if _pick(ctx, a.symbol, b.symbol) == a.symbol else -1


def maximum(ctx: CardinalContext, counts) -> Count:
    best = None
    for c in counts:
        if best is None or cmp(ctx, c, best) > 0:
            best = c
    if best is None:
        raise CountError("maximum of empty collection")
    return best


def parse_count(text: str) -> Count:
    s = text.strip()
    if s.isdigit():
        return C(int(s))
    if s.isidentifier():
        return C(s)
    raise CountError(f"bad count {text!r}")
