"""Ordinals below w*w, used for node heights and tree heights.

An ordinal here is w*a + b with a, b natural numbers.  That range is closed
under the left-absorbing ordinal sum, which is all the height calculus needs;
anything that would reach w*w is rejected rather than silently extended.
"""
from __future__ import annotations

from dataclasses import dataclass


class OrdinalError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Ordinal:
    limit_coeff: int = 0
    finite_part: int = 0

    def __post_init__(self):
        if self.limit_coeff < 0 or self.finite_part < 0:
            raise OrdinalError("ordinal parts must be nonnegative")

    @property
    def is_finite(self) -> bool:
        return self.limit_coeff == 0

    def __add__(self, other: "Ordinal") -> "Ordinal":
        # left summand is absorbed up to its last limit block
        if other.limit_coeff > 0:
            return Ordinal(self.limit_coeff + other.limit_coeff, other.finite_part)
        return Ordinal(self.limit_coeff, self.finite_part + other.finite_part)

    def __str__(self) -> str:
        if self.limit_coeff == 0:
            return str(self.finite_part)
        head = f"w*{self.limit_coeff}"
        return head if self.finite_part == 0 else f"{head}+{self.finite_part}"

    def __repr__(self) -> str:
        return f"Ordinal({self.limit_coeff}, {self.finite_part})"


ZERO = Ordinal(0, 0)
ONE = Ordinal(0, 1)
OMEGA = Ordinal(1, 0)


def fin(n: int) -> Ordinal:
    return Ordinal(0, n)


def parse_ordinal(text: str) -> Ordinal:
    """Parse "w*a+b", "w*a", "w", "w+b", or a plain integer."""
    s = text.strip().replace(" ", "")
    if not s:
        raise OrdinalError("empty ordinal")
    if "w" not in s:
        try:
            return Ordinal(0, int(s))
        except ValueError:
            raise OrdinalError(f"bad ordinal {text!r}") from None
    if s.count("w") > 1:
        raise OrdinalError(f"ordinal {text!r} is not below w*w")
    head, plus, tail = s.partition("+")
    try:
        if head == "w":
            a = 1
        elif head.startswith("w*"):
            a = int(head[2:])
        else:
            raise ValueError
        b = int(tail) if plus else 0
    except ValueError:
        raise OrdinalError(f"bad ordinal {text!r}") from None
    if a < 0 or b < 0:
        raise OrdinalError(f"bad ordinal {text!r}")
    return Ordinal(a, b)
