"""Cut points on the extended real line with values in Q(sqrt 2).

A cut is either -inf, +inf or an exact number ``a + b*sqrt(2)`` with
rational ``a`` and ``b``.  Rational cuts (``b == 0``) double as points of Q.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def _sign_quadratic(x: Fraction, y: Fraction) -> int:
    """Sign of ``x + y*sqrt(2)``, decided exactly."""
    if y == 0:
        return (x > 0) - (x < 0)
    if x == 0:
        return (y > 0) - (y < 0)
    if (x > 0) == (y > 0):
        return 1 if x > 0 else -1
    # opposite signs: compare x^2 with 2 y^2
    d = x * x - 2 * y * y
    if x > 0:
        return (d > 0) - (d < 0)
    return (d < 0) - (d > 0)


@functools.total_ordering
@dataclass(frozen=True)
class Cut:
    inf: int = 0
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        if self.inf not in (-1, 0, 1):
            raise ValueError("inf flag must be -1, 0 or 1")
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.inf and (self.a or self.b):
            raise ValueError("infinite cut carries no finite value")

    @classmethod
    def of(cls, value: "Rational | Cut | str") -> "Cut":
        if isinstance(value, Cut):
            return value
        if isinstance(value, str):
            return parse_cut(value)
        if isinstance(value, float):
            raise TypeError("floats are not exact; pass a Fraction")
        return cls(0, Fraction(value), Fraction(0))

    @classmethod
    def quadratic(cls, a: Rational, b: Rational) -> "Cut":
        return cls(0, Fraction(a), Fraction(b))

    @property
    def is_finite(self) -> bool:
        return self.inf == 0

    @property
    def is_rational(self) -> bool:
        return self.inf == 0 and self.b == 0

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.a

    def _key_cmp(self, other: "Cut") -> int:
        if self.inf or other.inf:
            return (self.inf > other.inf) - (self.inf < other.inf)
        return _sign_quadratic(self.a - other.a, self.b - other.b)

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key_cmp(other) < 0

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.inf, self.a, self.b) == (other.inf, other.a, other.b)

    def __hash__(self):
        return hash((self.inf, self.a, self.b))

    def __add__(self, other: Rational) -> "Cut":
        if self.inf:
            return self
        return Cut(0, self.a + Fraction(other), self.b)

    def floor_times(self, n: int) -> int:
        """floor(self * n) for a finite cut and integer n >= 1."""
        if not self.is_finite:
            raise ValueError("floor of an infinite cut")
        A, B = self.a * n, self.b * n
        r = math.isqrt(math.floor(2 * B * B))  # floor(|B| sqrt2)
        guess = math.floor(A) + (r if B >= 0 else -r - 1)
        while _sign_quadratic(A - (guess + 1), B) >= 0:
            guess += 1
        while _sign_quadratic(A - guess, B) < 0:
            guess -= 1
        return guess

    def __str__(self):
        if self.inf:
            return "inf" if self.inf > 0 else "-inf"
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt2"

    def __repr__(self):
        return f"Cut({self})"


NEG_INF = Cut(-1)
POS_INF = Cut(1)


def _coerce(other):
    if isinstance(other, Cut):
        return other
    if isinstance(other, (int, Fraction)):
        return Cut(0, Fraction(other))
    return NotImplemented


def parse_cut(text: str) -> Cut:
    """Parse ``-inf``, ``inf``, ``3/4``, ``sqrt2-1`` or ``a+b*sqrt2`` forms."""
    t = text.strip().replace(" ", "")
    if t in ("inf", "+inf"):
        return POS_INF
    if t == "-inf":
        return NEG_INF
    if t.startswith("sqrt2"):
        tail = t[len("sqrt2"):]
        return Cut.quadratic(Fraction(tail) if tail else 0, 1)
    if t.endswith("*sqrt2"):
        body = t[: -len("*sqrt2")]
        # split a+b at the last sign that is not the leading one
        for i in range(len(body) - 1, 0, -1):
            if body[i] in "+-" and body[i - 1].isdigit():
                a, b = body[:i], body[i:].lstrip("+")
                return Cut.quadratic(Fraction(a), Fraction(b))
        return Cut.quadratic(0, Fraction(body))
    return Cut.of(Fraction(t))


def sqrt2_plus(a: Rational) -> Cut:
    """The irrational cut ``sqrt(2) + a``."""
    return Cut.quadratic(a, 1)
