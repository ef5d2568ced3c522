"""Enumeration of Q by height ``|numerator| + denominator``.

Within one height rationals are ordered by numerator, then denominator.
This order fixes every "deterministic witness" in the package.
"""

from __future__ import annotations

import itertools
import math
import threading
from fractions import Fraction
from typing import Iterator, List, Tuple


def height(q: Fraction) -> int:
    q = Fraction(q)
    return abs(q.numerator) + q.denominator


def height_key(q: Fraction) -> Tuple[int, int, int]:
    q = Fraction(q)
    return (abs(q.numerator) + q.denominator, q.numerator, q.denominator)


def rationals_of_height(h: int) -> List[Fraction]:
    out = []
    for b in range(1, h + 1):
        a = h - b
        if math.gcd(a, b) != 1:
            continue
        out.append(Fraction(a, b))
        if a:
            out.append(Fraction(-a, b))
    out.sort(key=height_key)
    return out


def rationals_by_height() -> Iterator[Fraction]:
    """All of Q, each exactly once, in height order."""
    for h in itertools.count(1):
        yield from rationals_of_height(h)


class RationalIndex:
    """Random access to the height enumeration, cached; growth is locked."""

    def __init__(self):
        self._items: List[Fraction] = []
        self._pos: dict = {}
        self._h = 0
        self._lock = threading.Lock()

    def _grow_to(self, done) -> None:
        with self._lock:
            while not done():
                self._h += 1
                for q in rationals_of_height(self._h):
                    self._pos[q] = len(self._items)
                    self._items.append(q)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError("the enumeration has no end to count back from")
        if len(self._items) <= n:
            self._grow_to(lambda: len(self._items) > n)
        return self._items[n]

    def index(self, q) -> int:
        q = Fraction(q)
        h = height(q)
        if self._h < h:
            self._grow_to(lambda: self._h >= h)
        return self._pos[q]


RATIONALS = RationalIndex()
