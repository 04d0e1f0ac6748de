"""The product map T(x, y) = (Mx, Ny) mod 1 on the 2-torus and its rectangles.

A symbol alpha in 0..MN-1 splits as alpha = N*a + b with a the x-digit
(base M) and b the y-digit (base N).  All interval arithmetic is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import UserInputError
from .words import Word, WordSet


@dataclass(frozen=True)
class TorusMapSpec:
    M: int
    N: int

    def __post_init__(self):
        if self.M < 2 or self.N < 2:
            raise UserInputError("expansion factors must be at least 2")

    @property
    def q(self) -> int:
        return self.M * self.N


@dataclass(frozen=True)
class Rectangle:
    i: int
    j: int
    m: int
    n: int

    def validate(self, spec: TorusMapSpec) -> None:
        if self.m < 0 or self.n < 0:
            raise UserInputError("resolutions must be non-negative")
        if not 0 <= self.i < spec.M ** self.m:
            raise UserInputError(f"i={self.i} outside 0..{spec.M ** self.m - 1}")
        if not 0 <= self.j < spec.N ** self.n:
            raise UserInputError(f"j={self.j} outside 0..{spec.N ** self.n - 1}")

    def measure(self, spec: TorusMapSpec) -> Fraction:
        return Fraction(1, spec.M ** self.m * spec.N ** self.n)

    def bounds(self, spec: TorusMapSpec) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        sx, sy = Fraction(1, spec.M ** self.m), Fraction(1, spec.N ** self.n)
        return (self.i * sx, (self.i + 1) * sx), (self.j * sy, (self.j + 1) * sy)

    def label(self) -> str:
        return f"R_{{{self.i},{self.j},{self.m},{self.n}}}"


def _digits(value: int, base: int, count: int) -> tuple[int, ...]:
    out = []
    for _ in range(count):
        value, d = divmod(value, base)
        out.append(d)
    return tuple(reversed(out))


def rectangle_to_words(spec: TorusMapSpec, R: Rectangle) -> WordSet:
    """Cylinder words whose union is R; the coarser side's missing digits run over all values."""
    R.validate(spec)
    L = max(R.m, R.n)
    if L == 0:
        raise UserInputError("the whole torus is not a proper hole")
    a_fixed = _digits(R.i, spec.M, R.m)
    b_fixed = _digits(R.j, spec.N, R.n)
    words = []
    for a_free in itertools.product(range(spec.M), repeat=L - R.m):
        for b_free in itertools.product(range(spec.N), repeat=L - R.n):
            a = a_fixed + a_free
            b = b_fixed + b_free
            words.append(Word(tuple(spec.N * x + y for x, y in zip(a, b)), spec.q))
    return WordSet(words, spec.q)


def encode_point(spec: TorusMapSpec, prefix: Sequence[int] | Word) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """Half-open x- and y-intervals of points whose symbolic itinerary starts with ``prefix``."""
    sym = prefix.symbols if isinstance(prefix, Word) else tuple(prefix)
    x = Fraction(0)
    y = Fraction(0)
    for k, alpha in enumerate(sym, start=1):
        if not 0 <= alpha < spec.q:
            raise UserInputError(f"symbol {alpha} outside 0..{spec.q - 1}")
        a, b = divmod(alpha, spec.N)
        x += Fraction(a, spec.M ** k)
        y += Fraction(b, spec.N ** k)
    k = len(sym)
    return (x, x + Fraction(1, spec.M ** k)), (y, y + Fraction(1, spec.N ** k))


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def common_power(M: int, N: int) -> tuple[int, int] | None:
    """(alpha, beta) coprime with M^alpha = N^beta, or None."""
    fm, fn = _factorize(M), _factorize(N)
    if set(fm) != set(fn):
        return None
    ratios = {Fraction(fn[p], fm[p]) for p in fm}
    if len(ratios) != 1:
        return None
    ratio = ratios.pop()
    return ratio.numerator, ratio.denominator


@dataclass(frozen=True)
class EqualMeasureDecision:
    equal: bool
    powers: tuple[int, int] | None


def equal_measure_classes(spec: TorusMapSpec, first: tuple[int, int], second: tuple[int, int]) -> EqualMeasureDecision:
    (m, n), (m2, n2) = first, second
    if min(m, n, m2, n2) < 0:
        raise UserInputError("resolutions must be non-negative")
    equal = spec.M ** m2 * spec.N ** n2 == spec.M ** m * spec.N ** n
    return EqualMeasureDecision(equal, common_power(spec.M, spec.N))


def intervals_union_is_rectangle(spec: TorusMapSpec, R: Rectangle) -> bool:
    """Exact check that the cylinders of R tile R (used in tests and --check)."""
    (x0, x1), (y0, y1) = R.bounds(spec)
    words = rectangle_to_words(spec, R)
    area = Fraction(0)
    for w in words:
        (a0, a1), (b0, b1) = encode_point(spec, w)
        if a0 < x0 or a1 > x1 or b0 < y0 or b1 > y1:
            return False
        area += (a1 - a0) * (b1 - b0)
    return area == (x1 - x0) * (y1 - y0)
