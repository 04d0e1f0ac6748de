"""Word sets with trivial correlations ("property (P)") and the root theory of p_{m,n}.

A set of length-m words has property (P) when every autocorrelation is
z^(m-1) and every cross-correlation vanishes, so the correlation matrix is
z^(m-1) times the identity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import IntPolynomial, RootBracket, isolate_dominant_positive_root
from .errors import OutsideRegimeError, UserInputError
from .words import Word, WordSet


@dataclass(frozen=True)
class ConstructionParams:
    q: int
    m: int
    variant: int = 1
    ell: int = 1
    r: int = 1
    reserved: tuple[int, ...] | None = None

    def __post_init__(self):
        q, m, ell, r = self.q, self.m, self.ell, self.r
        if self.variant not in (1, 2, 3):
            raise UserInputError(f"unknown construction variant {self.variant}")
        if q < 2 or m < 1:
            raise UserInputError("need q >= 2 and m >= 1")
        if self.variant == 1:
            if ell != 1 or r != 1:
                raise UserInputError("construction 1 uses one reserved symbol and suffix length 1")
        else:
            if not 1 <= ell < q - 1:
                raise UserInputError(f"number of reserved symbols must satisfy 1 <= ell < q-1, got {ell}")
            if self.variant == 2 and r != 1:
                raise UserInputError("construction 2 has suffix length 1")
            if self.variant == 3 and not 1 <= r < max(m, 2):
                raise UserInputError(f"suffix length must satisfy 1 <= r < m, got r={r}, m={m}")
        res = tuple(range(q - ell, q)) if self.reserved is None else tuple(self.reserved)
        if len(res) != ell or len(set(res)) != ell or any(not 0 <= s < q for s in res):
            raise UserInputError(f"reserved symbols must be {ell} distinct symbols in 0..{q - 1}")
        object.__setattr__(self, "reserved", res)

    @property
    def cardinality(self) -> int:
        return (self.q - self.ell) ** (self.m - self.r) * self.ell ** self.r


def construct_property_P(p: ConstructionParams) -> WordSet:
    """Words w.u with w free of reserved symbols and u a length-r string of reserved ones.

    Output is ordered lexicographically in (w, u).
    """
    free = [s for s in range(p.q) if s not in p.reserved]
    reserved = sorted(p.reserved)
    heads = itertools.product(free, repeat=p.m - p.r)
    tails = list(itertools.product(reserved, repeat=p.r))
    words = [Word(h + t, p.q) for h in heads for t in tails]
    return WordSet(words, p.q)


def verify_property_P(words: WordSet) -> bool:
    """True iff all correlations are trivial.

    Equivalent fast test: the words are distinct, of one length, and no proper
    suffix of any word equals a proper prefix of any word.
    """
    if len(words) == 0:
        return True
    if not words.is_equal_length():
        return False
    m = words.max_length
    prefixes = set()
    for w in words:
        s = w.symbols
        prefixes.update(s[:k] for k in range(1, m))
    for w in words:
        s = w.symbols
        if any(s[m - k:] in prefixes for k in range(1, m)):
            return False
    return True


def max_m_bound(q: int, n: int, ell: int, r: int = 1) -> int:
    """Largest m >= n with (q-ell)^(m-r) * ell^r >= q^(m-n), in exact integers."""
    if not 1 <= ell < q:
        raise UserInputError(f"need 1 <= ell < q, got ell={ell}, q={q}")
    if n < 1 or r < 1:
        raise UserInputError("need n >= 1 and r >= 1")

    def ok(m: int) -> bool:
        return (q - ell) ** (m - r) * ell ** r >= q ** (m - n)

    m = max(n, r)
    if not ok(m):
        raise UserInputError(f"construction is too small already at m={m}")
    while ok(m + 1):
        m += 1
    return m


def max_m_closed_form(q: int, n: int, ell: int, r: int = 1) -> float:
    """The logarithmic form of the same bound (before taking the floor)."""
    return n + ((n - r) * math.log(q - ell) + r * math.log(ell)) / (math.log(q) - math.log(q - ell))


def p_mn(q: int, m: int, n: int) -> IntPolynomial:
    """r^m - q r^(m-1) + q^(m-n)."""
    if m < n:
        raise UserInputError(f"need m >= n, got m={m}, n={n}")
    return IntPolynomial.monomial(m) - IntPolynomial.monomial(m - 1, q) + q ** (m - n)


@dataclass(frozen=True)
class RegimeReport:
    m: int
    n: int
    sign_checks: bool
    stated_bound: float
    proof_bound: float

    @property
    def within_stated(self) -> bool:
        return self.m < self.stated_bound

    @property
    def within_proof(self) -> bool:
        return self.m < self.proof_bound


def regime(q: int, m: int, n: int) -> RegimeReport:
    p = p_mn(q, m, n)
    checks = p.sign_at(0) > 0 and p.sign_at(q - 1) < 0 and p.sign_at(q) > 0
    c = (n - 1) * math.log(q - 1) / (math.log(q) - math.log(q - 1))
    return RegimeReport(m, n, checks, (n - 1) + c, n + c)


def mu_mn_root(q: int, m: int, n: int, tol: float = 1e-13) -> float:
    """The root of p_{m,n} in (q-1, q); requires p(0) > 0, p(q-1) < 0 < p(q)."""
    if not regime(q, m, n).sign_checks:
        raise OutsideRegimeError(
            f"outside theorem regime: sign checks p(0)>0, p(q-1)<0, p(q)>0 fail for q={q}, m={m}, n={n}"
        )
    p = p_mn(q, m, n)
    return isolate_dominant_positive_root(p, RootBracket(Fraction(q - 1), Fraction(q), p), tol)


def rho_mn(q: int, m: int, n: int) -> float:
    return -math.log(mu_mn_root(q, m, n) / q)


@dataclass(frozen=True)
class MonotonicityReport:
    rows: tuple[tuple[int, float | None, float | None], ...]
    monotone: bool
    complete: bool


def rho_monotonicity_check(q: int, n: int, m_range) -> MonotonicityReport:
    """Tabulate (m, mu_{m,n}, rho_{m,n}); monotone means rho strictly increases along in-regime m."""
    rows = []
    complete = True
    for m in m_range:
        try:
            mu = mu_mn_root(q, m, n)
            rows.append((m, mu, -math.log(mu / q)))
        except OutsideRegimeError:
            rows.append((m, None, None))
            complete = False
    rhos = [r[2] for r in rows if r[2] is not None]
    monotone = all(a < b for a, b in zip(rhos, rhos[1:]))
    return MonotonicityReport(tuple(rows), monotone, complete)


def is_maximal_construction1(q: int, m: int) -> bool:
    """No word outside construction 1 with trivial autocorrelation can join it keeping (P)."""
    S = construct_property_P(ConstructionParams(q, m))
    members = {w.symbols for w in S}
    for sym in itertools.product(range(q), repeat=m):
        if sym in members:
            continue
        if verify_property_P(WordSet(list(S) + [Word(sym, q)], q)):
            return False
    return True
