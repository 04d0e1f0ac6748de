"""Escape rates into Markov holes, by transition matrices and by correlation polynomials."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.sparse import csr_matrix

from .algebra import (
    IntPolynomial,
    LinearRecurrence,
    RationalFunction,
    Z,
    largest_real_root,
    rational_matrix_inverse_sum,
    recurrence_from_rational,
    solve_fraction_free,
)
from .errors import MethodDisagreementError, ReducibleError, ToleranceError, UserInputError
from .shift import (
    DEFAULT_MAX_DIM,
    SubshiftSpec,
    TransitionMatrix,
    essential_states,
    higher_block_matrix,
    higher_block_operator,
    strongly_connected_components,
)
from .spectral import ParryMeasure, PerronData, perron
from .words import Word, WordSet, correlation_matrix, correlation_polynomial, normalize_equal_length

DENSE_LIMIT = 2048
AGREEMENT_TOL = 1e-9


class NoPeriodicPointWarning(UserWarning):
    """No periodic point of period at most n lies in the hole."""


@dataclass(frozen=True)
class HoleSpec:
    """A hole in a subshift: the union of cylinders over ``hole_words``.

    ``hole_words`` are the given words extended to a common length, with
    extensions that are forbidden in the ambient shift dropped.
    """

    ambient: SubshiftSpec
    hole_words: WordSet
    given: WordSet

    @classmethod
    def build(cls, ambient: SubshiftSpec, words: WordSet | list[str]) -> HoleSpec:
        if not isinstance(words, WordSet):
            words = WordSet.from_strings(words, ambient.q)
        if words.q != ambient.q:
            raise UserInputError(f"hole words are over q={words.q}, ambient has q={ambient.q}")
        for w in words:
            if not ambient.is_allowed(w):
                raise UserInputError(f"hole word {w} is forbidden in the ambient subshift")
        n = words.max_length
        if n == 0:
            return cls(ambient, words, words)
        ext = normalize_equal_length(words, n)
        kept = WordSet([w for w in ext if ambient.is_allowed(w)], ambient.q)
        return cls(ambient, kept, words)

    @property
    def q(self) -> int:
        return self.ambient.q

    @property
    def length(self) -> int:
        return self.hole_words.max_length

    @property
    def block_length(self) -> int:
        return max(2, self.ambient.word_length, self.length)

    def with_hole_forbidden(self) -> SubshiftSpec:
        return SubshiftSpec(self.q, self.ambient.forbidden.union(self.hole_words))


@dataclass(frozen=True)
class EscapeResult:
    rho: float
    method: str
    lambda_ambient: float
    lambda_with_hole: float
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.rho)

    def to_dict(self) -> dict[str, Any]:
        def enc(x):
            if isinstance(x, float) and math.isinf(x):
                return "inf" if x > 0 else "-inf"
            return x

        return {
            "rho": enc(self.rho),
            "method": self.method,
            "lambda_ambient": enc(self.lambda_ambient),
            "lambda_with_hole": enc(self.lambda_with_hole),
            "details": {k: enc(v) for k, v in self.details.items()},
        }


def _rho(lam_a: float, lam_b: float) -> float:
    if lam_b <= 0.0:
        return math.inf
    rho = math.log(lam_a) - math.log(lam_b)
    return 0.0 if abs(rho) < 1e-13 else rho


def _presentation(spec: SubshiftSpec, length: int, max_dim: int, dense_limit: int):
    if spec.q ** (length - 1) <= dense_limit:
        return higher_block_matrix(spec, length, max_dim)
    return higher_block_operator(spec, length, max_dim)


def ambient_lambda(spec: SubshiftSpec, length: int, max_dim: int = DEFAULT_MAX_DIM,
                   dense_limit: int = DENSE_LIMIT) -> float:
    """Perron value of the ambient shift; raises if its essential part is reducible."""
    T = _presentation(spec, length, max_dim, dense_limit)
    if spec.is_full:
        return perron(T).lam
    alive = essential_states(T)
    idx = np.nonzero(alive)[0]
    if idx.size == 0:
        raise ReducibleError("the ambient subshift is empty")
    if isinstance(T, TransitionMatrix):
        sub = TransitionMatrix(T.entries[np.ix_(idx, idx)])
        if len(strongly_connected_components(sub)) != 1:
            raise ReducibleError("the ambient subshift is reducible")
        return perron(sub).lam
    src, dst = T.edges()
    keep = alive[src] & alive[dst]
    from scipy.sparse.csgraph import connected_components

    g = csr_matrix((np.ones(int(keep.sum()), dtype=np.int8), (src[keep], dst[keep])), shape=(T.dim, T.dim))
    _, labels = connected_components(g, directed=True, connection="strong")
    if np.unique(labels[idx]).size != 1:
        raise ReducibleError("the ambient subshift is reducible")
    return perron(T).lam


def escape_rate_spectral(h: HoleSpec, max_dim: int = DEFAULT_MAX_DIM, dense_limit: int = DENSE_LIMIT) -> EscapeResult:
    """rho = ln lambda(ambient) - ln lambda(ambient with hole words forbidden)."""
    L = h.block_length
    lam_a = ambient_lambda(h.ambient, L, max_dim, dense_limit)
    if len(h.hole_words) == 0:
        return EscapeResult(0.0, "spectral", lam_a, lam_a, {"block_length": L, "dim": h.q ** (L - 1)})
    B = _presentation(h.with_hole_forbidden(), L, max_dim, dense_limit)
    if isinstance(B, TransitionMatrix) and not B.entries.any():
        # nothing survives even one step
        z = np.zeros(B.dim)
        data = PerronData(0.0, z, z, reducible=True)
    else:
        data = perron(B)
    details = {
        "block_length": L,
        "dim": B.dim,
        "matrix_free": not isinstance(B, TransitionMatrix),
        "reducible_with_hole": data.reducible,
        "iterations": data.iterations,
    }
    return EscapeResult(_rho(lam_a, data.lam), "spectral", lam_a, data.lam, details)


def generating_function(q: int, words: WordSet) -> tuple[RationalFunction, RationalFunction]:
    """(F(z), a(z)) with F(z) = z / ((z - q) + a(z)) for a reduced word set."""
    words.require_reduced()
    zq = RationalFunction(Z - q)
    if len(words) == 0:
        a = RationalFunction(0)
    else:
        a = rational_matrix_inverse_sum(correlation_matrix(words))
    return RationalFunction(Z) / (zq + a), a


def dominant_root(F: RationalFunction) -> float | None:
    return largest_real_root(F.denominator)


def escape_rate_combinatorial(q: int, words: WordSet) -> EscapeResult:
    """Full-shift escape rate from the generating function of word counts."""
    if words.q != q:
        raise UserInputError(f"words are over q={words.q}, expected {q}")
    F, a = generating_function(q, words)
    rec = recurrence_from_rational(F)
    root = dominant_root(F)
    lam_b = root if root is not None and root > 0 else 0.0
    details = {
        "F": F.format(),
        "a": a.format(),
        "recurrence": rec.describe(),
        "initial": list(rec.initial),
    }
    return EscapeResult(_rho(float(q), lam_b), "combinatorial", float(q), lam_b, details)


def combinatorial_entropy(q: int, words: WordSet) -> float:
    """ln of the growth rate of words avoiding ``words`` (reduced), via the generating function."""
    F, _ = generating_function(q, words)
    root = dominant_root(F)
    return math.log(root) if root is not None and root > 0 else -math.inf


def solve_generating_system(q: int, words: WordSet) -> tuple[RationalFunction, ...]:
    """Solve the (k+1)x(k+1) linear system for F, F_1, ..., F_k by fraction-free elimination."""
    words.require_reduced()
    ws = words.words
    k = len(ws)
    zq = Z - q
    rows: list[list[IntPolynomial]] = [[zq] + [Z] * k]
    for wi in ws:
        rows.append([IntPolynomial.constant(1)] + [-(Z * correlation_polynomial(wj, wi)) for wj in ws])
    rhs = [Z] + [IntPolynomial()] * k
    y, det = solve_fraction_free(rows, rhs)
    sol = tuple(RationalFunction(yi, det) for yi in y)
    closed, _ = generating_function(q, words)
    if sol[0] != closed:
        raise ToleranceError(f"linear-system F(z) = {sol[0]} differs from closed form {closed}")
    return sol


def _periodic_allowed(ambient: SubshiftSpec, period: tuple[int, ...]) -> bool:
    reps = (ambient.word_length + len(period)) // len(period) + 2
    return ambient.is_allowed(period * reps)


def minimal_period(h: HoleSpec, strict: bool = False) -> int:
    """Least l <= n such that a hole word is l-periodic and its periodic extension is allowed.

    Falls back to n (with a NoPeriodicPointWarning, or an error if ``strict``)
    when no such periodic point exists.
    """
    if len(h.hole_words) == 0:
        raise UserInputError("minimal period of an empty hole")
    n = h.length
    for ell in range(1, n + 1):
        for u in h.hole_words:
            s = u.symbols
            if all(s[i + ell] == s[i] for i in range(n - ell)) and _periodic_allowed(h.ambient, s[:ell]):
                return ell
    msg = f"no periodic point of period <= {n} lies in the hole; reporting {n}"
    if strict:
        raise UserInputError(msg)
    warnings.warn(msg, NoPeriodicPointWarning, stacklevel=2)
    return n


def poincare_recurrence_time(h: HoleSpec, max_dim: int = DEFAULT_MAX_DIM) -> int:
    """Least l >= 1 with a point of the hole returning to the hole after l steps.

    Works on blocks of length b >= n: a point has hole word u at time 0 and v
    at time l iff some essential block path of l steps starts at a block with
    prefix u and ends at a block with prefix v.
    """
    if len(h.hole_words) == 0:
        raise UserInputError("recurrence time of an empty hole")
    n = h.length
    b = max(n, h.ambient.block_length() - 1)
    T = higher_block_matrix(h.ambient, b + 1, max_dim)
    alive = essential_states(T)
    q = h.q
    starts = np.zeros(T.dim, dtype=bool)
    for w in h.hole_words:
        lo = w.code() * q ** (b - n)
        starts[lo:lo + q ** (b - n)] = True
    starts &= alive
    if not starts.any():
        raise UserInputError("no point of the ambient subshift lies in the hole")
    g = csr_matrix(T.entries.astype(np.int8) * alive[None, :] * alive[:, None])
    gt = g.T.tocsr()
    frontier = starts.astype(np.int8)
    for ell in range(1, T.dim + 2):
        frontier = (gt @ frontier > 0).astype(np.int8)
        if (frontier.astype(bool) & starts).any():
            return ell
        if not frontier.any():
            break
    raise UserInputError("points in the hole never return to it")


def hole_measure(h: HoleSpec, measure: ParryMeasure | None = None) -> float:
    pm = measure if measure is not None else ParryMeasure(h.ambient)
    return float(sum(pm.cylinder(w) for w in h.hole_words))


@dataclass(frozen=True)
class MethodComparison:
    spectral: EscapeResult
    combinatorial: EscapeResult
    difference: float


def compare_methods(q: int, words: WordSet, tol: float = AGREEMENT_TOL,
                    max_dim: int = DEFAULT_MAX_DIM) -> MethodComparison:
    spec = escape_rate_spectral(HoleSpec.build(SubshiftSpec.full(q), words), max_dim)
    comb = escape_rate_combinatorial(q, words)
    if math.isinf(spec.rho) and math.isinf(comb.rho):
        diff = 0.0
    else:
        diff = abs(spec.rho - comb.rho)
    if not diff <= tol:
        raise MethodDisagreementError(spec.rho, comb.rho, tol)
    return MethodComparison(spec, comb, diff)
