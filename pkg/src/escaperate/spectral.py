"""Perron eigendata, topological entropy and Parry measures."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .algebra import RootBracket, characteristic_polynomial, isolate_dominant_positive_root
from .errors import NoSignChangeError, ReducibleError, UserInputError
from .shift import (
    DEFAULT_MAX_DIM,
    HigherBlockOperator,
    SubshiftSpec,
    TransitionMatrix,
    essential_states,
    higher_block_matrix,
    strongly_connected_components,
)
from .words import Word

TOL = 1e-14
MAX_ITER = 100_000
EXACT_REFINE_DIM = 12
# eigenvectors of reducible matrices are only indicative and may converge
# polynomially (Jordan blocks), so their iteration is capped
REDUCIBLE_VEC_ITER = 2000


class ReducibleMatrixWarning(UserWarning):
    """Entropy of a reducible matrix was taken as its spectral radius."""


@dataclass(frozen=True)
class PerronData:
    lam: float
    u: np.ndarray
    v: np.ndarray
    reducible: bool = False
    iterations: int = 0
    refined_exactly: bool = False

    def residuals(self, T) -> tuple[float, float]:
        """Max-norm residuals of the right and left eigen-equations."""
        r = np.max(np.abs(T.matvec(self.v) - self.lam * self.v), initial=0.0)
        l = np.max(np.abs(T.rmatvec(self.u) - self.lam * self.u), initial=0.0)
        return float(r), float(l)


def _power(apply, dim: int, shift: float, x0: np.ndarray | None = None,
           tol: float = TOL, max_iter: int = MAX_ITER) -> tuple[float, np.ndarray, bool, int]:
    """Power iteration on ``apply + shift*I`` from a positive start; returns (lam, x, converged, iters).

    Convergence needs both the eigenvalue estimate and the vector to settle:
    successive sums can coincide exactly long before the vector has converged.
    """
    x = np.ones(dim) if x0 is None else np.array(x0, dtype=np.float64)
    x /= x.sum()
    prev = math.nan
    lam = 0.0
    vec_tol = max(tol, 64 * np.finfo(np.float64).eps)
    for it in range(1, max_iter + 1):
        y = apply(x)
        if shift:
            y = y + shift * x
        s = y.sum()
        if s <= 0.0:
            return 0.0, x, True, it
        lam = float(s)
        y /= s
        moved = float(np.max(np.abs(y - x))) / float(np.max(y))
        x = y
        if abs(lam - prev) <= tol * lam and moved <= vec_tol:
            return lam - shift, x, True, it
        prev = lam
    return lam - shift, x, False, max_iter


def _period(sub: np.ndarray) -> int:
    """Period of an irreducible 0/1 matrix (gcd of cycle lengths) from BFS levels."""
    n = sub.shape[0]
    level = np.full(n, -1)
    level[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for j in np.nonzero(sub[i])[0]:
                if level[j] < 0:
                    level[j] = level[i] + 1
                    nxt.append(j)
        frontier = nxt
    src, dst = np.nonzero(sub)
    diffs = (level[src] + 1 - level[dst]).tolist()
    return reduce(math.gcd, diffs, 0) or 1


def _normalise(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    v = v / np.linalg.norm(v)
    uv = float(u @ v)
    if uv <= 0:
        return u, v
    return u / uv, v


def _refine_exact(T: TransitionMatrix, lam: float) -> float | None:
    p = characteristic_polynomial(T.tolist())
    delta = 1e-9 * max(1.0, lam)
    try:
        bracket = RootBracket(Fraction(lam - delta), Fraction(lam + delta), p)
    except NoSignChangeError:
        return None
    return isolate_dominant_positive_root(p, bracket)


def _perron_irreducible(sub: np.ndarray) -> tuple[float, np.ndarray, np.ndarray, int]:
    shift = 1.0 if _period(sub) > 1 else 0.0
    lam, v, ok_v, it_v = _power(lambda x: sub @ x, sub.shape[0], shift)
    _, u, ok_u, it_u = _power(lambda x: x @ sub, sub.shape[0], shift)
    if not (ok_u and ok_v):
        warnings.warn("power iteration hit the iteration limit", RuntimeWarning, stacklevel=3)
    return lam, u, v, max(it_u, it_v)


def _perron_dense(T: TransitionMatrix, refine: bool) -> PerronData:
    a = T.entries
    if not a.any():
        raise UserInputError("transition matrix has no nonzero entry")
    af = a.astype(np.float64)
    comps = strongly_connected_components(T)
    nontrivial = [c for c in comps if len(c) > 1 or a[c[0], c[0]]]
    if not nontrivial:
        z = np.zeros(T.dim)
        return PerronData(0.0, z, z.copy(), reducible=True)
    if len(comps) == 1:
        lam, u, v, its = _perron_irreducible(af)
        reducible = False
    else:
        best = None
        for c in nontrivial:
            sub = af[np.ix_(c, c)]
            lam_c, _, _, _ = _perron_irreducible(sub)
            if best is None or lam_c > best:
                best = lam_c
        lam = best
        # eigenvectors of the whole matrix: shifted iteration converges to the dominant block
        _, v, _, it_v = _power(lambda x: af @ x, T.dim, 1.0, max_iter=REDUCIBLE_VEC_ITER)
        _, u, _, it_u = _power(lambda x: x @ af, T.dim, 1.0, max_iter=REDUCIBLE_VEC_ITER)
        its = max(it_u, it_v)
        reducible = True
    u, v = _normalise(u, v)
    rq = float(u @ (af @ v)) / float(u @ v) if float(u @ v) > 0 else lam
    if not reducible and abs(rq - lam) < 1e-8 * lam:
        lam = rq
    exact = False
    if refine and T.dim <= EXACT_REFINE_DIM and lam > 0:
        r = _refine_exact(T, lam)
        if r is not None:
            lam, exact = r, True
    return PerronData(lam, u, v, reducible=reducible, iterations=its, refined_exactly=exact)


def _perron_operator_reducible(T: HigherBlockOperator) -> PerronData:
    """Spectral radius of a matrix-free operator from its strongly connected components."""
    best = 0.0
    for comp in strongly_connected_components(T):
        idx = np.asarray(comp)
        if idx.size == 1:
            e = np.zeros(T.dim)
            e[idx] = 1.0
            best = max(best, float(T.matvec(e)[idx[0]]))
            continue
        full = np.zeros(T.dim)

        def apply(x, idx=idx, full=full):
            full[idx] = x
            return T.matvec(full)[idx]

        lam, _, ok, _ = _power(apply, idx.size, 1.0)
        if not ok:
            warnings.warn("power iteration hit the iteration limit", RuntimeWarning, stacklevel=4)
        best = max(best, lam)
    z = np.zeros(T.dim)
    return PerronData(best, z, z.copy(), reducible=True)


def _perron_operator(T: HigherBlockOperator) -> PerronData:
    lam, v, ok, it_v = _power(T.matvec, T.dim, 0.0, max_iter=2000)
    if not ok:
        # periodic or reducible; retry shifted, then split into components
        lam, v, ok, more = _power(T.matvec, T.dim, 1.0, x0=v, max_iter=REDUCIBLE_VEC_ITER)
        it_v += more
        if not ok:
            return _perron_operator_reducible(T)
    if lam == 0.0:
        z = np.zeros(T.dim)
        return PerronData(0.0, z, z.copy(), reducible=True, iterations=it_v)
    _, u, ok_u, it_u = _power(T.rmatvec, T.dim, 0.0, max_iter=2000)
    if not ok_u:
        _, u, ok_u, more = _power(T.rmatvec, T.dim, 1.0, x0=u)
        it_u += more
    u, v = _normalise(u, v)
    denom = float(u @ v)
    if denom > 0:
        lam = float(u @ T.matvec(v)) / denom
    return PerronData(lam, u, v, reducible=False, iterations=max(it_u, it_v))


def perron(T, refine: bool = True) -> PerronData:
    """Dominant eigenvalue with left/right eigenvectors normalised so that u.v = 1.

    Dense matrices are split into strongly connected components; a reducible
    matrix gets its spectral radius and ``reducible=True``.  Matrix-free
    operators are iterated directly from the all-ones vector.
    """
    if isinstance(T, HigherBlockOperator):
        return _perron_operator(T)
    return _perron_dense(T, refine)


def spectral_radius(T) -> float:
    return perron(T).lam


def topological_entropy(T) -> float:
    data = perron(T)
    if data.reducible:
        warnings.warn("entropy of a reducible matrix taken as ln(spectral radius)", ReducibleMatrixWarning, stacklevel=2)
    return math.log(data.lam) if data.lam > 0 else -math.inf


class ParryMeasure:
    """Parry measure of an irreducible subshift, evaluated on cylinders.

    Works on the higher-block presentation with blocks of length ``L-1``;
    states that lie on no bi-infinite path are dropped before the
    irreducibility check.
    """

    def __init__(self, spec: SubshiftSpec, length: int | None = None, max_dim: int = DEFAULT_MAX_DIM):
        self.spec = spec
        self.length = spec.block_length() if length is None else length
        T = higher_block_matrix(spec, self.length, max_dim)
        alive = essential_states(T)
        idx = np.nonzero(alive)[0]
        if idx.size == 0:
            raise ReducibleError("the subshift is empty")
        sub = TransitionMatrix(T.entries[np.ix_(idx, idx)], [T.labels[i] for i in idx])
        comps = strongly_connected_components(sub)
        if len(comps) != 1:
            raise ReducibleError(
                f"Parry measure needs an irreducible subshift; found {len(comps)} strongly connected components"
            )
        data = perron(sub)
        self.matrix = T
        self.states = idx
        self.lam = data.lam
        self.u = np.zeros(T.dim)
        self.v = np.zeros(T.dim)
        self.u[idx] = data.u
        self.v[idx] = data.v

    @property
    def block(self) -> int:
        return self.length - 1

    def _code(self, symbols) -> int:
        c = 0
        for s in symbols:
            c = c * self.spec.q + s
        return c

    def cylinder(self, word: Word | tuple[int, ...]) -> float:
        sym = word.symbols if isinstance(word, Word) else tuple(word)
        q, b = self.spec.q, self.block
        if any(not 0 <= s < q for s in sym):
            raise UserInputError(f"word {sym} has a symbol outside 0..{q - 1}")
        if not self.spec.is_allowed(sym):
            return 0.0
        m = len(sym)
        if m < b:
            lo = self._code(sym) * q ** (b - m)
            hi = lo + q ** (b - m)
            return float(np.sum(self.u[lo:hi] * self.v[lo:hi]))
        blocks = [self._code(sym[i:i + b]) for i in range(m - b + 1)]
        a = self.matrix.entries
        if any(not a[s, t] for s, t in zip(blocks, blocks[1:])):
            return 0.0
        return float(self.u[blocks[0]] * self.v[blocks[-1]] / self.lam ** (len(blocks) - 1))

    def transition_probabilities(self) -> np.ndarray:
        """Row-stochastic matrix P_ij = a_ij v_j / (lam v_i) on the essential states."""
        idx = self.states
        a = self.matrix.entries[np.ix_(idx, idx)].astype(np.float64)
        v = self.v[idx]
        return a * v[None, :] / (self.lam * v[:, None])

    def stationary(self) -> np.ndarray:
        idx = self.states
        return self.u[idx] * self.v[idx]


def parry_cylinder_measure(spec: SubshiftSpec, w: Word, length: int | None = None) -> float:
    return ParryMeasure(spec, length).cylinder(w)
