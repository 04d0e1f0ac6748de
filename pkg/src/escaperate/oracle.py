"""Independent checks: brute-force word counts and Monte Carlo survival curves.

Nothing here uses transfer matrices or generating functions for the answer
itself; the simulator only needs the Parry chain to draw typical points.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import EnumerationBudgetError, InsufficientDataError, UserInputError
from .escape import HoleSpec
from .shift import SubshiftSpec
from .spectral import ParryMeasure
from .words import WordSet

COUNT_BUDGET = 10**8
CHUNK = 65_536


def count_avoiding_words(q: int, F: WordSet, k: int, budget: int = COUNT_BUDGET) -> int:
    """Number of length-k words over q symbols with no factor in F, by enumeration.

    Words are grown one symbol at a time and pruned as soon as a forbidden word
    ends at the last position; the final level is only counted.
    """
    if k < 0:
        raise UserInputError("word length must be non-negative")
    if q ** k > budget:
        raise EnumerationBudgetError(f"q^k = {q}^{k} exceeds the enumeration budget {budget}")
    if k == 0:
        return 1
    by_len: dict[int, np.ndarray] = {}
    for w in F:
        by_len.setdefault(len(w), []).append(w.code())
    by_len = {n: np.array(c, dtype=np.int64) for n, c in by_len.items()}

    def prune(codes: np.ndarray, t: int) -> np.ndarray:
        keep = np.ones(codes.size, dtype=bool)
        for n, fc in by_len.items():
            if n <= t:
                keep &= ~np.isin(codes % q ** n, fc)
        return codes[keep]

    alive = prune(np.arange(q, dtype=np.int64), 1)
    for t in range(2, k + 1):
        step = (alive[:, None] * q + np.arange(q, dtype=np.int64)).ravel()
        alive = prune(step, t)
    return int(alive.size)


@dataclass(frozen=True)
class SurvivalCurve:
    survivors: np.ndarray
    samples: int
    seed: int

    @property
    def steps(self) -> np.ndarray:
        return np.arange(self.survivors.size)

    @property
    def fraction(self) -> np.ndarray:
        return self.survivors / self.samples

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("step,survivors,fraction\n")
        for t, s in enumerate(self.survivors.tolist()):
            out.write(f"{t},{s},{s / self.samples!r}\n")
        return out.getvalue()


def _parry_chain(ambient: SubshiftSpec, length: int):
    pm = ParryMeasure(ambient, length)
    q, dim = ambient.q, pm.matrix.dim
    r = dim // q
    nxt = (np.arange(dim)[:, None] % r) * q + np.arange(q)[None, :]
    a = pm.matrix.entries[np.arange(dim)[:, None], nxt].astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        probs = a * pm.v[nxt] / (pm.lam * pm.v[:, None])
    probs = np.nan_to_num(probs)
    cum = np.cumsum(probs, axis=1)
    cum[:, -1] = np.inf
    pi = pm.u * pm.v
    pi_cum = np.cumsum(pi / pi.sum())
    pi_cum[-1] = np.inf
    return cum, pi_cum


def _simulate_chunk(args) -> np.ndarray:
    index, size, seed, steps, q, b, n, cum, pi_cum, hole_codes = args
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))
    total = steps + n - 1
    sym = np.empty((size, max(total, b)), dtype=np.int64)
    state = np.searchsorted(pi_cum, rng.random(size), side="right")
    for i in range(b):
        sym[:, i] = (state // q ** (b - 1 - i)) % q
    r = q ** (b - 1)
    for t in range(b, total):
        u = rng.random(size)
        a = (cum[state] <= u[:, None]).sum(axis=1)
        sym[:, t] = a
        state = (state % r) * q + a
    first = np.full(size, steps, dtype=np.int64)
    if hole_codes.size:
        codes = np.zeros((size, steps), dtype=np.int64)
        for i in range(n):
            codes = codes * q + sym[:, i:i + steps]
        hit = np.isin(codes, hole_codes)
        any_hit = hit.any(axis=1)
        first[any_hit] = hit[any_hit].argmax(axis=1)
    # survives to step t iff the first hit is at start position >= t
    counts = np.bincount(first, minlength=steps + 1)
    return counts[::-1].cumsum()[::-1]


def simulate_survival(h: HoleSpec, samples: int, steps: int, seed: int, threads: int = 1,
                      chunk: int = CHUNK) -> SurvivalCurve:
    """Survivor counts s_0..s_steps for Parry-typical points of the ambient shift.

    A sample survives to step t iff no hole word starts at positions 0..t-1.
    Chunk i draws from Philox seeded by (seed, i), so results do not depend
    on ``threads``.
    """
    if samples < 1 or steps < 1:
        raise UserInputError("samples and steps must be positive")
    L = h.block_length
    cum, pi_cum = _parry_chain(h.ambient, L)
    n = max(h.length, 1)
    hole_codes = np.array(sorted(w.code() for w in h.hole_words), dtype=np.int64)
    sizes = [min(chunk, samples - s) for s in range(0, samples, chunk)]
    jobs = [(i, sz, seed, steps, h.q, L - 1, n, cum, pi_cum, hole_codes) for i, sz in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_simulate_chunk, jobs))
    else:
        parts = [_simulate_chunk(j) for j in jobs]
    return SurvivalCurve(np.sum(parts, axis=0), samples, seed)


@dataclass(frozen=True)
class RateFit:
    rho: float
    stderr: float
    points: int
    intercept: float = 0.0


def fit_escape_rate(curve: SurvivalCurve, min_points: int = 10) -> RateFit:
    """Least-squares slope of -ln(s_t) over the second half of the positive part of the curve."""
    frac = curve.fraction
    pos = np.nonzero(frac > 0)[0]
    if pos.size == 0:
        raise InsufficientDataError("no sample survived a single step")
    last = int(pos[-1])
    t = np.arange(last // 2, last + 1)
    t = t[frac[t] > 0]
    if t.size < min_points:
        raise InsufficientDataError(f"only {t.size} positive tail points, need {min_points}")
    y = -np.log(frac[t])
    fit = stats.linregress(t, y)
    # linregress derives stderr from 1 - r^2, which cancels badly for near-perfect fits
    resid = y - (fit.intercept + fit.slope * t)
    sxx = float(np.sum((t - t.mean()) ** 2))
    se = math.sqrt(float(resid @ resid) / (t.size - 2) / sxx)
    return RateFit(float(fit.slope), se, int(t.size), float(fit.intercept))
