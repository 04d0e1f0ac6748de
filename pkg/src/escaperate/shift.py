"""Subshifts of finite type and their transition matrices.

A subshift is given by an alphabet size ``q`` and a finite set of forbidden
words.  Words of different lengths are allowed; when a presentation with block
length ``L`` is needed, the set is widened to all ``L``-words that contain a
forbidden word as a factor.  This describes the same shift space and, for words
of length at least ``L``, the same counts.

Higher-block states are the ``(L-1)``-words, coded in base ``q`` with the first
symbol most significant, so state ``s`` followed by symbol ``a`` lands in state
``(s mod q^(L-2)) * q + a`` and the glued ``L``-word has code ``s * q + a``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DimensionCapError, UserInputError
from .words import Word, WordSet

DEFAULT_MAX_DIM = 20000


@dataclass(frozen=True)
class SubshiftSpec:
    q: int
    forbidden: WordSet = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.q < 1:
            raise UserInputError("alphabet size must be positive")
        if self.forbidden is None:
            object.__setattr__(self, "forbidden", WordSet.empty(self.q))
        elif self.forbidden.q != self.q:
            raise UserInputError(f"forbidden words are over q={self.forbidden.q}, expected {self.q}")

    @classmethod
    def full(cls, q: int) -> SubshiftSpec:
        return cls(q, WordSet.empty(q))

    @classmethod
    def from_strings(cls, q: int, words: Iterable[str]) -> SubshiftSpec:
        return cls(q, WordSet.from_strings(words, q))

    @classmethod
    def from_matrix(cls, matrix: TransitionMatrix) -> SubshiftSpec:
        """One-step shift whose forbidden words are the zero entries ``ab`` of the matrix."""
        a = matrix.entries
        words = [(int(i), int(j)) for i, j in zip(*np.nonzero(a == 0))]
        return cls(matrix.dim, WordSet(words, matrix.dim))

    @property
    def word_length(self) -> int:
        """Length of the longest forbidden word (0 for the full shift)."""
        return self.forbidden.max_length

    @property
    def is_full(self) -> bool:
        return len(self.forbidden) == 0

    def block_length(self, at_least: int = 2) -> int:
        return max(at_least, self.word_length, 2)

    def with_words(self, extra: Iterable[Word]) -> SubshiftSpec:
        return SubshiftSpec(self.q, self.forbidden.union(extra))

    def is_allowed(self, word: Word | Sequence[int]) -> bool:
        """True when no forbidden word occurs as a factor."""
        sym = word.symbols if isinstance(word, Word) else tuple(word)
        return not any(f.occurs_in(sym) for f in self.forbidden)

    def forbidden_codes(self, length: int) -> np.ndarray:
        """Sorted codes of all ``length``-words containing a forbidden factor."""
        if length < self.word_length:
            raise UserInputError(f"block length {length} is shorter than a forbidden word")
        if self.is_full:
            return np.zeros(0, dtype=np.int64)
        q = self.q
        by_len: dict[int, list[int]] = {}
        for w in self.forbidden:
            by_len.setdefault(len(w), []).append(w.code())
        if set(by_len) == {length}:
            return np.unique(np.asarray(by_len[length], dtype=np.int64))
        codes = np.arange(q ** length, dtype=np.int64)
        hit = np.zeros(codes.shape, dtype=bool)
        for ell, wcodes in by_len.items():
            table = np.asarray(sorted(wcodes), dtype=np.int64)
            for pos in range(length - ell + 1):
                window = (codes // q ** (length - ell - pos)) % q ** ell
                hit |= np.isin(window, table)
        return codes[hit]

    def normalized(self, length: int | None = None) -> WordSet:
        """The forbidden set widened to a common length (default: longest word)."""
        n = self.word_length if length is None else length
        if n == 0:
            return WordSet.empty(self.q)
        codes = self.forbidden_codes(n)
        return WordSet((_decode(int(c), n, self.q) for c in codes), self.q)


def _decode(code: int, length: int, q: int) -> tuple[int, ...]:
    out = [0] * length
    for i in range(length - 1, -1, -1):
        code, out[i] = divmod(code, q)
    return tuple(out)


def block_labels(q: int, length: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product(range(q), repeat=length))


class TransitionMatrix:
    """Dense square 0/1 matrix with row/column labels."""

    __slots__ = ("_entries", "labels", "_as_float")

    def __init__(self, entries, labels: Sequence[tuple[int, ...]] | None = None):
        a = np.array(entries, dtype=np.uint8, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise UserInputError(f"transition matrix must be square, got shape {a.shape}")
        if a.size and a.max() > 1:
            raise UserInputError("transition matrix entries must be 0 or 1")
        a.setflags(write=False)
        self._entries = a
        if labels is None:
            labels = tuple((i,) for i in range(a.shape[0]))
        labels = tuple(tuple(x) for x in labels)
        if len(labels) != a.shape[0]:
            raise UserInputError("label count does not match matrix dimension")
        self.labels = labels
        self._as_float = None

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        return np.array_equal(self._entries, other._entries) and self.labels == other.labels

    def __repr__(self) -> str:
        return f"TransitionMatrix(dim={self.dim})"

    def tolist(self) -> list[list[int]]:
        return self._entries.astype(int).tolist()

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self._float @ x

    def rmatvec(self, x: np.ndarray) -> np.ndarray:
        return x @ self._float

    @property
    def _float(self) -> np.ndarray:
        if self._as_float is None:
            self._as_float = self._entries.astype(np.float64)
        return self._as_float

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        return np.nonzero(self._entries)

    def count_paths(self, steps: int, states: np.ndarray | None = None) -> int:
        """Exact sum of the entries of ``A^steps`` restricted to ``states``."""
        mask = np.ones(self.dim, dtype=bool) if states is None else states
        vec = [1 if m else 0 for m in mask]
        rows = [np.nonzero(r)[0].tolist() for r in self._entries]
        for _ in range(steps):
            vec = [sum(vec[j] for j in row) for row in rows]
        return sum(v for v, m in zip(vec, mask) if m)

    def to_text(self) -> str:
        lines = [f"dim={self.dim}"]
        lines += [" ".join(str(int(v)) for v in row) for row in self._entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> TransitionMatrix:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
        if not lines or not lines[0].startswith("dim="):
            raise UserInputError("matrix file must start with 'dim=<int>'")
        try:
            dim = int(lines[0][4:])
            rows = [[int(t) for t in ln.split()] for ln in lines[1:]]
        except ValueError as exc:
            raise UserInputError(f"bad matrix file: {exc}") from exc
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise UserInputError(f"matrix file declares dim={dim} but rows do not match")
        if any(v not in (0, 1) for r in rows for v in r):
            raise UserInputError("matrix entries must be 0 or 1")
        return cls(rows)


class HigherBlockOperator:
    """Matrix-free higher-block transition matrix.

    Applies the ``q^(L-1)``-dimensional 0/1 matrix to vectors in ``O(q^L)``
    time and memory ``O(q^(L-1))`` without forming it.
    """

    def __init__(self, q: int, length: int, forbidden_codes: np.ndarray):
        if length < 2:
            raise UserInputError("block length must be at least 2")
        self.q = q
        self.length = length
        self.dim = q ** (length - 1)
        self._r = q ** (length - 2)
        codes = np.asarray(forbidden_codes, dtype=np.int64)
        self.forbidden_codes = codes
        self._src = codes // q
        self._dst = codes % (self._r * q)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = np.tile(x.reshape(self._r, self.q).sum(axis=1), self.q)
        if self._src.size:
            y -= np.bincount(self._src, weights=x[self._dst], minlength=self.dim)
        return y

    def rmatvec(self, x: np.ndarray) -> np.ndarray:
        y = np.repeat(x.reshape(self.q, self._r).sum(axis=0), self.q)
        if self._src.size:
            y -= np.bincount(self._dst, weights=x[self._src], minlength=self.dim)
        return y

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        src = np.repeat(np.arange(self.dim, dtype=np.int64), self.q)
        dst = (src % self._r) * self.q + np.tile(np.arange(self.q, dtype=np.int64), self.dim)
        keep = np.ones(src.size, dtype=bool)
        if self.forbidden_codes.size:
            keep[self.forbidden_codes] = False  # edge index s*q + a equals the glued code
        return src[keep], dst[keep]

    def to_dense(self) -> TransitionMatrix:
        a = np.zeros((self.dim, self.dim), dtype=np.uint8)
        src, dst = self.edges()
        a[src, dst] = 1
        return TransitionMatrix(a, block_labels(self.q, self.length - 1))

    @property
    def labels(self) -> tuple[tuple[int, ...], ...]:
        return block_labels(self.q, self.length - 1)


def _check_dim(q: int, length: int, max_dim: int) -> int:
    dim = q ** (length - 1)
    if dim > max_dim:
        raise DimensionCapError(dim, max_dim)
    return dim


def higher_block_operator(spec: SubshiftSpec, length: int | None = None, max_dim: int = DEFAULT_MAX_DIM) -> HigherBlockOperator:
    L = spec.block_length() if length is None else length
    if L < spec.block_length():
        raise UserInputError(f"block length {L} is shorter than the forbidden words")
    _check_dim(spec.q, L, max_dim)
    return HigherBlockOperator(spec.q, L, spec.forbidden_codes(L))


def higher_block_matrix(spec: SubshiftSpec, length: int | None = None, max_dim: int = DEFAULT_MAX_DIM) -> TransitionMatrix:
    """Dense transition matrix over ``(L-1)``-blocks, ``L`` = longest forbidden word (at least 2)."""
    return higher_block_operator(spec, length, max_dim).to_dense()


def state_mask(spec: SubshiftSpec, length: int) -> np.ndarray:
    """States (``(length-1)``-blocks) that contain no forbidden factor."""
    m = length - 1
    mask = np.ones(spec.q ** m, dtype=bool)
    for w in spec.forbidden:
        if len(w) <= m:
            codes = np.arange(spec.q ** m, dtype=np.int64)
            ell, c = len(w), w.code()
            for pos in range(m - ell + 1):
                mask &= (codes // spec.q ** (m - ell - pos)) % spec.q ** ell != c
    return mask


@dataclass(frozen=True)
class ProductSpec:
    factors: tuple[TransitionMatrix, ...]

    def __post_init__(self):
        if not self.factors:
            raise UserInputError("a product needs at least one factor")

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)


def tensor_product(spec: ProductSpec) -> TransitionMatrix:
    a = np.ones((1, 1), dtype=np.uint8)
    for f in spec.factors:
        a = np.kron(a, f.entries)
    return TransitionMatrix(a)


def phi_index(n: int, sizes: Sequence[int]) -> tuple[int, ...]:
    """Mixed-radix digits of ``n`` with the last factor least significant."""
    total = int(np.prod(sizes, dtype=object)) if sizes else 1
    if not 0 <= n < total:
        raise UserInputError(f"index {n} outside 0..{total - 1}")
    digits = []
    for size in reversed(sizes):
        n, d = divmod(n, size)
        digits.append(d)
    return tuple(reversed(digits))


def phi_inverse(digits: Sequence[int], sizes: Sequence[int]) -> int:
    if len(digits) != len(sizes):
        raise UserInputError("digit count does not match factor count")
    n = 0
    for d, size in zip(digits, sizes):
        if not 0 <= d < size:
            raise UserInputError(f"digit {d} outside 0..{size - 1}")
        n = n * size + d
    return n


def _graph(T) -> csr_matrix:
    src, dst = T.edges()
    data = np.ones(len(src), dtype=np.int8)
    return csr_matrix((data, (src, dst)), shape=(T.dim, T.dim))


def strongly_connected_components(T) -> list[list[int]]:
    """SCCs as sorted state lists, ordered by smallest member."""
    _, labels = connected_components(_graph(T), directed=True, connection="strong")
    groups: dict[int, list[int]] = {}
    for state, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(state)
    return sorted(groups.values(), key=lambda g: g[0])


def is_irreducible(T) -> tuple[bool, list[list[int]]]:
    comps = strongly_connected_components(T)
    return len(comps) == 1, comps


def essential_states(T) -> np.ndarray:
    """Boolean mask of states lying on some bi-infinite path (repeated trimming of sources and sinks)."""
    src, dst = T.edges()
    alive = np.ones(T.dim, dtype=bool)
    while True:
        keep = alive[src] & alive[dst]
        s, d = src[keep], dst[keep]
        has_out = np.zeros(T.dim, dtype=bool)
        has_in = np.zeros(T.dim, dtype=bool)
        has_out[s] = True
        has_in[d] = True
        new = alive & has_out & has_in
        if np.array_equal(new, alive):
            return alive
        alive = new
