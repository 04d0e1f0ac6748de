"""Finite words, word sets and correlation polynomials.

Symbols are small non-negative integers.  On the command line a word over an
alphabet with at most ten symbols may be written as a digit string (``"010"``);
larger alphabets separate symbols with dots (``"10.3.11"``).

Word-set files look like::

    # optional comments
    q=6
    0,0
    0,1
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .algebra import IntPolynomial
from .errors import NotReducedError, UserInputError


@dataclass(frozen=True, slots=True)
class Word:
    symbols: tuple[int, ...]
    q: int

    def __post_init__(self):
        if not self.symbols:
            raise UserInputError("words must be nonempty")
        if not all(0 <= s < self.q for s in self.symbols):
            raise UserInputError(f"word {self.symbols} has a symbol outside 0..{self.q - 1}")

    @classmethod
    def parse(cls, text: str, q: int) -> Word:
        return cls(parse_symbols(text), q)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __getitem__(self, item):
        return self.symbols[item]

    def __add__(self, other: Word | Sequence[int]) -> Word:
        tail = other.symbols if isinstance(other, Word) else tuple(other)
        return Word(self.symbols + tail, self.q)

    def occurs_in(self, seq: Sequence[int]) -> bool:
        n, s = len(self.symbols), tuple(seq)
        return any(s[i:i + n] == self.symbols for i in range(len(s) - n + 1))

    def code(self) -> int:
        """Base-q integer value of the word (most significant symbol first)."""
        c = 0
        for s in self.symbols:
            c = c * self.q + s
        return c

    def format(self) -> str:
        if self.q <= 10:
            return "".join(str(s) for s in self.symbols)
        return ".".join(str(s) for s in self.symbols)

    def __str__(self) -> str:
        return self.format()


def parse_symbols(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        raise UserInputError("empty word")
    try:
        if "." in text:
            return tuple(int(t) for t in text.split("."))
        if "," in text:
            return tuple(int(t) for t in text.split(","))
        return tuple(int(c) for c in text)
    except ValueError as exc:
        raise UserInputError(f"cannot parse word {text!r}") from exc


class WordSet:
    """Insertion-ordered collection of distinct words over one alphabet."""

    __slots__ = ("_words", "q", "_index")

    def __init__(self, words: Iterable[Word | Sequence[int]], q: int):
        ws: list[Word] = []
        seen: set[tuple[int, ...]] = set()
        for w in words:
            if not isinstance(w, Word):
                w = Word(tuple(w), q)
            elif w.q != q:
                raise UserInputError(f"word {w} is over q={w.q}, expected q={q}")
            if w.symbols in seen:
                raise UserInputError(f"duplicate word {w}")
            seen.add(w.symbols)
            ws.append(w)
        self._words = tuple(ws)
        self.q = q
        self._index = seen

    @classmethod
    def from_strings(cls, strings: Iterable[str], q: int) -> WordSet:
        return cls((Word.parse(s, q) for s in strings), q)

    @classmethod
    def empty(cls, q: int) -> WordSet:
        return cls((), q)

    @property
    def words(self) -> tuple[Word, ...]:
        return self._words

    def __len__(self) -> int:
        return len(self._words)

    def __iter__(self) -> Iterator[Word]:
        return iter(self._words)

    def __getitem__(self, i: int) -> Word:
        return self._words[i]

    def __contains__(self, w) -> bool:
        key = w.symbols if isinstance(w, Word) else tuple(w)
        return key in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, WordSet):
            return NotImplemented
        return self.q == other.q and self._words == other._words

    def __hash__(self) -> int:
        return hash((self.q, self._words))

    def __repr__(self) -> str:
        return f"WordSet(q={self.q}, [{', '.join(map(str, self._words))}])"

    def union(self, other: Iterable[Word]) -> WordSet:
        extra = [w for w in other if w not in self]
        return WordSet(list(self._words) + extra, self.q)

    def difference(self, other: WordSet) -> WordSet:
        return WordSet([w for w in self._words if w not in other], self.q)

    @property
    def lengths(self) -> set[int]:
        return {len(w) for w in self._words}

    @property
    def max_length(self) -> int:
        return max((len(w) for w in self._words), default=0)

    def is_equal_length(self) -> bool:
        return len(self.lengths) <= 1

    def is_reduced(self) -> bool:
        """No word occurs as a factor of a different word."""
        by_len = sorted(self._words, key=len)
        for i, short in enumerate(by_len):
            for long in by_len[i + 1:]:
                if len(long) > len(short) and short.occurs_in(long.symbols):
                    return False
        return True

    def require_reduced(self) -> None:
        if not self.is_reduced():
            raise NotReducedError(f"{self!r} is not reduced (a word occurs inside another)")

    def to_text(self) -> str:
        lines = [f"q={self.q}"]
        lines += [",".join(str(s) for s in w.symbols) for w in self._words]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> WordSet:
        q = None
        words: list[tuple[int, ...]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if q is None:
                if not line.startswith("q="):
                    raise UserInputError(f"line {lineno}: expected header 'q=<int>', got {line!r}")
                try:
                    q = int(line[2:])
                except ValueError as exc:
                    raise UserInputError(f"line {lineno}: bad alphabet size {line!r}") from exc
                continue
            tokens = [t.strip() for t in line.split(",")]
            # "00" would silently read as the single symbol 0
            if not all(t.isdigit() and str(int(t)) == t for t in tokens):
                raise UserInputError(f"line {lineno}: bad word {line!r}; separate symbols with commas, e.g. 0,0")
            words.append(tuple(int(t) for t in tokens))
        if q is None:
            raise UserInputError("word-set file has no 'q=<int>' header")
        return cls(words, q)


def correlation_polynomial(u: Word, w: Word) -> IntPolynomial:
    """(uw)_z: bit b_l is set when w, shifted right by l under u, agrees on the overlap."""
    if u.q != w.q:
        raise UserInputError("correlation of words over different alphabets")
    n1, n2 = len(u), len(w)
    coeffs = [0] * n1
    for shift in range(n1):
        overlap = min(n1 - shift, n2)
        if u.symbols[shift:shift + overlap] == w.symbols[:overlap]:
            coeffs[n1 - 1 - shift] = 1
    return IntPolynomial(coeffs)


def correlation_matrix(words: WordSet) -> list[list[IntPolynomial]]:
    """Matrix with entry (i, j) = (w_j w_i)_z."""
    if not len(words):
        raise UserInputError("correlation matrix of an empty word set")
    ws = words.words
    return [[correlation_polynomial(wj, wi) for wj in ws] for wi in ws]


def normalize_equal_length(words: WordSet, n: int) -> WordSet:
    """Replace each shorter word u by all extensions u·v with |u·v| = n."""
    if n < words.max_length:
        raise UserInputError(f"target length {n} is shorter than the longest word ({words.max_length})")
    out: list[Word] = []
    seen: set[tuple[int, ...]] = set()
    for w in words:
        for tail in itertools.product(range(words.q), repeat=n - len(w)):
            sym = w.symbols + tail
            if sym not in seen:
                seen.add(sym)
                out.append(Word(sym, words.q))
    return WordSet(out, words.q)
