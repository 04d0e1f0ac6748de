import itertools
import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from escaperate.algebra import IntPolynomial, Z
from escaperate.errors import NotReducedError, UserInputError
from escaperate.escape import combinatorial_entropy
from escaperate.oracle import count_avoiding_words
from escaperate.shift import SubshiftSpec, higher_block_matrix
from escaperate.spectral import perron
from escaperate.words import Word, WordSet, correlation_matrix, correlation_polynomial, normalize_equal_length


def W(text, q=6):
    return Word.parse(text, q)


def words_over(q, max_len=5):
    return st.lists(st.integers(0, q - 1), min_size=1, max_size=max_len).map(lambda s: Word(tuple(s), q))


@pytest.mark.parametrize(
    "u, w, expected",
    [
        ("101001", "10010", IntPolynomial.monomial(3) + 1),
        ("00", "00", Z + 1),
        ("04", "05", IntPolynomial()),
        ("01", "01", Z),
    ],
)
def test_correlation_examples(u, w, expected):
    assert correlation_polynomial(W(u), W(w)) == expected


def test_correlation_is_asymmetric():
    u, w = W("101001", 2), W("10010", 2)
    assert correlation_polynomial(u, w) != correlation_polynomial(w, u)
    assert correlation_polynomial(w, u) == Z
    assert correlation_polynomial(u, u) == IntPolynomial.monomial(5) + 1
    assert correlation_polynomial(w, w) == IntPolynomial.monomial(4) + Z


@given(st.integers(2, 6).flatmap(lambda q: words_over(q, 8)))
def test_autocorrelation_is_monic_of_degree_len_minus_one(w):
    c = correlation_polynomial(w, w)
    assert c.degree == len(w) - 1 and c.leading == 1


@given(st.integers(2, 4).flatmap(lambda q: st.tuples(words_over(q), words_over(q))))
def test_correlation_bits_match_cylinder_overlap(pair):
    u, w = pair
    c = correlation_polynomial(u, w)
    n = len(u)
    for shift in range(n):
        tail = u.symbols[shift:]
        m = min(len(tail), len(w))
        overlap = tail[:m] == w.symbols[:m]
        coeff = c.coeffs[n - 1 - shift] if n - 1 - shift < len(c.coeffs) else 0
        assert coeff == int(overlap)


def test_correlation_matrix_examples():
    assert correlation_matrix(WordSet.from_strings(["00", "01"], 6)) == [[Z + 1, IntPolynomial()], [IntPolynomial.constant(1), Z]]
    assert correlation_matrix(WordSet.from_strings(["012"], 6)) == [[IntPolynomial.monomial(2)]]
    P = WordSet.from_strings(["005", "015", "105"], 6)
    z2 = IntPolynomial.monomial(2)
    assert correlation_matrix(P) == [[z2 if i == j else IntPolynomial() for j in range(3)] for i in range(3)]


def test_normalize_examples():
    assert normalize_equal_length(WordSet.from_strings(["01"], 3), 3) == WordSet.from_strings(["010", "011", "012"], 3)
    ws = WordSet.from_strings(["012", "345"], 6)
    assert normalize_equal_length(ws, 3) == ws
    assert normalize_equal_length(WordSet.from_strings(["0"], 2), 2) == WordSet.from_strings(["00", "01"], 2)
    with pytest.raises(UserInputError):
        normalize_equal_length(ws, 2)


def _count_no_early_occurrence(q, words, k, n):
    """Length-k words with no word of ``words`` starting at a position <= k - n."""
    total = 0
    for s in itertools.product(range(q), repeat=k):
        if not any(s[i:i + len(w)] == w.symbols for w in words for i in range(0, k - n + 1)):
            total += 1
    return total


@given(
    st.integers(2, 3).flatmap(
        lambda q: st.tuples(st.just(q), st.lists(words_over(q, 2), min_size=1, max_size=3, unique=True), st.integers(0, 2))
    )
)
def test_suffix_extension_forbids_occurrences_with_room_to_spare(args):
    q, ws, extra = args
    words = WordSet(ws, q)
    n = words.max_length + extra
    ext = normalize_equal_length(words, n)
    for k in range(n, n + 3):
        assert count_avoiding_words(q, ext, k) == _count_no_early_occurrence(q, list(words), k, n)


@settings(max_examples=40)
@given(
    st.integers(2, 4).flatmap(
        lambda q: st.tuples(st.just(q), st.lists(words_over(q, 3), min_size=1, max_size=3, unique=True), st.integers(0, 1))
    )
)
def test_suffix_extension_preserves_entropy(args):
    q, ws, extra = args
    words = WordSet(ws, q)
    assume(count_avoiding_words(q, words, 8) > 0)
    n = words.max_length + extra
    ext = normalize_equal_length(words, n)
    lam = lambda F: perron(higher_block_matrix(SubshiftSpec(q, F), max(2, n))).lam
    assert lam(words) == pytest.approx(lam(ext), abs=1e-10)


def test_suffix_extension_changes_finite_counts_but_not_growth():
    words = WordSet.from_strings(["01"], 3)
    ext = normalize_equal_length(words, 3)
    assert count_avoiding_words(3, words, 3) == 21
    assert count_avoiding_words(3, ext, 3) == 24
    assert combinatorial_entropy(3, words) == pytest.approx(combinatorial_entropy(3, ext), abs=1e-12)


def test_reduced_flag():
    assert WordSet.from_strings(["00", "01"], 6).is_reduced()
    ws = WordSet.from_strings(["0", "101"], 2)
    assert not ws.is_reduced()
    with pytest.raises(NotReducedError):
        ws.require_reduced()


def test_wordset_validation():
    with pytest.raises(UserInputError):
        WordSet.from_strings(["00", "00"], 6)
    with pytest.raises(UserInputError):
        Word.parse("07", 6)
    with pytest.raises(UserInputError):
        Word.parse("", 6)
    with pytest.raises(UserInputError):
        WordSet.from_text("0,1\n")


def test_large_alphabet_syntax():
    w = Word.parse("10.3.11", 12)
    assert w.symbols == (10, 3, 11)
    assert w.format() == "10.3.11"
    assert w.code() == 10 * 144 + 3 * 12 + 11


@given(st.integers(2, 12).flatmap(lambda q: st.tuples(st.just(q), st.lists(words_over(q), max_size=6, unique=True))))
def test_text_round_trip(args):
    q, ws = args
    words = WordSet(ws, q)
    again = WordSet.from_text("# comment\n" + words.to_text())
    assert again == words and again.words == words.words


@given(st.integers(2, 7).flatmap(lambda q: words_over(q, 6)))
def test_code_is_base_q_value(w):
    assert w.code() == sum(s * w.q ** (len(w) - 1 - i) for i, s in enumerate(w.symbols))
    assert math.isclose(w.code(), int("".join(map(str, w.symbols)), w.q)) if w.q <= 10 else True
