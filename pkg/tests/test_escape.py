import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from escaperate.algebra import RationalFunction, Z, recurrence_from_rational
from escaperate.errors import NotReducedError, ReducibleError, UserInputError
from escaperate.escape import (
    HoleSpec,
    NoPeriodicPointWarning,
    compare_methods,
    escape_rate_combinatorial,
    escape_rate_spectral,
    generating_function,
    hole_measure,
    minimal_period,
    poincare_recurrence_time,
    solve_generating_system,
)
from escaperate.oracle import count_avoiding_words
from escaperate.shift import SubshiftSpec, higher_block_matrix, state_mask
from escaperate.tables import doubling_squared_times_golden, golden_mean_squared, printed_tolerance
from escaperate.words import Word, WordSet, correlation_polynomial

FULL6 = SubshiftSpec.full(6)


def hole(words, ambient=FULL6):
    return HoleSpec.build(ambient, words)


def equal_length_sets(max_q=6, max_n=4, max_words=8):
    """Random reduced equal-length word sets, kept small enough for dense matrices."""
    return st.integers(2, max_q).flatmap(
        lambda q: st.integers(1, min(max_n, 4 if q <= 4 else 3)).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(0, q - 1), min_size=n, max_size=n).map(tuple),
                min_size=1, max_size=max_words, unique=True,
            ).map(lambda ws: WordSet(ws, q))
        )
    )


# ------------------------------------------------------------ spectral examples

@pytest.mark.parametrize(
    "words, expected",
    [
        (["00", "01"], -math.log((5 + math.sqrt(41)) / 12)),
        (["04", "05"], -math.log((3 + math.sqrt(7)) / 6)),
        (["00"], -math.log((5 + 3 * math.sqrt(5)) / 12)),
        (["01"], -math.log((3 + 2 * math.sqrt(2)) / 6)),
    ],
)
def test_spectral_closed_forms(words, expected):
    assert escape_rate_spectral(hole(words)).rho == pytest.approx(expected, abs=1e-12)


def test_empty_hole_has_zero_rate():
    r = escape_rate_spectral(hole(WordSet.empty(6)))
    assert r.rho == 0.0 and r.lambda_ambient == pytest.approx(6.0)


def test_golden_mean_squared_hole():
    assert escape_rate_spectral(hole(["00"], golden_mean_squared())).rho == pytest.approx(0.188, abs=5e-4)


def test_everything_removed_gives_infinite_rate():
    r = escape_rate_spectral(hole(["0", "1"], SubshiftSpec.full(2)))
    assert r.is_infinite and r.to_dict()["rho"] == "inf"


def test_reducible_ambient_rejected():
    with pytest.raises(ReducibleError):
        escape_rate_spectral(hole(["00"], SubshiftSpec.from_strings(2, ["10"])))


def test_hole_words_must_be_allowed():
    with pytest.raises(UserInputError):
        hole(["11"], SubshiftSpec.from_strings(2, ["11"]))


def test_hole_extension_drops_forbidden_words():
    h = hole(["0"], SubshiftSpec.from_strings(2, ["11"]))
    assert h.hole_words == WordSet.from_strings(["0"], 2)
    h = hole(["1", "00"], SubshiftSpec.from_strings(2, ["11"]))
    assert h.hole_words == WordSet.from_strings(["10", "00"], 2)


# -------------------------------------------------------- combinatorial examples

def test_combinatorial_examples():
    assert escape_rate_combinatorial(6, WordSet.from_strings(["00"], 6)).rho == pytest.approx(
        -math.log((5 + 3 * math.sqrt(5)) / 12), abs=1e-12)
    assert escape_rate_combinatorial(6, WordSet.from_strings(["01"], 6)).rho == pytest.approx(
        -math.log((3 + 2 * math.sqrt(2)) / 6), abs=1e-12)
    assert escape_rate_combinatorial(2, WordSet.from_strings(["00", "01"], 2)).rho == pytest.approx(math.log(2), abs=1e-12)


def test_combinatorial_details():
    r = escape_rate_combinatorial(6, WordSet.from_strings(["00", "01"], 6))
    assert RationalFunction.parse(r.details["F"]) == RationalFunction.parse("(z^2 + z)/(z^2 - 5z - 4)")
    assert r.details["recurrence"] == "f_k = 5f_{k-1} + 4f_{k-2}"


def test_combinatorial_rejects_unreduced():
    with pytest.raises(NotReducedError):
        escape_rate_combinatorial(2, WordSet.from_strings(["0", "01"], 2))


@pytest.mark.parametrize(
    "words, F",
    [(["00", "01"], "(z^2 + z)/(z^2 - 5z - 4)"), (["04", "05"], "z^2/(z^2 - 6z + 2)")],
)
def test_generating_system_examples(words, F):
    sol = solve_generating_system(6, WordSet.from_strings(words, 6))
    assert sol[0] == RationalFunction.parse(F)


@given(st.integers(2, 6).flatmap(
    lambda q: st.tuples(st.just(q), st.lists(st.integers(0, q - 1), min_size=1, max_size=5).map(tuple))
))
def test_single_word_system_component(args):
    q, w = args
    word = Word(w, q)
    sol = solve_generating_system(q, WordSet([w], q))
    ww = RationalFunction(correlation_polynomial(word, word))
    assert sol[1] == RationalFunction(1) / (RationalFunction(1) + RationalFunction(Z - q) * ww)


@settings(max_examples=100)
@given(equal_length_sets())
def test_methods_agree_and_counts_match(words):
    q = words.q
    cmp = compare_methods(q, words)
    assert cmp.difference <= 1e-9
    F, _ = generating_function(q, words)
    rec = recurrence_from_rational(F)
    spec = SubshiftSpec(q, words)
    L = spec.block_length()
    B = higher_block_matrix(spec, L)
    mask = state_mask(spec, L)
    terms = rec.terms(10)
    for k in range(L - 1, 10):
        if q ** k > 10**6:
            break
        oracle = count_avoiding_words(q, words, k)
        assert terms[k] == B.count_paths(k - (L - 1), mask) == oracle


def test_compare_methods_examples():
    cmp = compare_methods(6, WordSet.from_strings(["00", "01"], 6))
    assert cmp.spectral.rho == pytest.approx(0.051019276018851, abs=1e-12)
    cmp = compare_methods(3, WordSet.from_strings(["01"], 3))
    # z^2/(z^2 - 3z + 1): dominant root (3 + sqrt 5)/2
    assert cmp.combinatorial.rho == pytest.approx(math.log(3) - math.log((3 + math.sqrt(5)) / 2), abs=1e-12)


# ------------------------------------------------------------- periods and times

def test_minimal_period_examples():
    assert minimal_period(hole(["0000", "0001", "0010", "0011"])) == 1
    assert minimal_period(hole(["0002", "0003", "0012", "0013"])) == 4
    assert minimal_period(hole(["010"])) == 2
    assert minimal_period(hole(["012"])) == 3


def test_minimal_period_fallback_warns():
    gms = golden_mean_squared()
    with pytest.warns(NoPeriodicPointWarning):
        assert minimal_period(hole(["103"], gms)) == 3
    with pytest.raises(UserInputError):
        minimal_period(hole(["103"], gms), strict=True)


def test_poincare_examples():
    assert poincare_recurrence_time(hole(["00"])) == 1
    assert poincare_recurrence_time(hole(["01", "10"])) == 1
    assert poincare_recurrence_time(hole(["01"])) == 2
    assert poincare_recurrence_time(hole(["103"], golden_mean_squared())) == 4


def _brute_poincare(q, words, n):
    for ell in range(1, n + 1):
        for u, v in itertools.product(words, repeat=2):
            glued = list(u) + [None] * ell
            if all(glued[ell + i] in (None, v[i]) for i in range(n)):
                return ell
    return n + 1


@given(st.integers(2, 4).flatmap(
    lambda q: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n).map(tuple),
                           min_size=1, max_size=4, unique=True).map(lambda ws: (q, n, ws)))
))
def test_poincare_matches_overlap_search(args):
    q, n, ws = args
    assert poincare_recurrence_time(hole(WordSet(ws, q), SubshiftSpec.full(q))) == _brute_poincare(q, ws, n)


@pytest.mark.parametrize("n", [2, 3])
def test_period_and_rate_orderings_agree(n):
    rows = []
    for w in itertools.product(range(6), repeat=n):
        h = hole(WordSet([w], 6))
        rows.append((minimal_period(h), escape_rate_spectral(h).rho))
    for (t1, r1), (t2, r2) in itertools.combinations(rows, 2):
        if t1 < t2:
            assert r1 < r2
        elif t1 == t2:
            assert r1 == pytest.approx(r2, abs=1e-12)


def test_product_shift_breaks_the_ordering():
    ambient = doubling_squared_times_golden()
    h1, h2 = hole(["00"], ambient), hole(["01"], ambient)
    assert minimal_period(h1) < minimal_period(h2)
    r1, r2 = escape_rate_spectral(h1).rho, escape_rate_spectral(h2).rho
    assert r1 > r2
    assert r1 == pytest.approx(0.0251, abs=printed_tolerance("0.0251"))
    assert r2 == pytest.approx(0.0176, abs=printed_tolerance("0.0176"))


@settings(max_examples=60)
@given(equal_length_sets(max_q=4, max_n=3, max_words=5), st.data())
def test_enlarging_the_hole_never_lowers_the_rate(words, data):
    q, n = words.q, words.max_length
    extra = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n).map(tuple))
    bigger = WordSet(set(words.words) | {Word(extra, q)}, q)
    ambient = SubshiftSpec.full(q)
    assert escape_rate_spectral(hole(bigger, ambient)).rho >= escape_rate_spectral(hole(words, ambient)).rho - 1e-12


def test_hole_measure_full_shift():
    assert hole_measure(hole(["00", "01"])) == pytest.approx(2 / 36, abs=1e-14)
