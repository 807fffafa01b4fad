import itertools
import json
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_linear_codes
from oracles import brute_distance_distribution, brute_distance_to, brute_dual_words, brute_weight_hierarchy
from wetpaper.analysis import (
    AnalysisError,
    coverage_strength,
    coverage_violation,
    distance_distribution,
    dual_distance,
    dual_distribution,
    dual_transform,
    generalized_hamming_weights,
    is_resilient,
    krawtchouk,
    mds_rank,
    minimum_distance,
    oa_strength,
    oa_violation,
    profile,
    radii,
    rank_lower_bound_check,
)
from wetpaper.codes import even_weight_code, from_generator, hamming_code, repetition_code
from wetpaper.gf2 import BitMatrix, column_submatrix, rank

NADLER_DD = [1, 0, 0, 0, 0, 12, 12, 0, 3, 4, 0, 0, 0]
NADLER_DUAL = [1, 0, 0, 4, 18, 36, 24, 12, 21, 12, 0, 0, 0]


def full_space(n):
    return from_generator(BitMatrix.identity(n))


def weight_distribution(words, n):
    out = [0] * (n + 1)
    for w in words:
        out[w.bit_count()] += 1
    return out


def test_distance_distribution_examples(nadler, hamming3):
    assert distance_distribution(nadler) == NADLER_DD
    assert distance_distribution(repetition_code(3)) == [1, 0, 0, 1]
    assert distance_distribution(hamming3) == weight_distribution(hamming3.codeword_values, 7)


def test_distance_distribution_against_enumeration(corpus, nadler):
    for code in [*corpus, nadler]:
        assert distance_distribution(code) == brute_distance_distribution(code.codeword_values, code.n)


@given(st.integers(1, 14), st.data())
def test_krawtchouk_special_values(n, data):
    x = data.draw(st.integers(0, n))
    i = data.draw(st.integers(0, n))
    assert krawtchouk(n, 0, x) == 1
    assert krawtchouk(n, 1, x) == n - 2 * x
    assert krawtchouk(n, i, 0) == comb(n, i)


@pytest.mark.parametrize("args", [(4, 5, 0), (4, 0, 5), (4, -1, 0), (4, 0, -1)])
def test_krawtchouk_range(args):
    with pytest.raises(ValueError):
        krawtchouk(*args)


def test_dual_distribution_examples(hamming3, nadler):
    assert dual_distribution(hamming3) == [1, 0, 0, 0, 7, 0, 0, 0]
    assert dual_distribution(nadler) == NADLER_DUAL
    assert [i for i, a in enumerate(dual_distribution(nadler)) if a] == [0, 3, 4, 5, 6, 7, 8, 9]
    assert sum(dual_distribution(nadler)) == 128
    assert dual_distribution(full_space(5)) == [1, 0, 0, 0, 0, 0]


def test_krawtchouk_duality_on_corpus(corpus):
    for code in corpus:
        dual_words = brute_dual_words(code.generator.data, code.n)
        assert dual_distribution(code) == weight_distribution(dual_words, code.n)
        A = distance_distribution(code)
        back = dual_transform(dual_distribution(code), code.n, Fraction(2**code.n, code.size))
        assert back == A


@pytest.mark.parametrize("s", [2, 3, 4])
def test_hamming_dual_distance(s):
    assert dual_distance(hamming_code(s)) == 2 ** (s - 1)


def test_dual_distance_conventions(nadler):
    assert dual_distance(nadler) == 3
    assert dual_distance(full_space(4)) == 5
    assert minimum_distance(nadler) == 5


def test_weight_hierarchy_examples(hamming3):
    assert generalized_hamming_weights(repetition_code(6)) == [6]
    assert generalized_hamming_weights(hamming3) == [3, 5, 6, 7]


def test_weight_hierarchy_against_oracle(corpus):
    for code in corpus:
        if code.k > 5:
            continue
        h = generalized_hamming_weights(code)
        assert h == brute_weight_hierarchy(code.codeword_values, code.n, code.k)


def test_weight_hierarchy_monotone_and_dual(corpus):
    for code in corpus:
        h = generalized_hamming_weights(code)
        assert all(a < b for a, b in zip(h, h[1:]))
        assert h[0] == minimum_distance(code)
        if code.k == code.n:
            continue
        hd = generalized_hamming_weights(code.dual())
        mirrored = {code.n + 1 - d for d in hd}
        assert set(h).isdisjoint(mirrored)
        assert set(h) | mirrored == set(range(1, code.n + 1))


def test_mds_rank_examples(hamming3):
    assert mds_rank(even_weight_code(6)) == 1
    assert mds_rank(repetition_code(3)) == 1
    assert mds_rank(hamming3) == 2
    assert generalized_hamming_weights(hamming3)[1] == hamming3.redundancy + 2


def test_mds_rank_formula_on_corpus(corpus):
    checked = 0
    for code in corpus:
        h = generalized_hamming_weights(code)
        if h[-1] != code.n:
            with pytest.raises(AnalysisError):
                mds_rank(code, h)
            continue
        checked += 1
        assert mds_rank(code, h) == code.n - code.redundancy - dual_distance(code) + 2
    assert checked >= 10


def test_radii_examples(nadler, hamming3):
    rn = radii(nadler)
    assert rn.alpha == [1, 12, 66, 46, 3] + [0] * 8
    assert rn.covering_radius == 4
    assert rn.average_radius == Fraction(294, 128) == Fraction(2296875, 10**6)
    rh = radii(hamming3)
    assert rh.alpha[:2] == [1, 7] and rh.covering_radius == 1
    rf = radii(full_space(4))
    assert (rf.alpha, rf.covering_radius, rf.average_radius) == ([1, 0, 0, 0, 0], 0, 0)


def test_radii_against_enumeration(corpus):
    for code in corpus[:12]:
        words = code.codeword_values
        dists = [brute_distance_to(words, x) for x in range(1 << code.n)]
        r = radii(code)
        assert r.covering_radius == max(dists)
        assert r.average_radius == Fraction(sum(dists), 1 << code.n)
        assert r.average_radius <= r.covering_radius
        assert sum(r.alpha) * code.size == 2**code.n
        e = (minimum_distance(code) - 1) // 2
        assert all(r.alpha[i] == comb(code.n, i) for i in range(e + 1))


def test_oa_strength(nadler, hamming3, corpus):
    # exact equal-frequency strength is d_perp - 1 = 2 for the Nadler code
    assert oa_strength(nadler) == 2
    assert oa_violation(nadler, 3) is not None
    assert oa_strength(hamming3) == 3
    assert oa_strength(full_space(5)) == 5
    for code in corpus:
        assert oa_strength(code) == dual_distance(code) - 1


def test_oa_violation_is_genuine(nadler):
    cols = oa_violation(nadler, 3)
    words = [w.bits for w in nadler.codewords()]
    counts = {}
    for w in words:
        key = tuple(w[c - 1] for c in cols)
        counts[key] = counts.get(key, 0) + 1
    assert len(set(counts.values())) > 1 or len(counts) < 8


def test_coverage_strength(nadler, hamming3):
    assert coverage_strength(nadler) == 4
    cols = coverage_violation(nadler, 5)
    seen = {tuple(w.bits[c - 1] for c in cols) for w in nadler.codewords()}
    assert len(seen) < 32
    assert coverage_strength(hamming3) == 3


def test_resilience(nadler, hamming3):
    assert is_resilient(nadler, 2)
    assert not is_resilient(nadler, 3)
    assert not is_resilient(nadler, 4)
    assert not is_resilient(nadler, 5)
    assert is_resilient(hamming3, 3)
    assert not is_resilient(hamming3, 4)


def test_resilience_matches_dual_distance(corpus):
    for code in corpus[:10]:
        d = dual_distance(code)
        assert is_resilient(code, d - 1)
        if d <= code.n - code.redundancy:
            assert not is_resilient(code, d)


def test_rank_bound_hamming(hamming3):
    delta = 3
    h = generalized_hamming_weights(hamming3)
    for wet in itertools.combinations(range(1, 8), 4):
        assert rank_lower_bound_check(hamming3, wet, 2, h)
        assert rank(column_submatrix(hamming3.generator, wet)) >= 7 - delta - 2 + 1
    with pytest.raises(AnalysisError):
        rank_lower_bound_check(hamming3, (1, 2, 3, 4), 1, h)


def test_rank_bound_empty_wet_set_is_inadmissible(hamming3):
    with pytest.raises(AnalysisError):
        rank_lower_bound_check(hamming3, (), 4)


def test_rank_bound_sweep():
    rng = np.random.default_rng(99)
    codes = []
    while len(codes) < 4:
        G = BitMatrix.from_array(rng.integers(0, 2, size=(5, 10)))
        if rank(G) == 5:
            codes.append(from_generator(G))
    admissible = 0
    for code in codes:
        h = generalized_hamming_weights(code)
        for mask in range(1 << 10):
            wet = [i + 1 for i in range(10) if mask >> i & 1]
            delta = 10 - len(wet)
            for t in range(1, 6):
                if h[t - 1] > delta >= 5 and t >= delta - 5:
                    admissible += 1
                    assert rank_lower_bound_check(code, wet, t, h)
    assert admissible > 0


def test_profile_output(nadler):
    prof = profile(nadler)
    text = prof.to_text()
    assert "average_radius: 147/64 (2.29688)" in text
    assert "dual_distance: 3" in text
    assert prof.wet_threshold == 8 and prof.wet_threshold_bound == 10
    data = json.loads(prof.to_json())
    assert data["average_radius"] == "147/64"
    assert data["distance_distribution"][5] == "12"


def test_profile_linear(hamming3):
    prof = profile(hamming3)
    assert prof.weight_hierarchy == [3, 5, 6, 7]
    assert prof.mds_rank == 2
    assert prof.wet_threshold == 4


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_random_code_invariants(seed):
    (code,) = random_linear_codes(1, max_n=9, seed=seed)
    A = distance_distribution(code)
    assert A[0] == 1 and sum(A) == code.size
    dual = dual_distribution(code)
    assert all(a >= 0 for a in dual) and sum(dual) * code.size == 2**code.n
