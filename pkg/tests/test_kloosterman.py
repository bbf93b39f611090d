from __future__ import annotations

import math

import numpy as np
import pytest

from gl3kuz.kloosterman import (
    KloostermanQuery,
    _histogram_fast,
    _histogram_naive,
    bound_envelope,
    bound_ratio,
    divisor_count,
    kloosterman_gl2,
    kloosterman_long,
    kloosterman_raw,
    kloosterman_raw_many,
    kloosterman_trivial,
    long_element_tuple,
)

REL_TOL = 1e-10
IM_TOL_PER_TERM = 1e-9


def test_trivial_modulus_single_term():
    for v in [(1, 1), (1, -1), (-1, 1), (-1, -1)]:
        q = KloostermanQuery((3, -2), (1, 5), (1, 1), v)
        assert kloosterman_long(q) == 1.0


def test_frozen_fixture_c23():
    """m=n=(1,1), v=++, c=(2,3): value -1 frozen from the naive enumeration."""
    q = KloostermanQuery((1, 1), (1, 1), (2, 3))
    v_naive = kloosterman_long(q, method="naive")
    v_fast = kloosterman_long(q, method="fast")
    assert v_naive == v_fast
    assert abs(v_naive - (-1.0)) < 1e-12


def test_fast_equals_naive_bit_identical():
    """Histogram accumulation makes both paths literally identical, D <= 12."""
    tuples = [(1, 1, 1, 1), (2, 3, 1, 1), (-1, 2, 3, -2), (0, 1, 1, 0)]
    for D1 in range(1, 13):
        for D2 in range(1, 13):
            h_naive = _histogram_naive(D1, D2, tuples)
            h_fast = _histogram_fast(D1, D2, tuples)
            assert np.array_equal(h_naive, h_fast), (D1, D2)


def test_bezout_solution_family_independence():
    """X_i do not depend on which solution of Y B + Z C = 1 is used."""
    for D1, D2 in [(4, 6), (5, 7), (8, 8), (9, 3), (12, 10)]:
        a = _histogram_naive(D1, D2, [(1, 2, 3, 4)], bezout_family=0)
        b = _histogram_naive(D1, D2, [(1, 2, 3, 4)], bezout_family=1)
        assert np.array_equal(a, b), (D1, D2)


def test_degenerate_modulus_reduces_to_classical_sum():
    """D2 = 1 collapses the long-element sum to the classical GL(2) sum."""
    for D1 in range(1, 20):
        for (m1, n1) in [(1, 1), (2, 5), (-3, 4)]:
            a = kloosterman_raw(m1, 7, n1, -2, D1, 1)
            b = kloosterman_gl2(m1, n1, D1)
            assert abs(a - b) <= REL_TOL * max(1.0, abs(b)), (D1, m1, n1)
            c = kloosterman_raw(7, m1, -2, n1, 1, D1)
            assert abs(c - b) <= REL_TOL * max(1.0, abs(b)), (D1, m1, n1)


def test_imaginary_part_vanishes_for_symmetric_indices():
    for D1 in range(1, 31):
        for D2 in range(1, 31):
            q = KloostermanQuery((1, 1), (1, 1), (D1, D2))
            s = kloosterman_long(q)
            assert abs(s.imag) <= IM_TOL_PER_TERM * D1 * D2


def test_v_dependence_is_the_index_twist():
    for v in [(1, 1), (1, -1), (-1, 1), (-1, -1)]:
        q = KloostermanQuery((1, 2), (3, 1), (4, 6), v)
        a1, a2, b1, b2 = long_element_tuple(q.m, q.n, q.v)
        direct = kloosterman_raw(a1, a2, b1, b2, 4, 6)
        assert kloosterman_long(q) == direct


def test_swap_symmetry():
    """Simultaneous swap of the two modular factors preserves the sum."""
    for c in [(2, 3), (4, 6), (5, 5), (7, 3)]:
        for v in [(1, 1), (-1, 1), (1, -1), (-1, -1)]:
            q1 = KloostermanQuery((1, 2), (3, 1), c, v)
            q2 = KloostermanQuery((2, 1), (1, 3), (c[1], c[0]), (v[1], v[0]))
            s1, s2 = kloosterman_long(q1), kloosterman_long(q2)
            assert abs(s1 - s2) <= REL_TOL * max(1.0, abs(s1))
            assert bound_ratio(q1) == pytest.approx(bound_ratio(q2))


def test_gl2_examples():
    assert kloosterman_gl2(1, 1, 1) == 1
    assert abs(kloosterman_gl2(1, 1, 2) - 1.0) < 1e-14
    # Selberg identity spot check: S(1,1;p) real with |S| <= 2 sqrt(p)
    for p in [5, 7, 11, 13]:
        s = kloosterman_gl2(1, 1, p)
        assert abs(s.imag) < 1e-12
        assert abs(s) <= 2 * math.sqrt(p)


def test_gl2_weil_bound_scan():
    for c in range(1, 501):
        s = kloosterman_gl2(1, 1, c)
        assert abs(s) <= divisor_count(c) * math.sqrt(c) + 1e-9, c


def test_trivial_element_sum():
    assert kloosterman_trivial((1, 1), (1, 1), (1, 1)) == 1
    assert kloosterman_trivial((1, 1), (1, 1), (2, 1)) == 0
    assert kloosterman_trivial((1, -1), (1, 1), (1, 1), v=(1, -1)) == 1
    assert kloosterman_trivial((1, -1), (1, 1), (1, 1), v=(1, 1)) == 0
    # exactly one of the four sign pairs matches a nonzero m
    hits = sum(kloosterman_trivial((2, -3), (-2, 3), (1, 1), v=v)
               for v in [(1, 1), (1, -1), (-1, 1), (-1, -1)])
    assert hits == 1


def test_bound_ratio_small_and_calibrated_scan():
    q = KloostermanQuery((1, 1), (1, 1), (1, 1))
    assert bound_ratio(q) <= 1.0
    assert bound_envelope(q) >= 1.0
    # spot-check part of the calibrated region (the full c <= 50 scan runs in
    # the acceptance suite)
    for D1 in range(1, 26):
        for D2 in range(1, 26):
            for m, n in [((1, 1), (1, 1)), ((2, 3), (1, 1))]:
                q = KloostermanQuery(m, n, (D1, D2))
                assert bound_ratio(q) <= 1.0, (D1, D2, m, n)


def test_many_tuples_single_pass_matches_single_calls():
    tuples = [(-1, -1, 1, 1), (1, -1, 1, 1), (-1, 1, 2, 3)]
    vals = kloosterman_raw_many(tuples, 6, 10)
    for t, v in zip(tuples, vals):
        assert kloosterman_raw(*t, 6, 10) == complex(v)


def test_enumeration_budget_guard():
    q = KloostermanQuery((1, 1), (1, 1), (2000, 2000))
    with pytest.raises(OverflowError):
        kloosterman_long(q, enumeration_budget=1_000_000)


def test_query_validation():
    with pytest.raises(ValueError):
        KloostermanQuery((1, 1), (1, 1), (0, 3))
    with pytest.raises(ValueError):
        KloostermanQuery((1, 1), (1, 1), (2, 3), (2, 1))
