"""Tests for the minimal-weight Whittaker module.

The Stade agreement matrix doubles as the main cross-validation of the whole
Mellin-Barnes evaluator, since the closed forms are exact gamma products.
Two frozen reference values for W^{0*} were computed by summing the exact
residue series of the double Mellin-Barnes integral in 40-digit arithmetic
(closing both contours left; three falling factorials beat the one rising
one, so the series converges for every y).  They pin the contour-aliasing
behavior at real spectral parameters, which the tempered-parameter Stade
checks cannot see.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from gl3kuz import whitt3 as w3
from gl3kuz.core import (GammaPole, SpectralParams, WEYL_ALL, cgamma, mu_d,
                         weyl_act)

T = SpectralParams.from_triple

STADE_RTOL = 1e-5        # acceptance tolerance; measured worst case 1.5e-8
WEYL_RTOL = 1e-9         # measured spread 1.7e-13
JACQUET_RTOL = 1e-6      # measured agreement 1e-10 .. 1e-14
CONTOUR_RTOL = 1e-8      # two admissible lines, measured 3.7e-10
DECAY_C = 1.0            # calibrated on the grid below; measured ratio 1.3e-7

MU_T = T((0.3j, 0.1j, -0.4j))
MU_T2 = T((0.25j, -0.05j, -0.2j))
MU_REAL = T((0.8, 0.0, -0.8))

# residue-series values of W^{0*}(y, (0.8, 0, -0.8))
W0_SERIES = {
    (1.0, 1.0): 1.89004348843582e-8,
    (0.45, 0.6): 6.60405832105111e-5,
}


# ---------------------------------------------------------------------------
# lambda_norm
# ---------------------------------------------------------------------------

def test_lambda0_at_zero_is_one():
    assert abs(w3.lambda_norm(0, T((0, 0, 0))) - 1.0) < 1e-14


def test_lambda1_over_lambda0_is_sqrt2_gamma_shift():
    m1, m2, m3 = MU_T.as_tuple()
    ratio = w3.lambda_norm(1, MU_T) / w3.lambda_norm(0, MU_T)
    want = math.sqrt(2) \
        * cgamma((2 + m1 - m3) / 2) * cgamma((2 + m2 - m3) / 2) \
        / (cgamma((1 + m1 - m3) / 2) * cgamma((1 + m2 - m3) / 2))
    assert abs(ratio - complex(want)) < 1e-12 * abs(want)


@pytest.mark.parametrize("d", [2, 4])
def test_lambda_d_real_at_curve_origin_even_d(d):
    val = w3.lambda_norm(d, mu_d(d, 0.0))
    assert abs(val.imag) < 1e-14 * abs(val)
    assert val.real > 0


def test_lambda_negative_branch_convention():
    d, r = 3, 0.07j
    neg = w3.lambda_norm(d, mu_d(d, r).neg())
    ref = w3.lambda_norm(d, mu_d(d, -r)) * math.pi ** (d - 1) / math.gamma(d)
    assert abs(neg - ref) < 1e-12 * abs(ref)


def test_lambda_pole_signaled():
    with pytest.raises(GammaPole):
        w3.lambda_norm(0, T((-1.0, 0.0, 1.0)))


# ---------------------------------------------------------------------------
# g_component
# ---------------------------------------------------------------------------

def test_g0_product_form():
    s = (1.3 + 0.4j, 0.9 - 0.2j)
    m1, m2, m3 = MU_T.as_tuple()
    num = 1.0 + 0j
    for mi in (m1, m2, m3):
        num *= complex(cgamma((s[0] - mi) / 2)) * complex(cgamma((s[1] + mi) / 2))
    want = num / complex(cgamma((s[0] + s[1]) / 2))
    got = w3.g_component(0, 0, s, MU_T)
    assert abs(got - want) < 1e-13 * abs(want)


def test_g1_center_row_is_single_kernel():
    # at m' = 0 the ell-sum has the single ell = 0 term with binomial weight
    # one, so the row is the normalizer sqrt(2) times G~(1,(1,1,0),(0,0,1))
    s = (1.1 + 0.7j, 1.2 - 0.3j)
    got = w3.g_component(1, 0, s, MU_T)
    want = math.sqrt(2) * w3.gtilde(1, (1, 1, 0), (0, 0, 1), s, MU_T)
    assert abs(got - want) < 1e-13 * abs(want)


def test_g0_weyl_symmetry():
    s = (1.4 + 0.2j, 1.05 + 0.6j)
    base = w3.g_component(0, 0, s, MU_T)
    for w in WEYL_ALL:
        assert abs(w3.g_component(0, 0, s, weyl_act(w, MU_T)) - base) \
            < 1e-13 * abs(base)


def test_g_component_rejects_out_of_range_row():
    with pytest.raises(ValueError):
        w3.g_component(1, 2, (1.1, 1.1), MU_T)


# ---------------------------------------------------------------------------
# whittaker_min
# ---------------------------------------------------------------------------

def test_w0_exponential_decay_bound():
    ys = np.array([1.0, 1.5, 2.5, 4.0, 6.5, 10.0])
    env = ys[:, None] * ys[None, :] * np.exp(-ys[:, None] - ys[None, :])
    for trip in [(0.3j, 0.1j, -0.4j), (1.2j, -0.5j, -0.7j),
                 (2.0j, 0.0j, -2.0j), (0.0, 0.0, 0.0)]:
        grid = w3.whittaker_min_grid(0, T(trip), ys, ys)[0]
        assert float(np.max(np.abs(grid) / env)) <= DECAY_C


def test_w0_matches_residue_series_at_real_mu():
    spec = w3.MinWhittSpec(0, MU_REAL)
    for ypair, want in W0_SERIES.items():
        got = complex(w3.whittaker_min(spec, ypair)[0])
        assert abs(got - want) < 1e-9 * abs(want)
        assert abs(got.imag) < 1e-9 * abs(want)


def test_w0_jacquet_consistency_small_y():
    for trip in [(0.8, 0.0, -0.8), (0.9, 0.15, -1.05)]:
        mu = T(trip)
        lam = w3.lambda_norm(0, mu)
        spec = w3.MinWhittSpec(0, mu)
        for ypair in [(0.45, 0.6), (0.2, 0.25)]:
            jac = lam * w3.jacquet_whittaker(mu, ypair)
            mb = complex(w3.whittaker_min(spec, ypair)[0])
            assert abs(jac - mb) <= JACQUET_RTOL * abs(mb)


def test_w0_two_contour_agreement():
    spec = w3.MinWhittSpec(0, MU_T)
    a = complex(w3.whittaker_min(spec, (0.7, 1.3), s0=(1.1, 1.1))[0])
    b = complex(w3.whittaker_min(spec, (0.7, 1.3), s0=(1.7, 1.4))[0])
    assert abs(a - b) <= CONTOUR_RTOL * abs(a)


def test_w0_weyl_symmetry():
    vals = [complex(w3.whittaker_min(w3.MinWhittSpec(0, weyl_act(w, MU_T)),
                                     (0.8, 0.6))[0])
            for w in WEYL_ALL]
    ref = vals[0]
    assert max(abs(v - ref) for v in vals) <= WEYL_RTOL * abs(ref)


def test_whittaker_grid_shape_and_vector_length():
    g = w3.whittaker_min_grid(2, mu_d(2, 0.1j), np.array([0.5, 1.0]),
                              np.array([0.75]))
    assert g.shape == (5, 2, 1)
    v = w3.whittaker_min(w3.MinWhittSpec(1, MU_T), (1.0, 1.0))
    assert v.shape == (3,)


def test_whittaker_min_validation():
    with pytest.raises(ValueError):
        w3.whittaker_min(w3.MinWhittSpec(0, MU_T), (0.0, 1.0))
    with pytest.raises(ValueError):
        w3.MinWhittSpec(-1, MU_T)
    with pytest.raises(ValueError):
        w3.MinWhittSpec(3, MU_T)  # off the weight-three curve


def test_jacquet_whittaker_validation():
    with pytest.raises(ValueError):
        w3.jacquet_whittaker(MU_T, (0.5, 0.5))  # complex parameters
    with pytest.raises(ValueError):
        w3.jacquet_whittaker(T((-0.8, 0.0, 0.8)), (0.5, 0.5))  # unordered
    with pytest.raises(ValueError):
        w3.jacquet_whittaker(MU_REAL, (0.5, -0.5))


# ---------------------------------------------------------------------------
# stade_closed
# ---------------------------------------------------------------------------

def test_psi0_at_zero_parameters():
    got = w3.stade_closed((0, 0), T((0, 0, 0)), T((0, 0, 0)), 1.0)
    want = math.gamma(0.5) ** 9 / (4 * math.pi ** 3 * math.gamma(1.5))
    assert abs(got - want) < 1e-13 * abs(want)
    assert abs(got - math.pi / 2) < 1e-13


def test_psi01_symmetries():
    base = w3.stade_closed((0, 1), MU_T, MU_T2, 1.0)
    for w in WEYL_ALL:
        got = w3.stade_closed((0, 1), weyl_act(w, MU_T), MU_T2, 1.0)
        assert abs(got - base) < 1e-12 * abs(base)
    p1, p2, p3 = MU_T2.as_tuple()
    got = w3.stade_closed((0, 1), MU_T, T((p2, p1, p3)), 1.0)
    assert abs(got - base) < 1e-12 * abs(base)


def test_psi_d_fixture():
    got = w3.stade_closed((3, 3), mu_d(3, 0.1j), mu_d(3, -0.2j), 1.0)
    want = 0.13409820213240123 - 0.015222869799841025j
    assert abs(got - want) < 1e-13


def test_stade_closed_validation():
    with pytest.raises(ValueError):
        w3.stade_closed((0, 0), MU_T, MU_T2, -1.0)
    with pytest.raises(ValueError):
        w3.stade_closed((1, 2), MU_T, MU_T2, 1.0)


# ---------------------------------------------------------------------------
# stade_numeric vs stade_closed (the cross-validation matrix)
# ---------------------------------------------------------------------------

STADE_CASES = []
for _d, _rows in {
    0: [(T((0.3j, 0.1j, -0.4j)), T((0.25j, -0.05j, -0.2j)), 1.0),
        (T((0.6j, -0.2j, -0.4j)), T((0.3j, 0.1j, -0.4j)), 1.3),
        (T((0.3j, 0.1j, -0.4j)), T((0.3j, 0.1j, -0.4j)), 1.0),
        (T((0.2 + 0.3j, -0.1 + 0.1j, -0.1 - 0.4j)), T((0.25j, -0.05j, -0.2j)), 1.2),
        (T((0.9j, 0.4j, -1.3j)), T((0.1j, 0.05j, -0.15j)), 1.0)],
    1: [(T((0.3j, 0.1j, -0.4j)), T((0.25j, -0.05j, -0.2j)), 1.0),
        (T((0.3j, 0.1j, -0.4j)), T((0.3j, 0.1j, -0.4j)), 1.0),
        (T((0.5j, -0.15j, -0.35j)), T((0.2j, 0.1j, -0.3j)), 1.25),
        (T((0.15 + 0.2j, -0.05 + 0.05j, -0.1 - 0.25j)), T((0.25j, -0.05j, -0.2j)), 1.2),
        (T((0.8j, 0.3j, -1.1j)), T((0.1j, 0.05j, -0.15j)), 1.0)],
    2: [(mu_d(2, 0.1j), mu_d(2, -0.07j), 1.0),
        (mu_d(2, 0.15j), mu_d(2, 0.02j), 1.2),
        (mu_d(2, 0.1j), mu_d(2, 0.1j), 1.0),
        (mu_d(2, 0.04 + 0.05j), mu_d(2, -0.03j), 1.1),
        (mu_d(2, -0.2j), mu_d(2, 0.12j), 1.0)],
    3: [(mu_d(3, 0.09j), mu_d(3, 0.05j), 1.5),
        (mu_d(3, -0.12j), mu_d(3, 0.08j), 1.5),
        (mu_d(3, 0.09j), mu_d(3, 0.09j), 1.6),
        (mu_d(3, 0.03 + 0.06j), mu_d(3, -0.05j), 1.5),
        (mu_d(3, 0.15j), mu_d(3, 0.01j), 1.7)],
    4: [(mu_d(4, 0.11j), mu_d(4, -0.04j), 2.2),
        (mu_d(4, 0.08j), mu_d(4, 0.08j), 2.2),
        (mu_d(4, -0.13j), mu_d(4, 0.06j), 2.3),
        (mu_d(4, 0.02 + 0.03j), mu_d(4, -0.05j), 2.2),
        (mu_d(4, 0.16j), mu_d(4, 0.02j), 2.4)],
}.items():
    for _k, _row in enumerate(_rows):
        STADE_CASES.append(pytest.param((_d, _d), *_row, id=f"d{_d}-{_k}"))
STADE_CASES.append(pytest.param((0, 1), MU_T, MU_T2, 1.0, id="mixed01-0"))
STADE_CASES.append(pytest.param(
    (0, 1), T((0.5j, -0.2j, -0.3j)), T((0.15j, 0.05j, -0.2j)), 1.3,
    id="mixed01-1"))

# the weight-d pairings need Re(t) past the small-y1 flank exponent, so the
# d = 3, 4 rows pin t = 1.5 and 2.2 where the defining integral converges;
# the closed form continues to t = 1 but the quadrature cannot
@pytest.mark.parametrize("d_pair,mu,mup,t", STADE_CASES)
def test_stade_numeric_matches_closed(d_pair, mu, mup, t):
    num = w3.stade_numeric(d_pair, mu, mup, t)
    clo = w3.stade_closed(d_pair, mu, mup, t)
    assert abs(num - clo) <= STADE_RTOL * abs(clo)


# ---------------------------------------------------------------------------
# barnes_check
# ---------------------------------------------------------------------------

def test_barnes_first_half_parameters():
    lhs, rhs = w3.barnes_check("first", (0.5, 0.5, 0.5, 0.5))
    assert abs(rhs - 1.0) < 1e-14
    assert abs(lhs - rhs) < 1e-8


def test_barnes_first_complex_parameters():
    lhs, rhs = w3.barnes_check("first", (0.5 + 0.3j, 0.7 - 0.2j, 0.6, 0.45 + 0.1j))
    assert abs(lhs - rhs) < 1e-8 * abs(rhs)


def test_barnes_second_constrained():
    rng = np.random.default_rng(40923)
    for _ in range(3):
        a, b, c = 0.4 + 0.4 * rng.random(3) + 0.2j * (rng.random(3) - 0.5)
        d, e = 0.5 + 0.3 * rng.random(2)
        f = a + b + c + d + e
        lhs, rhs = w3.barnes_check("second", (a, b, c, d, e, f))
        assert abs(lhs - rhs) < 1e-8 * abs(rhs)


def test_barnes_first_symmetric_in_first_pair():
    l1, _ = w3.barnes_check("first", (0.4 + 0.1j, 0.8, 0.6, 0.5))
    l2, _ = w3.barnes_check("first", (0.8, 0.4 + 0.1j, 0.6, 0.5))
    assert abs(l1 - l2) < 1e-13 * abs(l1)


def test_barnes_second_constraint_enforced():
    with pytest.raises(ValueError):
        w3.barnes_check("second", (0.5, 0.5, 0.5, 0.5, 0.5, 1.0))
