from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import gamma as cgamma

from gl3kuz.core import (
    SIGN_PAIRS,
    SpectralParams,
    W2,
    W3,
    W4,
    W5,
    WEYL_ALL,
    WL,
    W_I,
    casimir_eigenvalues,
    mu_d,
    v_diag,
    weyl_act,
)
from gl3kuz.quadrature import (
    ContourSpec,
    Detour,
    NonConvergence,
    PoleOnPath,
    QuadratureConfig,
    contour_integral,
    tanh_sinh,
)

TOL = 1e-10
RNG_SEED = 90217


def random_mu(rng, scale=1.0):
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    return (scale * a, scale * b, -scale * a - scale * b)


# ---------------------------------------------------------------------------
# Weyl group and spectral parameters
# ---------------------------------------------------------------------------

def test_weyl_action_is_faithful():
    """Acting by v then w equals acting by the product v*w, all 36 pairs."""
    # dyadic components keep every permutation arithmetic exactly representable
    mu = (0.25 + 0.5j, 0.5 - 0.25j, -0.75 - 0.25j)
    for v in WEYL_ALL:
        for w in WEYL_ALL:
            lhs = weyl_act(w, weyl_act(v, mu))
            rhs = weyl_act(v * w, mu)
            assert lhs == rhs, (v.name, w.name)


def test_weyl_group_table():
    assert (W3 * W2).name == W4.name
    assert (W2 * W3).name == W5.name
    assert (W2 * W3 * W2).name == WL.name
    assert (W3 * W2 * W3).name == WL.name
    for w in WEYL_ALL:
        assert (w * W_I).name == w.name
        assert (W_I * w).name == w.name


def test_weyl_action_matches_matrix_conjugation():
    """p_{mu^w}(a) = p_mu(w a w^{-1}) on diagonal a, checked numerically."""
    rng = np.random.default_rng(RNG_SEED)
    mu = random_mu(rng)
    a = np.diag([1.7, 0.6, 1.0 / (1.7 * 0.6)])
    for w in WEYL_ALL:
        mw = w.matrix
        diag = np.diag(mw @ a @ np.linalg.inv(mw))
        p_lhs = np.prod([complex(abs(diag[i])) ** mu[i] for i in range(3)])
        muw = weyl_act(w, mu)
        p_rhs = np.prod([complex(abs(np.diag(a)[i])) ** muw[i] for i in range(3)])
        assert abs(p_lhs - p_rhs) < 1e-12 * abs(p_lhs), w.name


def test_mu_d_basics():
    assert mu_d(2, 0).as_tuple() == (0.5, -0.5, 0)
    rng = np.random.default_rng(RNG_SEED + 1)
    for _ in range(5):
        d = int(rng.integers(2, 12))
        r = complex(rng.normal(), rng.normal())
        m = mu_d(d, r)
        assert abs(sum(m)) < 1e-14
        neg = tuple(-x for x in weyl_act(W2, mu_d(d, r)))
        m2 = mu_d(d, -r)
        assert max(abs(a - b) for a, b in zip(neg, m2)) < 1e-14
    with pytest.raises(ValueError):
        mu_d(1, 0.3)


def test_casimir_eigenvalues():
    assert casimir_eigenvalues((0, 0, 0)) == (1, 0)
    rng = np.random.default_rng(RNG_SEED + 2)
    mu = random_mu(rng)
    l1, l2 = casimir_eigenvalues(mu)
    for w in WEYL_ALL:
        assert casimir_eigenvalues(weyl_act(w, mu)) == pytest.approx((l1, l2))
    # discrete-type parameter: lambda_1 sign governed by 3t^2 vs ((d-1)/2)^2 - 1
    d, t = 6, 0.4
    assert 3 * t * t < ((d - 1) / 2) ** 2 - 1
    l1, _ = casimir_eigenvalues(mu_d(d, 1j * t))
    assert l1.real < 0


def test_spectral_params_type():
    sp = SpectralParams.from_triple((0.3j, 0.1j, -0.4j))
    assert sp.mu3 == pytest.approx(-0.4j)
    assert sp.as_tuple() == (0.3j, 0.1j, -0.4j)
    assert sp.conj().as_tuple() == (-0.3j, -0.1j, 0.4j)
    assert sp.is_tempered()
    with pytest.raises(ValueError):
        SpectralParams.from_triple((0.3, 0.1, 0.2))
    r = SpectralParams.from_triple(mu_d(4, 0.25j)).r_of_mu_d(4)
    assert r == pytest.approx(0.25j)


def test_sign_pairs_and_v_diag():
    assert len(SIGN_PAIRS) == 4
    for eps in SIGN_PAIRS:
        v = v_diag(eps)
        assert abs(np.linalg.det(v) - eps[0] * eps[1] * (eps[0] * eps[1])) < 1e-15
        assert v[0, 0] == eps[0] and v[2, 2] == eps[1]


# ---------------------------------------------------------------------------
# contour integration
# ---------------------------------------------------------------------------

def test_contour_gaussian_antiderivative():
    """Integral of exp(s^2) along Re s = 0 against the closed form."""
    spec = ContourSpec(real_part=0.0, height_cut=30.0)
    val = contour_integral(lambda s: np.exp(s * s), (spec,))
    # substitute s = it: integral = i * int exp(-t^2) dt = i sqrt(pi)
    assert abs(val - 1j * math.sqrt(math.pi)) < TOL


def test_contour_zero_integrand():
    spec = ContourSpec(real_part=0.3)
    assert contour_integral(lambda s: np.zeros_like(s), (spec,)) == 0


def test_barnes_first_lemma_half():
    """Barnes' first lemma at a=b=c=d=1/2: the contour value is Gamma(1)^4/Gamma(2)."""
    a = b = c = d = 0.5

    def f(s):
        return (cgamma(a + s) * cgamma(b + s) * cgamma(c - s) * cgamma(d - s)
                / (2j * math.pi))

    spec = ContourSpec(real_part=0.0, height_cut=60.0)
    val = contour_integral(f, (spec,))
    assert abs(val - 1.0) < 1e-9


def test_contour_deformation_invariance():
    """Same vertical line, different detour radii: results agree within 2 tol."""
    def f(s):
        return cgamma(s) * np.exp(s * s)

    base = ContourSpec(real_part=0.0, detours=(Detour(0.0, 0.125, "right"),),
                       height_cut=30.0)
    alt = ContourSpec(real_part=0.0, detours=(Detour(0.0, 0.25, "right"),),
                      height_cut=30.0)
    v1 = contour_integral(f, (base,), poles=(0.0,))
    v2 = contour_integral(f, (alt,), poles=(0.0,))
    assert abs(v1 - v2) <= 2 * TOL
    # both dodge the pole rightwards, so they also equal the line at Re s = 1/2
    line = ContourSpec(real_part=0.5, height_cut=30.0)
    v3 = contour_integral(f, (line,), poles=(0.0,))
    assert abs(v1 - v3) <= 4 * TOL


def test_detour_picks_up_residue():
    """1/s along Re s = 0 with right vs left detour differs by 2 pi i."""
    right = ContourSpec(real_part=0.0, detours=(Detour(0.0, 0.125, "right"),))
    left = ContourSpec(real_part=0.0, detours=(Detour(0.0, 0.125, "left"),))
    vr = contour_integral(lambda s: 1.0 / s, (right,), poles=(0.0,))
    vl = contour_integral(lambda s: 1.0 / s, (left,), poles=(0.0,))
    assert abs((vr - vl) - 2j * math.pi) < 1e-9


def test_pole_on_path_raises():
    spec = ContourSpec(real_part=0.0)
    with pytest.raises(PoleOnPath):
        contour_integral(lambda s: 1.0 / s, (spec,), poles=(0.0,))


def test_double_contour_separable_product():
    """Separable two-variable integrand equals the product of 1-d values."""
    spec1 = ContourSpec(real_part=0.0, height_cut=30.0)
    spec2 = ContourSpec(real_part=0.0, height_cut=30.0)

    def f(s1, s2):
        return np.exp(s1 * s1) * np.exp(s2 * s2)

    val = contour_integral(f, (spec1, spec2))
    assert abs(val - (1j * math.sqrt(math.pi)) ** 2) < 1e-8


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)
    with pytest.raises(ValueError):
        Detour(0.0, -1.0, "left")
    with pytest.raises(ValueError):
        ContourSpec(real_part=0.0, detours=(Detour(0.0, 1.0, "up"),))
    with pytest.raises(ValueError):
        # overlapping detours
        ContourSpec(real_part=0.0,
                    detours=(Detour(0.0, 0.5, "left"), Detour(0.3j, 0.5, "left")))


def test_tanh_sinh_endpoint_singularity():
    cfg = QuadratureConfig()
    val = tanh_sinh(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0, cfg)
    assert abs(val - 2.0) < 1e-13
    val = tanh_sinh(lambda x: np.log(x), 0.0, 1.0, cfg)
    assert abs(val + 1.0) < 1e-13


def test_nonconvergence_on_rough_integrand():
    cfg = QuadratureConfig(tol_abs=1e-14, tol_rel=1e-14, max_subdivisions=2)

    def noisy(s):
        return np.where(np.imag(s) > 0, np.sign(np.sin(57.0 / (np.abs(s) + 1e-3))), 1.0)

    spec = ContourSpec(real_part=0.0, height_cut=20.0, tol_abs=1e-14, tol_rel=1e-14)
    with pytest.raises(NonConvergence):
        contour_integral(noisy, (spec,), cfg=cfg)
