"""Long-element GL(3) Bessel kernels K^d in every sign and weight class.

Three independent evaluation routes are provided and cross-checked:

* a double power series for the entire function J(y, mu), combined over
  Weyl images with trigonometric denominators to produce K^0 and K^1, and
  a three-term signed combination for the discrete-weight kernels (d >= 2);
* a two-dimensional inverse Mellin transform of the closed-form double
  Mellin transform, integrated over bent contours whose 45-degree wings
  restore absolute convergence where the vertical decay is only polynomial;
* double integrals of classical Bessel kernels J^+-_nu and K-tilde_nu
  against the weight u^{3 mu_2} du/u, which converge on the tempered axis.

Conventions: y = (y1, y2) is a signed pair, x_i = 4 pi^2 y_i, and the
kernels are normalized so that for sgn(y) = (+,+) and d >= 2 the kernel
vanishes identically.  The iota involution K^d(y, mu) =
K^d((y2, y1), -mu^{w2}) holds in every class and is used to route the
(-,+) sign pair through (+,-) where a representation needs it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .core import (
    SpectralParams,
    W2,
    W3,
    W4,
    W5,
    WEYL_STAB3,
    WL,
    W_I,
    as_mu,
    cgamma,
    cloggamma,
    crgamma,
    mu_d,
    weyl_act,
)
from .gl2special import J_IM_ORDER_MAX, K_TAIL_EXPONENT, gl2_bessel
from .quadrature import (
    ContourSpec,
    NonConvergence,
    PoleOnPath,
    QuadratureConfig,
    build_path,
    integrate_segment,
    oscillatory_tail,
    tanh_sinh,
)

FOUR_PI_SQ = 4.0 * math.pi ** 2

# power series controls
SERIES_TOL = 1e-11
SERIES_MAX_TERMS = 84        # float64 cap; Gamma(2N-1+|c|) must stay finite
SERIES_ARG_CAP = 420.0       # |4 pi^2 y| beyond this needs impractical precision
SERIES_MAX_DPS = 90

# trigonometric-wall handling
WALL_EPS = 0.02              # |sin| or |cos| below this counts as a wall
WALL_STEP = 0.05             # base step of the two-level extrapolation

# inverse Mellin controls
IM_SIGMA = 0.35              # default vertical line; clears tempered ladders
IM_SIGMA_MAX = 0.45          # keep s1 + s2 clear of the diagonal pole at 1
IM_PANEL = 1.0               # Gauss-Legendre panel length along the path
IM_TARGET_EXP = 40.0         # endpoint integrand magnitude target e^{-40}
IM_MAX_WING = 30.0           # longer wings mean the argument is large enough
                             # that the series and double-Bessel routes win
PP_FLOOR_EXP = 21.0          # (+,+) values ~ e^{-4pi(sqrt y1 + sqrt y2)} sink
                             # below float64 cancellation noise past this

# method selection
AUTO_SERIES_ARG = 30.0       # Auto uses the series when max |4 pi^2 y_i| <= this

_POLE_NEAR = 0.05


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignedY:
    """A signed argument pair (y1, y2) with both entries nonzero."""

    y1: float
    y2: float

    def __post_init__(self):
        if self.y1 == 0.0 or self.y2 == 0.0:
            raise ValueError("both components of y must be nonzero")

    @property
    def eps(self) -> Tuple[int, int]:
        return (1 if self.y1 > 0 else -1, 1 if self.y2 > 0 else -1)

    @property
    def mag(self) -> Tuple[float, float]:
        return (abs(self.y1), abs(self.y2))

    def iota(self) -> "SignedY":
        """The involuted argument (y2, y1)."""
        return SignedY(self.y2, self.y1)

    @classmethod
    def from_parts(cls, eps: Tuple[int, int], mag: Tuple[float, float]) -> "SignedY":
        e1, e2 = eps
        if e1 not in (-1, 1) or e2 not in (-1, 1):
            raise ValueError("signs must be +-1")
        m1, m2 = mag
        if m1 <= 0 or m2 <= 0:
            raise ValueError("magnitudes must be positive")
        return cls(e1 * m1, e2 * m2)

    def as_tuple(self) -> Tuple[float, float]:
        return (self.y1, self.y2)


def as_signed_y(y) -> SignedY:
    if isinstance(y, SignedY):
        return y
    y1, y2 = y
    return SignedY(float(y1), float(y2))


class BesselMethod(Enum):
    SERIES = "series"
    INVERSE_MELLIN = "inverse-mellin"
    DOUBLE_BESSEL = "double-bessel"
    AUTO = "auto"


def _as_method(method) -> BesselMethod:
    if isinstance(method, BesselMethod):
        return method
    return BesselMethod(str(method))


# ---------------------------------------------------------------------------
# the power series for J
# ---------------------------------------------------------------------------

def _gamma_top(z: np.ndarray) -> np.ndarray:
    """Gamma(z) with the value 0 substituted at nonpositive integers.

    In the double series the numerator gamma can only pole where two of the
    reciprocal-gamma factors vanish, so the limiting term is zero; replacing
    the pole value by zero evaluates that limit.
    """
    z = np.asarray(z, dtype=complex)
    near = (np.abs(z.imag) < 1e-9) & (z.real < 0.5) \
        & (np.abs(z.real - np.round(z.real)) < 1e-9)
    if np.any(near):
        out = np.where(near, 0.0, cgamma(np.where(near, 1.0, z)))
        return out
    return cgamma(z)


def _series_axes(mu: SpectralParams):
    m1, m2, m3 = mu.as_tuple()
    c = m1 - m3
    a_shifts = (c, m2 - m3, 0.0)
    b_shifts = (0.0, m1 - m2, c)
    return c, a_shifts, b_shifts


def _j_prefactor(x1: float, x2: float, mu: SpectralParams) -> complex:
    m1, _, m3 = mu.as_tuple()
    return complex(np.exp((1.0 - m3) * math.log(abs(x1))
                          + (1.0 + m1) * math.log(abs(x2))))


def _j_series_f64(x1: float, x2: float, mu: SpectralParams,
                  tol: float) -> Tuple[complex, float, bool]:
    """Float64 double series.  Returns (sum, max term magnitude, converged).

    The sum excludes the overall prefactor; ``converged`` is False when the
    truncation tail failed to drop below the tolerance at the term cap.
    """
    c, a_shifts, b_shifts = _series_axes(mu)
    n_terms = 24
    while True:
        n = np.arange(n_terms)
        rav = crgamma(n + 1.0)
        for sh in a_shifts[:2]:
            rav = rav * crgamma(n + sh + 1.0)
        rav = rav * np.power(complex(x1), n)
        rbv = crgamma(n + 1.0)
        for sh in b_shifts[1:]:
            rbv = rbv * crgamma(n + sh + 1.0)
        rbv = rbv * np.power(complex(x2), n)
        gcv = _gamma_top(np.arange(2 * n_terms - 1) + c + 1.0)
        conv = np.convolve(rav, rbv)
        absconv = np.convolve(np.abs(rav), np.abs(rbv))
        terms = gcv * conv
        mags = np.abs(gcv) * absconv
        total = complex(np.sum(terms))
        max_term = float(np.max(mags)) if len(mags) else 0.0
        tail = float(np.sum(mags[-6:]))
        scale = max(abs(total), max_term * 1e-16)
        if tail <= 0.01 * tol * max(scale, 1e-300):
            return total, max_term, True
        if n_terms >= SERIES_MAX_TERMS:
            return total, max_term, False
        n_terms = min(SERIES_MAX_TERMS, (3 * n_terms) // 2)


def _j_series_mp(x1: float, x2: float, mu: SpectralParams, dps: int,
                 tol: float):
    """Arbitrary-precision double series; returns an mpmath complex."""
    with mpmath.workdps(dps):
        mm1, mm2, mm3 = (mpmath.mpmathify(m) for m in mu.as_tuple())
        xx1, xx2 = mpmath.mpf(x1), mpmath.mpf(x2)
        c = mm1 - mm3
        ash = (c, mm2 - mm3, mpmath.mpf(0))
        bsh = (mpmath.mpf(0), mm1 - mm2, c)

        def gnum(z):
            if mpmath.isint(z) and mpmath.re(z) <= 0:
                return mpmath.mpc(0)
            return mpmath.gamma(z)

        n_terms = 30
        prev = None
        while True:
            gc = [gnum(m + c + 1) for m in range(2 * n_terms - 1)]
            ra, rb = [], []
            p1 = p2 = mpmath.mpc(1)
            for n in range(n_terms):
                ra.append(p1 * mpmath.rgamma(n + 1) * mpmath.rgamma(n + ash[0] + 1)
                          * mpmath.rgamma(n + ash[1] + 1))
                rb.append(p2 * mpmath.rgamma(n + 1) * mpmath.rgamma(n + bsh[1] + 1)
                          * mpmath.rgamma(n + bsh[2] + 1))
                p1 *= xx1
                p2 *= xx2
            tot = mpmath.mpc(0)
            tail = mpmath.mpf(0)
            for n1 in range(n_terms):
                row = mpmath.fsum(gc[n1 + n2] * rb[n2] for n2 in range(n_terms))
                tot += ra[n1] * row
            for m in range(2 * n_terms - 7, 2 * n_terms - 1):
                hi = min(m, n_terms - 1)
                tail += mpmath.fsum(abs(gc[m] * ra[m - n2] * rb[n2])
                                    for n2 in range(max(0, m - n_terms + 1), hi + 1))
            if prev is not None and tail <= 0.01 * tol * max(abs(tot), mpmath.mpf("1e-300")):
                pref = (mpmath.power(abs(xx1), 1 - mm3)
                        * mpmath.power(abs(xx2), 1 + mm1))
                return pref * tot
            if n_terms >= 150:
                raise NonConvergence("series truncation stalled at the "
                                     "high-precision term cap")
            prev = tot
            n_terms = (3 * n_terms) // 2


def _series_guard(x1: float, x2: float):
    if max(abs(x1), abs(x2)) > SERIES_ARG_CAP:
        raise NonConvergence(
            f"|4 pi^2 y| = {max(abs(x1), abs(x2)):.1f} exceeds the series cap "
            f"{SERIES_ARG_CAP:.0f}; use the double-Bessel or inverse-Mellin route")


def _escalation_dps(max_term: float, target: float) -> int:
    dps = 16 + int(math.ceil(math.log10(max(max_term, 1.0)
                                        / max(target, 1e-300)))) + 10
    if dps > SERIES_MAX_DPS:
        raise NonConvergence(
            f"series would need about {dps} digits; argument too large")
    return max(dps, 20)


def j_leading_term(y, mu) -> complex:
    """The (0,0) term of the series: the small-|y| leading asymptotic."""
    ys = as_signed_y(y)
    mu = as_mu(mu)
    m1, m2, m3 = mu.as_tuple()
    x1, x2 = FOUR_PI_SQ * ys.y1, FOUR_PI_SQ * ys.y2
    pref = _j_prefactor(x1, x2, mu)
    return pref * complex(crgamma(1.0 + m1 - m2) * crgamma(1.0 + m2 - m3)
                          * crgamma(1.0 + m1 - m3))


def j_series(y, mu, tol: float = 1e-10, n_max: Optional[int] = None) -> complex:
    """The entire-function factor J(y, mu) by its double power series.

    ``tol`` is a relative target.  The float64 path tracks the largest term
    and escalates to arbitrary precision when alternating cancellation eats
    the requested digits; NonConvergence signals arguments too large for
    the series to be practical.  ``n_max`` forces a fixed truncation (0
    reproduces the leading term exactly) and is meant for diagnostics.
    """
    ys = as_signed_y(y)
    mu = as_mu(mu)
    x1, x2 = FOUR_PI_SQ * ys.y1, FOUR_PI_SQ * ys.y2
    if n_max is not None:
        if n_max == 0:
            return j_leading_term(ys, mu)
        c, a_shifts, b_shifts = _series_axes(mu)
        n = np.arange(n_max + 1)
        rav = crgamma(n + 1.0) * crgamma(n + a_shifts[0] + 1.0) \
            * crgamma(n + a_shifts[1] + 1.0) * np.power(complex(x1), n)
        rbv = crgamma(n + 1.0) * crgamma(n + b_shifts[1] + 1.0) \
            * crgamma(n + b_shifts[2] + 1.0) * np.power(complex(x2), n)
        gcv = _gamma_top(np.arange(2 * n_max + 1) + c + 1.0)
        return _j_prefactor(x1, x2, mu) * complex(np.sum(gcv * np.convolve(rav, rbv)))
    _series_guard(x1, x2)
    total, max_term, ok = _j_series_f64(x1, x2, mu, tol)
    noise = max_term * 3e-16
    if ok and noise <= tol * abs(total):
        return _j_prefactor(x1, x2, mu) * total
    dps = _escalation_dps(max_term, tol * max(abs(total), max_term * 1e-16))
    return complex(_j_series_mp(x1, x2, mu, dps, tol))


# ---------------------------------------------------------------------------
# trigonometric walls
# ---------------------------------------------------------------------------

def _perturb_mu(mu: SpectralParams, eps: float) -> SpectralParams:
    # direction chosen so every pairwise difference moves
    return SpectralParams(mu.mu1 + 1j * eps, mu.mu2 + 0.6180339887498949j * eps)


def _richardson(f: Callable[[float], complex], step: float) -> complex:
    """Two-level even-order extrapolation of f(eps) toward eps = 0."""
    a1 = 0.5 * (f(step) + f(-step))
    a2 = 0.5 * (f(step / 2.0) + f(-step / 2.0))
    return (4.0 * a2 - a1) / 3.0


def _k_denominator(d: int, mu: SpectralParams) -> Tuple[complex, float]:
    m1, m2, m3 = mu.as_tuple()
    if d == 0:
        factors = [np.sin(np.pi / 2.0 * (m1 - m2)),
                   np.sin(np.pi / 2.0 * (m1 - m3)),
                   np.sin(np.pi / 2.0 * (m2 - m3))]
    else:
        factors = [np.sin(np.pi / 2.0 * (m1 - m2)),
                   np.cos(np.pi / 2.0 * (m1 - m3)),
                   np.cos(np.pi / 2.0 * (m2 - m3))]
    den = 16.0 * math.pi * complex(np.prod(factors))
    return den, float(min(abs(f) for f in factors))


# ---------------------------------------------------------------------------
# K^d via the series route
# ---------------------------------------------------------------------------

_PAIR_WEYLS = ((W_I, W2), (W4, WL), (W5, W3))


def _k_series_principal(d: int, ys: SignedY, mu: SpectralParams,
                        tol: float, wall_ok: bool = False) -> complex:
    """K^0 or K^1 from the six Weyl images of the power series."""
    e1, e2 = ys.eps
    den, wall = _k_denominator(d, mu)
    if wall < WALL_EPS and not wall_ok:
        # removable singularity of num/den: evaluate at four perturbed
        # parameters and extrapolate the even expansion back to zero
        return _richardson(
            lambda t: _k_series_principal(d, ys, _perturb_mu(mu, t), tol,
                                          wall_ok=True),
            WALL_STEP)
    x1, x2 = FOUR_PI_SQ * ys.y1, FOUR_PI_SQ * ys.y2
    _series_guard(x1, x2)
    coeffs = (1.0, 1.0, 1.0) if d == 0 else (float(e2), float(e1), float(e1 * e2))
    vals: Dict[str, complex] = {}
    max_term = 0.0
    all_ok = True
    for wa, wb in _PAIR_WEYLS:
        for w in (wa, wb):
            muw = weyl_act(w, mu)
            t, m, ok = _j_series_f64(x1, x2, muw, tol)
            all_ok = all_ok and ok
            vals[w.name] = _j_prefactor(x1, x2, muw) * t
            max_term += m * abs(_j_prefactor(x1, x2, muw))
    num = sum(cf * (vals[wa.name] - vals[wb.name])
              for cf, (wa, wb) in zip(coeffs, _PAIR_WEYLS))
    noise = max_term * 3e-16
    if all_ok and noise <= tol * abs(num):
        return -num / den
    # cancellation across the Weyl images: redo everything at high precision
    dps = _escalation_dps(max_term, tol * max(abs(num), max_term * 1e-30))
    with mpmath.workdps(dps):
        mp_vals = {w.name: _j_series_mp(x1, x2, weyl_act(w, mu), dps, tol)
                   for pair in _PAIR_WEYLS for w in pair}
        num_mp = mpmath.fsum(
            mpmath.mpf(cf) * (mp_vals[wa.name] - mp_vals[wb.name])
            for cf, (wa, wb) in zip(coeffs, _PAIR_WEYLS))
        return complex(num_mp) / den


def _k_series_discrete(d: int, ys: SignedY, mu: SpectralParams, r: complex,
                       tol: float, wall_ok: bool = False) -> complex:
    """K^d for d >= 2 from at most three series evaluations."""
    e1, e2 = ys.eps
    if e1 > 0 and e2 > 0:
        return 0.0 + 0.0j
    cosfac = complex(np.cos(np.pi * (d / 2.0 + 3.0 * r)))
    if abs(cosfac) < WALL_EPS and not wall_ok:
        return _richardson(
            lambda t: _k_series_discrete(d, ys, mu_d(d, r + 1j * t), r + 1j * t,
                                         tol, wall_ok=True),
            WALL_STEP / 3.0)
    x1, x2 = FOUR_PI_SQ * ys.y1, FOUR_PI_SQ * ys.y2
    _series_guard(x1, x2)
    pieces = []
    if e1 < 0:
        pieces.append((float(e2) ** d, weyl_act(W4, mu)))
    if e2 < 0:
        pieces.append((float(-e1) ** d, mu))
    if e1 * e2 < 0:
        pieces.append((-float(-e1) ** d, weyl_act(W3, mu)))
    num = 0.0 + 0.0j
    max_term = 0.0
    all_ok = True
    for cf, muw in pieces:
        t, m, ok = _j_series_f64(x1, x2, muw, tol)
        all_ok = all_ok and ok
        pref = _j_prefactor(x1, x2, muw)
        num += cf * pref * t
        max_term += m * abs(pref)
    noise = max_term * 3e-16
    den = -4.0 * math.pi * cosfac
    if all_ok and noise <= tol * abs(num):
        return num / den
    dps = _escalation_dps(max_term, tol * max(abs(num), max_term * 1e-30))
    with mpmath.workdps(dps):
        num_mp = mpmath.fsum(mpmath.mpf(cf) * _j_series_mp(x1, x2, muw, dps, tol)
                             for cf, muw in pieces)
        return complex(num_mp) / den


def _k_series(d: int, ys: SignedY, mu: SpectralParams, tol: float) -> complex:
    if d >= 2:
        r = mu.r_of_mu_d(d)
        return _k_series_discrete(d, ys, mu, r, tol)
    return _k_series_principal(d, ys, mu, tol)


# ---------------------------------------------------------------------------
# Stirling exponent of the Mellin integrand
# ---------------------------------------------------------------------------

def stirling_exponent(eps: Tuple[int, int], u: Tuple[float, float],
                      t: Tuple[float, float, float]) -> float:
    """Exponential decay rate of the double Mellin integrand.

    ``u`` holds the imaginary parts of (s1, s2) and ``t`` the imaginary
    parts of mu (summing to zero).  The integrand decays like
    exp(-(pi/2) h) times powers; h is nonnegative everywhere, grows
    linearly in ||u|| for the (+,+) pair, and vanishes on cones of
    directions for every other sign pair.
    """
    e1, e2 = eps
    u1, u2 = u
    t1, t2, t3 = t
    if abs(t1 + t2 + t3) > 1e-9 * (1.0 + abs(t1) + abs(t2) + abs(t3)):
        raise ValueError("t must sum to zero")
    return (-e2 * abs(t1 - t2) - e1 * e2 * abs(t1 - t3) - e1 * abs(t2 - t3)
            - e1 * e2 * abs(u1 + u2)
            + e1 * e2 * abs(u1 - t1) + e1 * abs(u1 - t2) + abs(u1 - t3)
            + abs(u2 + t1) + e2 * abs(u2 + t2) + e1 * e2 * abs(u2 + t3))


# ---------------------------------------------------------------------------
# the double Mellin transform
# ---------------------------------------------------------------------------

def _q_factor(d: int, s):
    """Q(d, s) = Gamma((d-1)/2 + s) / Gamma((d+1)/2 - s), vectorized."""
    s = np.asarray(s, dtype=complex)
    return np.exp(cloggamma((d - 1) / 2.0 + s) - cloggamma((d + 1) / 2.0 - s))


class _HatTerm:
    """One separated term const * a(s1) * b(s2) * C(s1 + s2) of the hat."""

    __slots__ = ("const", "afun", "bfun", "ckind")

    def __init__(self, const: complex, afun, bfun, ckind: str):
        self.const = const
        self.afun = afun
        self.bfun = bfun
        self.ckind = ckind  # "rgamma" -> 1/Gamma(u); "gamma1m" -> Gamma(1-u)


def _coupling(ckind: str, u):
    if ckind == "rgamma":
        return crgamma(u)
    return np.exp(cloggamma(1.0 - np.asarray(u, dtype=complex)))


def _sinpi(z):
    return np.sin(np.pi * np.asarray(z, dtype=complex))


def _hat_terms_principal(d: int, v: Tuple[int, int],
                         mu: SpectralParams) -> List[_HatTerm]:
    e1, e2 = v
    m = mu.as_tuple()

    def gprod_a(shifts):
        def f(s1):
            s1 = np.asarray(s1, dtype=complex)
            tot = cloggamma(s1 - m[0]) + cloggamma(s1 - m[1]) + cloggamma(s1 - m[2])
            out = np.exp(tot)
            for sh in shifts:
                out = out * _sinpi(s1 - sh)
            return out
        return f

    def gprod_b(shifts):
        def f(s2):
            s2 = np.asarray(s2, dtype=complex)
            tot = cloggamma(s2 + m[0]) + cloggamma(s2 + m[1]) + cloggamma(s2 + m[2])
            out = np.exp(tot)
            for sh in shifts:
                out = out * _sinpi(s2 + sh)
            return out
        return f

    if v == (1, 1):
        # the sine sum collapses against the denominator by a half-angle
        # split, leaving an everywhere-finite trigonometric product
        h12 = np.pi / 2.0 * (m[0] - m[1])
        h13 = np.pi / 2.0 * (m[0] - m[2])
        h23 = np.pi / 2.0 * (m[1] - m[2])
        if d == 0:
            c_sum = complex(np.cos(h12) * np.cos(h13) * np.cos(h23))
        else:
            c_sum = complex(np.cos(h12) * np.sin(h13) * np.sin(h23))
        const = c_sum / (2.0 * math.pi ** 4)
        return [_HatTerm(const, gprod_a(()), gprod_b(()), "rgamma")]

    den, wall = _k_denominator(d, mu)
    if wall < WALL_EPS:
        raise ValueError(
            "mu is within a trigonometric wall of the Mellin transform; "
            "perturb the spectral parameters")
    den = den / (16.0 * math.pi)  # bare product of the three trig factors
    base = 1.0 / (16.0 * math.pi ** 4 * den)
    coeffs = (1.0, 1.0, 1.0) if d == 0 else (float(e2), float(e1), float(e1 * e2))
    terms: List[_HatTerm] = []
    for cf, w in zip(coeffs, WEYL_STAB3):
        mw = weyl_act(w, mu).as_tuple()
        if v == (-1, -1):
            const = base * cf * complex(_sinpi(mw[0] - mw[2]))
            terms.append(_HatTerm(const, gprod_a((mw[1],)), gprod_b((mw[1],)),
                                  "rgamma"))
        elif v == (1, -1):
            const = base * cf * complex(_sinpi(mw[1] - mw[2])) / math.pi
            terms.append(_HatTerm(const, gprod_a((mw[0],)),
                                  gprod_b((mw[1], mw[2])), "gamma1m"))
        else:  # (-1, +1)
            const = base * cf * complex(_sinpi(mw[2] - mw[0])) / math.pi
            terms.append(_HatTerm(const, gprod_a((mw[0], mw[2])),
                                  gprod_b((mw[1],)), "gamma1m"))
    return terms


def _hat_terms_discrete(d: int, v: Tuple[int, int], mu: SpectralParams,
                        r: complex) -> List[_HatTerm]:
    e1, e2 = v
    if v == (1, 1):
        return []
    base = complex((-e1 * e2) ** d) / (4.0 * math.pi ** 2)

    def qa(extra_shift=None, recip_shift=None):
        def f(s1):
            s1 = np.asarray(s1, dtype=complex)
            out = _q_factor(d, s1 - r)
            if extra_shift is not None:
                out = out * np.exp(cloggamma(s1 + extra_shift))
            if recip_shift is not None:
                out = out * crgamma(recip_shift - s1)
            return out
        return f

    def qb(extra_shift=None, recip_shift=None):
        def f(s2):
            s2 = np.asarray(s2, dtype=complex)
            out = _q_factor(d, s2 + r)
            if extra_shift is not None:
                out = out * np.exp(cloggamma(s2 + extra_shift))
            if recip_shift is not None:
                out = out * crgamma(recip_shift - s2)
            return out
        return f

    if v == (1, -1):
        # B(s1 + 2r, 1 - s1 - s2) = G(s1+2r) G(1-u) / G(1 + 2r - s2)
        return [_HatTerm(base, qa(extra_shift=2.0 * r),
                         qb(recip_shift=1.0 + 2.0 * r), "gamma1m")]
    if v == (-1, 1):
        # B(s2 - 2r, 1 - s1 - s2) = G(s2-2r) G(1-u) / G(1 - 2r - s1)
        return [_HatTerm(base, qa(recip_shift=1.0 - 2.0 * r),
                         qb(extra_shift=-2.0 * r), "gamma1m")]
    # (-1,-1): B(s1 + 2r, s2 - 2r) = G(s1+2r) G(s2-2r) / G(u)
    return [_HatTerm(base, qa(extra_shift=2.0 * r), qb(extra_shift=-2.0 * r),
                     "rgamma")]


def _hat_terms(d: int, v: Tuple[int, int], mu: SpectralParams) -> List[_HatTerm]:
    if d >= 2:
        r = mu.r_of_mu_d(d)
        return _hat_terms_discrete(d, v, mu, r)
    return _hat_terms_principal(d, v, mu)


def mellin_hat_poles(d: int, v: Tuple[int, int], mu) -> Dict[str, Tuple[complex, ...]]:
    """Pole ladder heads of the double Mellin transform.

    ``s1`` and ``s2`` ladders descend by one from each head; the
    ``diagonal`` heads are values of s1 + s2 ascending by one.
    """
    mu = as_mu(mu)
    v = (int(v[0]), int(v[1]))
    if d >= 2:
        r = mu.r_of_mu_d(d)
        head = r - (d - 1) / 2.0
        if v == (1, 1):
            return {"s1": (), "s2": (), "diagonal": ()}
        if v == (1, -1):
            return {"s1": (head, -2.0 * r), "s2": (-r - (d - 1) / 2.0,),
                    "diagonal": (1.0 + 0.0j,)}
        if v == (-1, 1):
            return {"s1": (head,), "s2": (-r - (d - 1) / 2.0, 2.0 * r),
                    "diagonal": (1.0 + 0.0j,)}
        return {"s1": (head, -2.0 * r), "s2": (-r - (d - 1) / 2.0, 2.0 * r),
                "diagonal": ()}
    m = mu.as_tuple()
    diag = (1.0 + 0.0j,) if v in ((1, -1), (-1, 1)) else ()
    return {"s1": tuple(m), "s2": tuple(-x for x in m), "diagonal": diag}


def _pole_distance(d: int, v: Tuple[int, int], mu: SpectralParams,
                   s1: complex, s2: complex) -> Tuple[float, complex]:
    fams = mellin_hat_poles(d, v, mu)
    best = (math.inf, 0.0 + 0.0j)
    for head in fams["s1"]:
        ell = max(0, round((head - s1).real))
        for l in (ell - 1, ell, ell + 1):
            if l < 0:
                continue
            p = head - l
            if abs(s1 - p) < best[0]:
                best = (abs(s1 - p), p)
    for head in fams["s2"]:
        ell = max(0, round((head - s2).real))
        for l in (ell - 1, ell, ell + 1):
            if l < 0:
                continue
            p = head - l
            if abs(s2 - p) < best[0]:
                best = (abs(s2 - p), p)
    for head in fams["diagonal"]:
        u = s1 + s2
        ell = max(0, round((u - head).real))
        for l in (ell - 1, ell, ell + 1):
            if l < 0:
                continue
            p = head + l
            if abs(u - p) < best[0]:
                best = (abs(u - p), p)
    return best


def bessel_k_mellin_hat(d: int, s, v, mu) -> complex:
    """The double Mellin transform of K^d at s = (s1, s2) and sign pair v."""
    mu = as_mu(mu)
    v = (int(v[0]), int(v[1]))
    s1, s2 = complex(s[0]), complex(s[1])
    if d >= 2 and v == (1, 1):
        mu.r_of_mu_d(d)
        return 0.0 + 0.0j
    dist, pole = _pole_distance(d, v, mu, s1, s2)
    if dist < _POLE_NEAR:
        raise PoleOnPath(f"s = ({s1}, {s2}) lies within {_POLE_NEAR} of the "
                         f"transform pole at {pole}")
    total = 0.0 + 0.0j
    for term in _hat_terms(d, v, mu):
        total += (term.const * complex(term.afun(np.array([s1]))[0])
                  * complex(term.bfun(np.array([s2]))[0])
                  * complex(_coupling(term.ckind, np.array([s1 + s2]))[0]))
    return total


# ---------------------------------------------------------------------------
# inverse Mellin transform
# ---------------------------------------------------------------------------

_GL16 = np.polynomial.legendre.leggauss(16)


def _contour_nodes(spec: ContourSpec, panel: float):
    """Gauss-Legendre nodes and complex weights along the whole path."""
    xg, wg = _GL16
    pts, wts = [], []
    for piece in build_path(spec):
        if piece[0] == "seg":
            _, a, b = piece
            length = abs(b - a)
            npan = max(1, int(math.ceil(length / panel)))
            edges = np.linspace(0.0, 1.0, npan + 1)
            for lo, hi in zip(edges[:-1], edges[1:]):
                za = a + (b - a) * lo
                zb = a + (b - a) * hi
                mid, half = (za + zb) / 2.0, (zb - za) / 2.0
                pts.append(mid + half * xg)
                wts.append(np.full(len(xg), half) * wg)
        else:
            _, c, rad, th0, th1 = piece
            length = abs(th1 - th0) * rad
            npan = max(1, int(math.ceil(length / panel)))
            edges = np.linspace(th0, th1, npan + 1)
            for lo, hi in zip(edges[:-1], edges[1:]):
                mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
                th = mid + half * xg
                pts.append(c + rad * np.exp(1j * th))
                wts.append(1j * rad * np.exp(1j * th) * half * wg)
    return np.concatenate(pts), np.concatenate(wts)


def inverse_mellin_2d(hat, y_abs, contours, cfg: Optional[QuadratureConfig] = None,
                      panel: float = IM_PANEL) -> complex:
    """(2 pi i)^{-2} double contour integral of |x1|^{1-s1} |x2|^{1-s2} hat.

    ``hat`` must accept two equal-shape complex arrays (a meshgrid block)
    and return the transform values elementwise.  The value and an internal
    coarse/fine comparison are computed on Gauss-Legendre panels laid along
    both contours; disagreement raises NonConvergence.
    """
    cfg = cfg or QuadratureConfig(tol_abs=1e-13, tol_rel=5e-8)
    x1 = FOUR_PI_SQ * float(y_abs[0])
    x2 = FOUR_PI_SQ * float(y_abs[1])
    spec1, spec2 = contours

    def pass_at(p: float) -> complex:
        s1, w1 = _contour_nodes(spec1, p)
        s2, w2 = _contour_nodes(spec2, p)
        f1 = w1 * np.exp((1.0 - s1) * math.log(x1))
        f2 = w2 * np.exp((1.0 - s2) * math.log(x2))
        total = 0.0 + 0.0j
        chunk = max(1, int(2e6) // max(1, len(s2)))
        for i in range(0, len(s1), chunk):
            blk = hat(s1[i:i + chunk, None], s2[None, :])
            blk = np.where(np.isfinite(blk), blk, 0.0)
            total += complex(f1[i:i + chunk] @ blk @ f2)
        return total / (2.0j * math.pi) ** 2

    coarse = pass_at(panel)
    fine = pass_at(panel * 0.7)
    err = abs(fine - coarse)
    if err > 50.0 * max(cfg.tol_abs, cfg.tol_rel * abs(fine)):
        finer = pass_at(panel * 0.5)
        err = abs(finer - fine)
        fine = finer
        if err > 50.0 * max(cfg.tol_abs, cfg.tol_rel * abs(fine)):
            raise NonConvergence(
                f"inverse Mellin panels disagree at {err:.3e}")
    return fine


def _wing_height(d: int, h0: float, logx: float) -> float:
    """Smallest wing height making the bent-path integrand sink to target.

    Along a 45-degree wing the gamma factors decay like
    exp(-2 integral log|s|) while |x|^{-Re s} grows like exp(W log x); the
    first wing length winning by the target exponent is returned.
    """
    need = IM_TARGET_EXP + 6.0 + 2.0 * (d if d >= 2 else 0)
    grow = max(logx, 0.0)
    for wh in (12.0, 20.0, IM_MAX_WING):
        top = h0 + wh
        decay = 2.0 * ((top * (math.log(top) - 1.0)) - (h0 * (math.log(h0) - 1.0)))
        if decay - wh * grow >= need:
            return wh
    raise NonConvergence(
        "no admissible wing length: |y| too large for the inverse Mellin route")


def _axis_sigmas(d: int, v: Tuple[int, int], mu: SpectralParams) -> Tuple[float, float]:
    """Vertical-line abscissae keeping every pole ladder strictly left."""
    fams = mellin_hat_poles(d, v, mu)
    sigmas = []
    for key in ("s1", "s2"):
        lead = max((h.real for h in fams[key]), default=-1.0)
        sigma = max(IM_SIGMA, lead + 0.07)
        if sigma > IM_SIGMA_MAX:
            raise PoleOnPath(
                f"{key} pole ladder head at real part {lead:.3f} leaves no "
                "room for a separating vertical line")
        sigmas.append(sigma)
    return (sigmas[0], sigmas[1])


def default_bessel_contours(d: int, y, mu,
                            tol_rel: float = 5e-8) -> Tuple[ContourSpec, ContourSpec]:
    """Bent contours adapted to the sign pair, weight and argument size."""
    ys = as_signed_y(y)
    mu = as_mu(mu)
    v = ys.eps
    s1_sigma, s2_sigma = _axis_sigmas(d, v, mu)
    im_abs = max(abs(m.imag) for m in mu.as_tuple())
    h0 = max(2.0, im_abs + 1.5)
    if v == (1, 1) and d < 2:
        # exponential vertical decay: a plain truncated line suffices
        height = 16.0 + 2.0 * im_abs
        return (ContourSpec(s1_sigma, height_cut=height, tol_rel=tol_rel),
                ContourSpec(s2_sigma, height_cut=height, tol_rel=tol_rel))
    logx = max(math.log(FOUR_PI_SQ * m) for m in ys.mag)
    wh = _wing_height(d, h0, logx)
    return (ContourSpec(s1_sigma, height_cut=h0, tol_rel=tol_rel,
                        wing_slope=1.0, wing_height=wh),
            ContourSpec(s2_sigma, height_cut=h0, tol_rel=tol_rel,
                        wing_slope=1.0, wing_height=wh))


def bessel_k_inverse_mellin(d: int, y, mu, contours=None,
                            cfg: Optional[QuadratureConfig] = None) -> complex:
    """K^d by inverting its double Mellin transform over bent contours."""
    ys = as_signed_y(y)
    mu = as_mu(mu)
    v = ys.eps
    if d >= 2:
        mu.r_of_mu_d(d)
        if v == (1, 1):
            return 0.0 + 0.0j
    if v == (1, 1):
        sink = 4.0 * math.pi * (math.sqrt(ys.mag[0]) + math.sqrt(ys.mag[1]))
        if sink > PP_FLOOR_EXP:
            raise NonConvergence(
                f"(+,+) kernel magnitude ~ e^-{sink:.1f} is below the float64 "
                "cancellation floor of this route; use series or double-Bessel")
    cfg = cfg or QuadratureConfig(tol_abs=1e-15, tol_rel=5e-8)
    if contours is None:
        contours = default_bessel_contours(d, ys, mu, tol_rel=cfg.tol_rel)
    terms = _hat_terms(d, v, mu)
    x1, x2 = FOUR_PI_SQ * ys.mag[0], FOUR_PI_SQ * ys.mag[1]

    def pass_at(panel: float) -> Tuple[complex, float]:
        s1, w1 = _contour_nodes(contours[0], panel)
        s2, w2 = _contour_nodes(contours[1], panel)
        f1 = w1 * np.exp((1.0 - s1) * math.log(x1))
        f2 = w2 * np.exp((1.0 - s2) * math.log(x2))
        avs, bvs = [], []
        for t in terms:
            a = t.afun(s1)
            b = t.bfun(s2)
            avs.append(np.where(np.isfinite(a), a, 0.0) * f1)
            bvs.append(np.where(np.isfinite(b), b, 0.0) * f2)

        def block(rows, cols) -> complex:
            u = s1[rows, None] + s2[None, cols]
            cms: Dict[str, np.ndarray] = {}
            tot = 0.0 + 0.0j
            for j, t in enumerate(terms):
                if t.ckind not in cms:
                    cm = _coupling(t.ckind, u)
                    cms[t.ckind] = np.where(np.isfinite(cm), cm, 0.0)
                tot += t.const * complex(
                    avs[j][rows] @ cms[t.ckind] @ bvs[j][cols])
            return tot

        all1 = np.arange(len(s1))
        all2 = np.arange(len(s2))
        chunk = max(16, int(4e5) // max(1, len(s2)))
        total = sum(block(all1[i:i + chunk], all2)
                    for i in range(0, len(s1), chunk))
        # contribution of the outermost panel on each path end; a visible
        # value there means the truncation or wing length was too short
        edge = max(abs(block(all1[:16], all2)), abs(block(all1[-16:], all2)),
                   abs(block(all1, all2[:16])), abs(block(all1, all2[-16:])))
        norm = (2.0j * math.pi) ** 2
        return total / norm, edge / abs(norm)

    coarse, _ = pass_at(IM_PANEL)
    fine, edge = pass_at(IM_PANEL * 0.7)
    err = abs(fine - coarse)
    if err > 50.0 * max(cfg.tol_abs, cfg.tol_rel * abs(fine)):
        finer, edge = pass_at(IM_PANEL * 0.5)
        err = abs(finer - fine)
        fine = finer
        if err > 50.0 * max(cfg.tol_abs, cfg.tol_rel * abs(fine)):
            raise NonConvergence(
                f"inverse Mellin panels disagree at {err:.3e} "
                f"for d={d}, v={v}")
    if edge > 100.0 * max(cfg.tol_abs, cfg.tol_rel * abs(fine)):
        raise NonConvergence(
            f"path endpoint contribution {edge:.3e} is not negligible; "
            "the contour truncation is too short for this argument")
    return fine


# ---------------------------------------------------------------------------
# double-Bessel integral representations
# ---------------------------------------------------------------------------

DB_KINDS = ("1+", "1-", "2+", "2-", "3", "4", "5")

_DB_CFG = QuadratureConfig(tol_abs=1e-12, tol_rel=1e-9)


def _db_params(ys: SignedY, mu: SpectralParams):
    a = 2.0 * math.pi * math.sqrt(ys.mag[0])
    b = 2.0 * math.pi * math.sqrt(ys.mag[1])
    nu = mu.mu3 - mu.mu1
    p = 3.0 * mu.mu2
    pref = complex(np.exp((mu.mu2 / 2.0) * math.log(ys.mag[0] / ys.mag[1])))
    return a, b, nu, p, pref


def _jkind(eps: int) -> str:
    return "Jplus" if eps > 0 else "Jminus"


def _head_and_tail(fvec, x_start: float, x_split: float, freq: float,
                   cfg: QuadratureConfig) -> complex:
    head = integrate_segment(fvec, x_start, x_split, cfg)
    tail = oscillatory_tail(fvec, x_split, math.pi / (2.0 * freq), cfg)
    return head + tail


def _db_j1(eps: int, a: float, b: float, nu: complex, p: complex,
           cfg: QuadratureConfig) -> complex:
    """Fold at u = 1 and substitute x = sqrt(1 + u^2) in both halves."""
    kind = _jkind(eps)
    rt2 = math.sqrt(2.0)

    def piece(aa, bb, pp):
        def f(x):
            x = np.asarray(x, dtype=float)
            q = np.sqrt(x * x - 1.0)
            vals = (gl2_bessel(kind, nu, aa * x)
                    * gl2_bessel(kind, nu, bb * x / q)
                    * np.exp((pp / 2.0) * np.log(x * x - 1.0)) * x / (x * x - 1.0))
            return vals
        split = max(rt2 + 2.0, rt2 + 6.0 / max(aa, 1e-3))
        return _head_and_tail(f, rt2, split, aa, cfg)

    return piece(a, b, p) + piece(b, a, -p)


def _db_j2(eps: int, a: float, b: float, nu: complex, p: complex,
           cfg: QuadratureConfig) -> complex:
    """Substitute x = sqrt(u^2 - 1); the weight becomes (1+x^2)^{p/2-1} x."""
    kind = _jkind(eps)

    def f(x):
        x = np.asarray(x, dtype=float)
        q = np.sqrt(1.0 + x * x)
        return (gl2_bessel(kind, nu, a * x)
                * gl2_bessel(kind, nu, b * x / q)
                * np.exp((p / 2.0 - 1.0) * np.log(1.0 + x * x)) * x)

    split = max(3.0, 8.0 / max(a, 1e-3))
    head = tanh_sinh(f, 0.0, split, cfg)
    tail = oscillatory_tail(f, split, math.pi / (2.0 * a), cfg)
    return head + tail


def _db_j3(a: float, b: float, nu: complex, p: complex,
           cfg: QuadratureConfig) -> complex:
    rt2 = math.sqrt(2.0)
    # upper half u >= 1: the K-tilde argument grows, exponential cutoff
    ratio = K_TAIL_EXPONENT / (2.0 * a)
    u_max = math.sqrt(ratio * ratio - 1.0) if ratio > rt2 else rt2

    def f_direct(u):
        u = np.asarray(u, dtype=float)
        return (gl2_bessel("Ktilde", nu, a * np.sqrt(1.0 + u * u))
                * gl2_bessel("Jminus", nu, b * np.sqrt(1.0 + 1.0 / (u * u)))
                * np.exp(p * np.log(u)) / u)

    direct = integrate_segment(f_direct, 1.0, max(u_max, 1.0 + 1e-6), cfg)

    # lower half folded through u -> 1/u and substituted x = sqrt(1 + u^2)
    def f_fold(x):
        x = np.asarray(x, dtype=float)
        q = np.sqrt(x * x - 1.0)
        return (gl2_bessel("Ktilde", nu, a * x / q)
                * gl2_bessel("Jminus", nu, b * x)
                * np.exp((-p / 2.0) * np.log(x * x - 1.0)) * x / (x * x - 1.0))

    split = max(rt2 + 2.0, rt2 + 6.0 / max(b, 1e-3))
    folded = _head_and_tail(f_fold, rt2, split, b, cfg)
    return direct + folded


def _db_j4(a: float, b: float, nu: complex, p: complex,
           cfg: QuadratureConfig) -> complex:
    ratio = K_TAIL_EXPONENT / (2.0 * b)
    u_min = 1.0 / math.sqrt(1.0 + ratio * ratio)

    def f(u):
        u = np.asarray(u, dtype=float)
        return (gl2_bessel("Ktilde", nu, a * np.sqrt(1.0 - u * u))
                * gl2_bessel("Ktilde", nu, b * np.sqrt(1.0 / (u * u) - 1.0))
                * np.exp(p * np.log(u)) / u)

    return tanh_sinh(f, u_min, 1.0, cfg)


def _db_j5(a: float, b: float, nu: complex, p: complex,
           cfg: QuadratureConfig) -> complex:
    def piece(aa, bb, pp):
        ratio = K_TAIL_EXPONENT / (2.0 * aa)
        u_max = math.sqrt(ratio * ratio - 1.0) if ratio > math.sqrt(2.0) else 2.0

        def f(u):
            u = np.asarray(u, dtype=float)
            return (gl2_bessel("Ktilde", nu, aa * np.sqrt(1.0 + u * u))
                    * gl2_bessel("Ktilde", nu, bb * np.sqrt(1.0 + 1.0 / (u * u)))
                    * np.exp(pp * np.log(u)) / u)

        return integrate_segment(f, 1.0, max(u_max, 1.0 + 1e-6), cfg)

    return piece(a, b, p) + piece(b, a, -p)


def double_bessel_kernel(kind: str, y, mu,
                         cfg: Optional[QuadratureConfig] = None) -> complex:
    """One of the five double-Bessel integrals (kinds 1+, 1-, 2+, 2-, 3, 4, 5).

    Only the magnitudes of y enter.  Orders nu = mu3 - mu1 must be purely
    imaginary, or integers for kinds 1 and 2; the u-weight exponent 3 mu_2
    must stay on the imaginary axis for absolute convergence.
    """
    if kind not in DB_KINDS:
        raise ValueError(f"kind must be one of {DB_KINDS}, got {kind!r}")
    ys = as_signed_y(y)
    mu = as_mu(mu)
    cfg = cfg or _DB_CFG
    a, b, nu, p, pref = _db_params(ys, mu)
    is_int = abs(nu.imag) < 1e-9 and abs(nu.real - round(nu.real)) < 1e-9
    if kind[0] in ("1", "2"):
        if not is_int and abs(nu.real) > 1e-9:
            raise ValueError("kinds 1 and 2 need nu on the imaginary axis "
                             "or an integer")
        if not is_int and abs(nu.imag) > J_IM_ORDER_MAX:
            raise NonConvergence(f"|Im nu| = {abs(nu.imag):.2f} exceeds the "
                                 "fast Bessel order range")
    else:
        if abs(nu.real) > 1e-9 and not (is_int and round(nu.real) == 0):
            raise ValueError("kinds 3, 4, 5 need nu on the imaginary axis")
    if abs(p.real) > 1e-9:
        raise ValueError("3 mu_2 must be purely imaginary for convergence")
    if kind in ("1+", "1-"):
        return pref * _db_j1(1 if kind == "1+" else -1, a, b, nu, p, cfg)
    if kind in ("2+", "2-"):
        return pref * _db_j2(1 if kind == "2+" else -1, a, b, nu, p, cfg)
    if kind == "3":
        return pref * _db_j3(a, b, nu, p, cfg)
    if kind == "4":
        return pref * _db_j4(a, b, nu, p, cfg)
    return pref * _db_j5(a, b, nu, p, cfg)


def _via_double_core(d: int, ys: SignedY, mu: SpectralParams,
                     cfg: QuadratureConfig) -> complex:
    v = ys.eps
    scale = 8.0 * ys.mag[0] * ys.mag[1]
    if v == (1, 1):
        if d >= 2:
            return 0.0 + 0.0j
        m1, m2, m3 = mu.as_tuple()
        trig = (np.cos(np.pi / 2.0 * (m1 - m2)) * np.cos(np.pi / 2.0 * (m2 - m3))
                / np.cos(np.pi / 2.0 * (m1 - m3)))
        val = 16.0 * ys.mag[0] * ys.mag[1] * complex(trig) \
            * double_bessel_kernel("5", ys, mu, cfg)
        if d == 1:
            val *= complex(np.tan(np.pi / 2.0 * (m1 - m3))
                           * np.tan(np.pi / 2.0 * (m2 - m3)))
        return val
    if v == (-1, 1):
        # involution onto the (+,-) pair
        return _via_double_core(d, ys.iota(), weyl_act(W2, mu).neg(), cfg)
    if v == (-1, -1):
        if d == 0:
            tot = sum(2.0 * double_bessel_kernel("1-", ys, weyl_act(w, mu), cfg)
                      + double_bessel_kernel("1+", ys, weyl_act(w, mu), cfg)
                      for w in WEYL_STAB3) / 3.0
        elif d == 1:
            tot = (-double_bessel_kernel("1+", ys, mu, cfg)
                   - double_bessel_kernel("1+", ys, weyl_act(W4, mu), cfg)
                   + double_bessel_kernel("1+", ys, weyl_act(W5, mu), cfg))
        else:
            eps = (-1) ** (d - 1)
            muw = weyl_act(W3, mu)
            tot = eps * double_bessel_kernel("1+" if eps > 0 else "1-", ys, muw, cfg)
        return scale * tot
    # (+,-)
    if d == 0:
        tot = sum(double_bessel_kernel("2-", ys, weyl_act(w, mu), cfg)
                  + double_bessel_kernel("3", ys, weyl_act(w, mu), cfg)
                  + double_bessel_kernel("4", ys, weyl_act(w, mu), cfg)
                  for w in WEYL_STAB3) / 3.0
    elif d == 1:
        mw5 = weyl_act(W5, mu)
        tot = (double_bessel_kernel("2-", ys, mw5, cfg)
               - double_bessel_kernel("3", ys, mw5, cfg)
               + double_bessel_kernel("4", ys, mw5, cfg))
    else:
        eps = (-1) ** (d - 1)
        muw = weyl_act(W3, mu)
        tot = double_bessel_kernel("2+" if eps > 0 else "2-", ys, muw, cfg)
    return scale * tot


def bessel_k_via_double(d: int, y, mu,
                        cfg: Optional[QuadratureConfig] = None) -> complex:
    """K^d from the double-Bessel integrals; needs tempered parameters."""
    ys = as_signed_y(y)
    mu = as_mu(mu)
    cfg = cfg or _DB_CFG
    if d >= 2:
        r = mu.r_of_mu_d(d)
        if abs(r.real) > 1e-9:
            raise ValueError("the double-Bessel route needs Re(r) = 0")
    elif not mu.is_tempered(1e-9):
        raise ValueError("the double-Bessel route needs Re(mu) = 0")
    return _via_double_core(d, ys, mu, cfg)


# ---------------------------------------------------------------------------
# front door
# ---------------------------------------------------------------------------

def bessel_k(d: int, y, mu, method=BesselMethod.AUTO, tol: float = 1e-9) -> complex:
    """The GL(3) long-element Bessel kernel K^d(y, mu).

    For d >= 2 the parameters must lie on the weight-d curve; the (+,+)
    sign pair then vanishes identically.  ``method`` selects the series,
    inverse-Mellin or double-Bessel representation, or Auto to dispatch on
    argument size (series for max |4 pi^2 y_i| <= 30, then double-Bessel
    on the tempered axis, inverse Mellin otherwise).
    """
    if d < 0:
        raise ValueError("the weight d must be nonnegative")
    ys = as_signed_y(y)
    mu = as_mu(mu)
    if d >= 2:
        mu.r_of_mu_d(d)
        if ys.eps == (1, 1):
            return 0.0 + 0.0j
    method = _as_method(method)
    if method == BesselMethod.AUTO:
        xmax = FOUR_PI_SQ * max(ys.mag)
        if xmax <= AUTO_SERIES_ARG:
            method = BesselMethod.SERIES
        else:
            tempered = (mu.is_tempered(1e-9) if d < 2
                        else abs(mu.r_of_mu_d(d).real) < 1e-9)
            method = (BesselMethod.DOUBLE_BESSEL if tempered
                      else BesselMethod.INVERSE_MELLIN)
    if method == BesselMethod.SERIES:
        return _k_series(d, ys, mu, tol)
    if method == BesselMethod.INVERSE_MELLIN:
        return bessel_k_inverse_mellin(d, ys, mu)
    if method == BesselMethod.DOUBLE_BESSEL:
        return bessel_k_via_double(d, ys, mu)
    raise ValueError(f"unknown method {method}")


__all__ = [
    "SignedY",
    "BesselMethod",
    "DB_KINDS",
    "j_series",
    "j_leading_term",
    "bessel_k",
    "bessel_k_mellin_hat",
    "mellin_hat_poles",
    "bessel_k_inverse_mellin",
    "inverse_mellin_2d",
    "default_bessel_contours",
    "bessel_k_via_double",
    "double_bessel_kernel",
    "stirling_exponent",
]
