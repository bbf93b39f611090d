"""Minimal-weight GL(3) Whittaker functions.

The completed minimal-weight Whittaker vector W^{d*}(y, mu) is computed from
its double Mellin-Barnes representation with gamma-ratio kernel G^d.  The
module also provides the normalizers Lambda^d, closed forms for the Mellin
transform of a product of two such vectors (Stade-type formulas) together
with a direct two-dimensional quadrature over the torus for verifying them,
and contour checks of Barnes' first and second lemmas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (SpectralParams, as_mu, cgamma, cloggamma, crgamma,
                   gamma_checked)
from .quadrature import ContourSpec, QuadratureConfig, contour_integral

DEFAULT_LINE_RE = 1.1
TRIVIAL_ROW_RTOL = 1e-11    # row treated as identically zero if this much under the vector scale


@dataclass(frozen=True)
class MinWhittSpec:
    d: int
    mu: SpectralParams

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("weight d must be >= 0")
        if self.d >= 2:
            self.mu.r_of_mu_d(self.d, tol=1e-12)


def lambda_norm(d: int, mu) -> complex:
    """The completed-Whittaker normalizer Lambda^d at mu.

    For d >= 2 the argument must lie on the discrete-series curve or its
    negative; the negative branch uses the completeness convention
    Lambda^d(-mu^d(r)) = Lambda^d(mu^d(-r)) pi^(d-1) / Gamma(d).
    """
    mu = as_mu(mu)
    m1, m2, m3 = mu.as_tuple()
    if d == 0:
        return math.pi ** (-1.5) * complex(np.exp((m3 - m1) * math.log(math.pi))) \
            * gamma_checked((1 + m1 - m2) / 2, "Lambda gamma") \
            * gamma_checked((1 + m1 - m3) / 2, "Lambda gamma") \
            * gamma_checked((1 + m2 - m3) / 2, "Lambda gamma")
    if d == 1:
        return math.sqrt(2) * math.pi ** (-1.5) \
            * complex(np.exp((m3 - m1) * math.log(math.pi))) \
            * gamma_checked((1 + m1 - m2) / 2, "Lambda gamma") \
            * gamma_checked((2 + m1 - m3) / 2, "Lambda gamma") \
            * gamma_checked((2 + m2 - m3) / 2, "Lambda gamma")

    def on_curve(r):
        return 2.0 * (-1.0) ** d * (2 * math.pi) ** complex(-(d + 1) / 2 - 3 * r) \
            * gamma_checked(complex(d), "Lambda gamma") \
            * gamma_checked((d + 1) / 2 + 3 * r, "Lambda gamma")

    try:
        r = mu.r_of_mu_d(d, tol=1e-9)
    except ValueError:
        r = mu.neg().r_of_mu_d(d, tol=1e-9)
        return on_curve(-r) * math.pi ** (d - 1) / math.gamma(d)
    return on_curve(r)


def _beta_eta(d: int, m: int, ell: int):
    """The gamma-shift triples (beta, eta) entering G-tilde^d((d-m, ell))."""
    l1 = d - m
    if d == 0:
        return (0, 0, 0), (0, 0, 0)
    if d == 1:
        return (l1, l1, 1 - l1), (ell, ell, 1 - ell)
    return (d, 0, l1), (0, d, ell)


def gtilde(d: int, beta, eta, s, mu) -> complex:
    """The gamma-ratio kernel: numerator over i, shared denominator."""
    mu = as_mu(mu)
    s1, s2 = complex(s[0]), complex(s[1])
    num = 1.0 + 0.0j
    for b, e, m in zip(beta, eta, mu):
        num *= gamma_checked((b + s1 - m) / 2, "G numerator")
        num *= gamma_checked((e + s2 + m) / 2, "G numerator")
    den_arg = (s1 + s2 + sum(beta) + sum(eta) - 2 * d) / 2
    return num * complex(crgamma(den_arg))


def g_component(d: int, mprime: int, s, mu) -> complex:
    """Coordinate m' of the Mellin-Barnes kernel vector G^d(s, mu)."""
    if abs(mprime) > d:
        raise ValueError("need |m'| <= d")
    m = abs(mprime)
    eps = -1 if mprime < 0 else 1
    coef = math.sqrt(math.comb(2 * d, d + m))
    total = 0.0 + 0.0j
    for ell in range(m + 1):
        beta, eta = _beta_eta(d, m, ell)
        total += eps ** ell * math.comb(m, ell) * gtilde(d, beta, eta, s, mu)
    return coef * total


# ---------------------------------------------------------------------------
# fixed vertical-line grids (shared by the Whittaker grid evaluator and the
# Stade quadrature; plain lines suffice since the contours sit right of all
# poles for the parameter ranges handled here)
# ---------------------------------------------------------------------------

_GL32 = np.polynomial.legendre.leggauss(32)


def _line_nodes(s0: float, step: float = None, height_cut: float = None):
    """Nodes and weights for a vertical line at Re = s0, trapezoid rule.

    Returns (s, w) with s = s0 + i t on a uniform grid and w carrying the
    i dt direction factor.  A uniform grid is essential here: the factors
    (pi y)^(-it) downstream oscillate with frequency |log(pi y)|, and the
    trapezoid rule resolves every frequency below pi/step at spectral
    accuracy (the aliasing images land where the integrand has no mass,
    since the contour sits right of all poles).
    """
    if step is None:
        step = DEFAULT_LINE_STEP
    if height_cut is None:
        height_cut = DEFAULT_LINE_CUT
    n = int(math.ceil(height_cut / step))
    t = step * np.arange(-n, n + 1)
    w = np.full(t.shape, step)
    w[0] *= 0.5
    w[-1] *= 0.5
    return s0 + 1j * t, 1j * w


DEFAULT_LINE_STEP = math.pi / 26.0  # resolves |log y| up to 26
DEFAULT_LINE_CUT = 22.0
# Trapezoid aliasing decays like exp(-2 pi clearance / step) where clearance
# is the horizontal distance from the line to the nearest gamma pole.  With
# step pi/26 a clearance of 0.8 puts the images at exp(-41.6); a clearance of
# 0.3 would leave percent-level ghosts once Re(mu) is sizable.
DEFAULT_POLE_CLEARANCE = 0.8


def _g_grid(d: int, mprime: int, s1: np.ndarray, s2: np.ndarray, mu) -> np.ndarray:
    """G^d_{m'} on the product grid s1 x s2, vectorized.

    The kernel separates as A(s1) B(s2) / Gamma((s1+s2+c)/2), so each ell
    term is an outer product against a reciprocal-gamma coupling matrix.
    """
    mu = as_mu(mu)
    m = abs(mprime)
    eps = -1 if mprime < 0 else 1
    coef = math.sqrt(math.comb(2 * d, d + m))
    ssum = s1[:, None] + s2[None, :]
    total = np.zeros((len(s1), len(s2)), dtype=complex)
    for ell in range(m + 1):
        beta, eta = _beta_eta(d, m, ell)
        a = np.ones(len(s1), dtype=complex)
        b = np.ones(len(s2), dtype=complex)
        for bi, ei, mi in zip(beta, eta, mu):
            a *= cgamma((bi + s1 - mi) / 2)
            b *= cgamma((ei + s2 + mi) / 2)
        c = sum(beta) + sum(eta) - 2 * d
        total += (eps ** ell * math.comb(m, ell)) \
            * np.outer(a, b) * crgamma((ssum + c) / 2)
    return coef * total


def _default_s0(mu: SpectralParams, d: int = 0) -> tuple:
    """Contour abscissas clear of the kernel poles by DEFAULT_POLE_CLEARANCE.

    For d >= 2 the integer shifts beta = (d, 0, *) and eta = (0, d, *) move
    the rightmost poles to max(Re mu_1 - d, Re mu_2, Re mu_3) and its mirror,
    so the lines can hug Re = DEFAULT_LINE_RE even far up the weight curve,
    which keeps the cancellation between oscillatory terms mild.
    """
    re = [m.real for m in mu.as_tuple()]
    if d >= 2:
        p1 = max(re[0] - d, re[1], re[2])
        p2 = max(-re[0], -re[1] - d, -re[2])
    else:
        p1 = max(re)
        p2 = max(-r for r in re)
    return (max(DEFAULT_LINE_RE, DEFAULT_POLE_CLEARANCE + p1),
            max(DEFAULT_LINE_RE, DEFAULT_POLE_CLEARANCE + p2))


def whittaker_min_grid(d: int, mu, y1: np.ndarray, y2: np.ndarray,
                       s0=None, step=None, height_cut=None) -> np.ndarray:
    """W^{d*} components on a product grid of y values.

    Returns an array of shape (2d+1, len(y1), len(y2)) indexed by
    m' = -d..d.  Components whose kernel row vanishes identically are exact
    zeros.  This is the workhorse behind whittaker_min and stade_numeric.
    """
    mu = as_mu(mu)
    if s0 is None:
        s0 = _default_s0(mu, d)
    s1, w1 = _line_nodes(s0[0], step=step, height_cut=height_cut)
    s2, w2 = _line_nodes(s0[1], step=step, height_cut=height_cut)
    p1 = (math.pi * np.asarray(y1, dtype=float))[:, None] ** (1 - s1)[None, :]
    p2 = (math.pi * np.asarray(y2, dtype=float))[:, None] ** (1 - s2)[None, :]
    out = np.zeros((2 * d + 1, len(y1), len(y2)), dtype=complex)
    grids = []
    scale = 0.0
    for mprime in range(-d, d + 1):
        g = _g_grid(d, mprime, s1, s2, mu)
        grids.append(g)
        scale = max(scale, float(np.max(np.abs(g))))
    for k, mprime in enumerate(range(-d, d + 1)):
        g = grids[k]
        if float(np.max(np.abs(g))) <= TRIVIAL_ROW_RTOL * scale:
            continue  # identically-vanishing row, keep the exact zero
        core = (w1[:, None] * g) * w2[None, :]
        # prefactor 1/(4 pi^2) and measure ds/(2 pi i)^2, i's already in w
        out[k] = (p1 @ core @ p2.T) * (1.0 / (4 * math.pi ** 2)) / (2j * math.pi) ** 2
    return out


def whittaker_min(spec: MinWhittSpec, y, s0=None) -> np.ndarray:
    """The completed minimal-weight Whittaker vector at a single point."""
    y1, y2 = float(y[0]), float(y[1])
    if y1 <= 0 or y2 <= 0:
        raise ValueError("y must be positive")
    grid = whittaker_min_grid(spec.d, spec.mu, np.array([y1]), np.array([y2]), s0=s0)
    return grid[:, 0, 0]


def _gl_panels(edges):
    e = np.asarray(edges, dtype=float)
    mid = 0.5 * (e[1:] + e[:-1])[:, None]
    half = 0.5 * (e[1:] - e[:-1])[:, None]
    x = (mid + half * _GL32[0][None, :]).ravel()
    w = (np.abs(half) * _GL32[1][None, :]).ravel()
    return x, w


def jacquet_whittaker(mu, y, x0: float = 1.5, t_max: float = 1.2e4) -> float:
    """Weight-zero Whittaker function by direct unipotent integration.

    This route never touches the Mellin-Barnes kernel, so it serves as an
    independent consistency check on whittaker_min:

        lambda_norm(0, mu) * jacquet_whittaker(mu, y)
            == whittaker_min(MinWhittSpec(0, as_mu(mu)), y)[0].

    The x_1 integral collapses to a K-Bessel factor in closed form, and the
    remaining (x_2, x_3) integral, after substituting v = x_3 / (y_2^2+x_2^2)
    and folding by parity, carries the phase cos(2 pi x_2 v) cos(2 pi x_2).
    Its x_2 tail decays too slowly to truncate (the v-transform resonates at
    frequency one), so beyond x_2 = x0 each exponential half is rotated onto
    the vertical line x_2 = x0 + i t, where the integrand falls off like
    exp(-2 pi b t) * t^(3 mu_3 - 1) with b = 1 + v or |1 - v|.  The branch
    points of the integrand sit at x_2 = +-i y_2 and are never approached.

    Only real spectral parameters with mu_1 > mu_2 > mu_3 are supported
    (the cone of absolute convergence).
    """
    from scipy.special import kv

    mu = as_mu(mu)
    trip = mu.as_tuple()
    if max(abs(m.imag) for m in trip) > 1e-12:
        raise ValueError("direct integration needs real spectral parameters")
    m1, m2, m3 = (m.real for m in trip)
    if not (m1 > m2 > m3):
        raise ValueError("need mu_1 > mu_2 > mu_3 for absolute convergence")
    y1, y2 = float(y[0]), float(y[1])
    if y1 <= 0 or y2 <= 0:
        raise ValueError("y must be positive")

    ea = (m3 - m2 - 1) / 2.0
    nu = (1 + m1 - m2) / 2.0
    c_nu = 2 * math.pi ** nu / math.gamma(nu)

    # v grid: uniform panels (halved until they resolve the y_1/y_2 feature
    # at v ~ 0) with geometric refinement into the kink at v = 1, where the
    # rotated tail loses its exponential factor
    h = 0.25
    while h > 0.03 and h > 0.5 * y1 / y2:
        h *= 0.5
    v_top = h * math.ceil(max(5.0, 30.0 / (2 * math.pi * y2)) / h)
    edges = set(np.arange(0.0, v_top + h / 2, h).tolist())
    for k in range(1, 9):
        edges.add(1.0 - h * 0.5 ** k)
        edges.add(1.0 + h * 0.5 ** k)
    v, wv = _gl_panels(sorted(edges))

    # real segment 0 <= x_2 <= x0
    xr, wxr = _gl_panels(np.arange(0.0, x0 + h / 2, h))
    s2r = y2 * y2 + xr * xr
    ar = y1 * y1 + s2r[:, None] * (v * v)[None, :]
    qr = y2 * np.sqrt(ar) / np.sqrt(s2r)[:, None]
    gr = (s2r ** (1 + ea - nu))[:, None] * ar ** ea \
        * qr ** (0.5 - nu) * kv(nu - 0.5, 2 * math.pi * qr)
    inner = (gr * np.cos(2 * math.pi * xr[:, None] * v[None, :])) @ wv
    seg = float(np.sum(inner * np.cos(2 * math.pi * xr) * wxr))

    # rotated tail x_2 = x0 + i t; conjugate symmetry folds both rotation
    # directions onto the upper path
    te = [0.0, 0.25, 0.5, 1.0, 2.0]
    top = 2.0
    while top < t_max:
        top = min(2 * top, t_max)
        te.append(top)
    t, wt = _gl_panels(te)
    s2c = y2 * y2 + (x0 + 1j * t) ** 2
    ac = y1 * y1 + s2c[None, :] * (v * v)[:, None]
    qc = y2 * np.sqrt(ac) / np.sqrt(s2c)[None, :]
    gc = (s2c ** (1 + ea - nu))[None, :] * ac ** ea \
        * qc ** (0.5 - nu) * kv(nu - 0.5, 2 * math.pi * qc)
    tail_v = np.zeros(v.shape)
    for b in (1.0 + v, np.abs(1.0 - v)):
        damp = np.exp(np.maximum(-2 * math.pi * np.outer(b, t), -700.0))
        tail_v += 0.5 * np.real(1j * np.exp(2j * math.pi * b * x0) * ((gc * damp) @ wt))
    tail = float(tail_v @ wv)

    return y1 ** (1 - m3) * y2 ** (1 + m1) * 4 * c_nu * (seg + tail)


# ---------------------------------------------------------------------------
# Stade-type closed forms and the direct quadrature
# ---------------------------------------------------------------------------

def _normalize_d_pair(d_pair):
    if isinstance(d_pair, int):
        return (d_pair, d_pair)
    a, b = int(d_pair[0]), int(d_pair[1])
    if a == b or (a, b) == (0, 1):
        return (a, b)
    raise ValueError("d_pair must be (d, d) or (0, 1)")


def stade_closed(d_pair, mu, mu_prime, t: complex) -> complex:
    """Closed form of the product Mellin transform Psi at Re(t) > 0."""
    da, db = _normalize_d_pair(d_pair)
    mu = as_mu(mu)
    mup = as_mu(mu_prime)
    t = complex(t)
    if t.real <= 0:
        raise ValueError("need Re(t) > 0")
    if (da, db) == (0, 1):
        ln = -3 * t * math.log(math.pi) - cloggamma((1 + 3 * t) / 2)
        for mi in mu:
            for j, mj in enumerate(mup):
                delta = 1 if j == 2 else 0
                ln = ln + cloggamma((delta + t + mi + mj) / 2)
        return 0.25 * complex(np.exp(ln))
    d = da
    if d == 0 or d == 1:
        ln = -3 * t * math.log(math.pi) - cloggamma(3 * t / 2)
        for i, mi in enumerate(mu):
            for j, mj in enumerate(mup):
                c = 1 if (d == 1 and (i == 2) != (j == 2)) else 0
                ln = ln + cloggamma((c + t + mi + mj) / 2)
        return (0.25 if d == 0 else 0.5) * complex(np.exp(ln))
    r = mu.r_of_mu_d(d)
    rp = mup.r_of_mu_d(d)
    ln = (4 - d - 4 * t - r - rp) * math.log(2) + (2 - 3 * t) * math.log(math.pi) \
        + cloggamma(t + r + rp) + cloggamma((d - 1) / 2 + t + r - 2 * rp) \
        + cloggamma((d - 1) / 2 + t + rp - 2 * r) + cloggamma(d - 1 + t + r + rp) \
        + cloggamma(t / 2 - r - rp) - cloggamma(3 * t / 2)
    return complex(np.exp(ln))


DEFAULT_Y_BREAKS = (-24.0, -20.0, -16.0, -13.0, -10.0, -7.5, -5.5, -4.0, -3.0,
                    -2.25, -1.5, -0.75, 0.0, 0.75, 1.5, 2.25, 3.0, 3.8, 4.6)


def _y_panel_nodes(breaks):
    x, wx = _GL32
    us, ws = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        us.append(mid + half * x)
        ws.append(half * wx)
    return np.concatenate(us), np.concatenate(ws)


def stade_numeric(d_pair, mu, mu_prime, t: complex,
                  y_breaks=DEFAULT_Y_BREAKS, s0=None) -> complex:
    """Direct 2D quadrature of the product Mellin transform over the torus.

    Computes int W^{da*}(y,mu) . W^{db*}(y,mu') (y1^2 y2)^t dy with the
    invariant measure dy = dy1 dy2/(y1 y2)^3 in logarithmic coordinates.
    The mixed (0, 1) pairing is 2^{-1/2} W^{0*} W^{1*}_0; that is the
    combination whose value the closed-form gamma product reproduces (the
    equality was confirmed independently against the double Mellin-Barnes
    pairing of the G-kernels, which is exact to machine precision).
    """
    da, db = _normalize_d_pair(d_pair)
    t = complex(t)
    if t.real <= 0:
        raise ValueError("need Re(t) > 0")
    u, wu = _y_panel_nodes(y_breaks)
    y = np.exp(u)
    wa = whittaker_min_grid(da, mu, y, y, s0=s0)
    wb = whittaker_min_grid(db, mu_prime, y, y, s0=s0)
    if (da, db) == (0, 1):
        prod = (0.5 ** 0.5) * wa[0] * wb[1]
    else:
        prod = np.einsum("kij,kij->ij", wa, wb)
    # (y1^2 y2)^t dy1 dy2 / (y1 y2)^3 = e^{(2t-2) u1} e^{(t-2) u2} du1 du2
    f1 = np.exp((2 * t - 2) * u) * wu
    f2 = np.exp((t - 2) * u) * wu
    return complex(f1 @ prod @ f2)


# ---------------------------------------------------------------------------
# Barnes lemmas
# ---------------------------------------------------------------------------

def barnes_check(kind: str, params, cfg: QuadratureConfig | None = None):
    """Both sides of Barnes' first or second lemma; returns (lhs, rhs)."""
    cfg = cfg or QuadratureConfig()
    params = [complex(p) for p in params]
    if kind == "first":
        a, b, c, d = params
        sigma_lo = max(-a.real, -b.real)
        sigma_hi = min(c.real, d.real)
        if sigma_lo >= sigma_hi:
            raise ValueError("no vertical line separates the pole families")
        sigma = 0.5 * (sigma_lo + sigma_hi)

        def integrand(s):
            return cgamma(a + s) * cgamma(b + s) * cgamma(c - s) * cgamma(d - s)

        spec = ContourSpec(real_part=sigma, height_cut=60.0,
                           tol_abs=cfg.tol_abs, tol_rel=cfg.tol_rel)
        lhs = contour_integral(integrand, (spec,)) / (2j * math.pi)
        rhs = complex(np.exp(cloggamma(a + c) + cloggamma(a + d)
                             + cloggamma(b + c) + cloggamma(b + d)
                             - cloggamma(a + b + c + d)))
        return lhs, rhs
    if kind == "second":
        a, b, c, d, e, f = params
        if abs(a + b + c + d + e - f) > 1e-12:
            raise ValueError("second lemma needs a+b+c+d+e-f = 0")
        sigma_lo = max(-a.real, -b.real, -c.real)
        sigma_hi = min(d.real, e.real)
        if sigma_lo >= sigma_hi:
            raise ValueError("no vertical line separates the pole families")
        sigma = 0.5 * (sigma_lo + sigma_hi)

        def integrand(s):
            return cgamma(a + s) * cgamma(b + s) * cgamma(c + s) \
                * cgamma(d - s) * cgamma(e - s) * crgamma(f + s)

        spec = ContourSpec(real_part=sigma, height_cut=60.0,
                           tol_abs=cfg.tol_abs, tol_rel=cfg.tol_rel)
        lhs = contour_integral(integrand, (spec,)) / (2j * math.pi)
        ln = -(cloggamma(f - a) + cloggamma(f - b) + cloggamma(f - c))
        for x in (a, b, c):
            ln = ln + cloggamma(x + d) + cloggamma(x + e)
        return lhs, complex(np.exp(ln))
    raise ValueError("kind must be 'first' or 'second'")
