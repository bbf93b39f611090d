"""Contour and real-axis quadrature shared by the special-function modules.

The central object is ``ContourSpec``: a truncated vertical line Re(s) = c
with optional semicircular detours around listed poles.  ``contour_integral``
integrates a vectorized integrand over one or two such contours with
adaptive Gauss-Legendre panels (two nested orders provide the error
estimate).  Finite real integrals with endpoint singularities go through
``tanh_sinh``; slowly convergent oscillatory tails go through
``oscillatory_tail`` which accelerates panel partial sums with Wynn's
epsilon algorithm.

Integrands must accept a numpy array of path points and return an array of
values.  All routines are serial and deterministic for a fixed config.

Line integrals are returned raw (the value of "integral of f ds"); callers
divide by 2*pi*i themselves where a Mellin normalization is wanted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np


class NonConvergence(RuntimeError):
    """Quadrature budget exhausted with the error estimate above tolerance."""


class PoleOnPath(RuntimeError):
    """A declared pole is too close to the integration path and has no detour."""


@dataclass(frozen=True)
class QuadratureConfig:
    tol_abs: float = 1e-10
    tol_rel: float = 1e-9
    max_subdivisions: int = 14
    oscillation_budget: int = 4096

    def __post_init__(self):
        if self.tol_abs <= 0 or self.tol_rel <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.oscillation_budget < 1:
            raise ValueError("oscillation_budget must be >= 1")

    def scaled(self, factor: float) -> "QuadratureConfig":
        return QuadratureConfig(self.tol_abs * factor, self.tol_rel * factor,
                                self.max_subdivisions, self.oscillation_budget)


@dataclass(frozen=True)
class Detour:
    center: complex
    radius: float
    side: str  # "left" or "right"

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("detour radius must be positive")
        if self.side not in ("left", "right"):
            raise ValueError("detour side must be 'left' or 'right'")


@dataclass(frozen=True)
class ContourSpec:
    """Truncated vertical line Re(s) = real_part with optional extras.

    When ``wing_slope`` and ``wing_height`` are both positive the truncated
    line continues past +-height_cut with straight wings that move left as
    they rise: the point at height height_cut + v sits at real part
    real_part - wing_slope * v.  Integrands whose vertical decay is only
    polynomial but which decay fast once Re(s) drops (gamma ratios) become
    integrable on such a bent path.
    """

    real_part: float
    detours: Tuple[Detour, ...] = ()
    height_cut: float = 40.0
    tol_abs: float = 1e-10
    tol_rel: float = 1e-9
    wing_slope: float = 0.0
    wing_height: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "detours", tuple(self.detours))
        if self.height_cut <= 0:
            raise ValueError("height_cut must be positive")
        if self.wing_slope < 0 or self.wing_height < 0:
            raise ValueError("wing parameters must be nonnegative")
        ds = self.detours
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                if abs(ds[i].center - ds[j].center) < ds[i].radius + ds[j].radius:
                    raise ValueError("detours overlap")
        for d in ds:
            if abs(d.center.imag) + d.radius >= self.height_cut:
                raise ValueError("height_cut must exceed every detour extent")

    def config(self) -> QuadratureConfig:
        return QuadratureConfig(tol_abs=self.tol_abs, tol_rel=self.tol_rel)

    @property
    def has_wings(self) -> bool:
        return self.wing_slope > 0 and self.wing_height > 0


# ---------------------------------------------------------------------------
# Gauss-Legendre panels
# ---------------------------------------------------------------------------

_GL_CACHE: dict = {}


def _gl(n: int):
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (x, w)
    return _GL_CACHE[n]


def _piece_points(piece, x):
    """Map GL nodes x in [-1,1] to points and d(point)/dx along the piece."""
    kind = piece[0]
    if kind == "seg":
        _, a, b = piece
        mid, half = (a + b) / 2.0, (b - a) / 2.0
        return mid + half * x, np.full_like(x, half, dtype=complex)
    _, center, radius, th0, th1 = piece
    mid, half = (th0 + th1) / 2.0, (th1 - th0) / 2.0
    th = mid + half * x
    pts = center + radius * np.exp(1j * th)
    return pts, 1j * radius * np.exp(1j * th) * half


def _piece_estimate(fvec, piece, n):
    x, w = _gl(n)
    pts, dz = _piece_points(piece, x)
    vals = np.asarray(fvec(pts), dtype=complex)
    return complex(np.sum(w * vals * dz))


def _split(piece):
    kind = piece[0]
    if kind == "seg":
        _, a, b = piece
        m = (a + b) / 2.0
        return ("seg", a, m), ("seg", m, b)
    _, c, r, th0, th1 = piece
    tm = (th0 + th1) / 2.0
    return ("arc", c, r, th0, tm), ("arc", c, r, tm, th1)


def _adaptive(fvec, piece, tol_abs, tol_rel, depth, counter, budget):
    counter[0] += 1
    if counter[0] > budget:
        raise NonConvergence("panel budget exhausted")
    coarse = _piece_estimate(fvec, piece, 16)
    fine = _piece_estimate(fvec, piece, 32)
    err = abs(fine - coarse)
    if err <= max(tol_abs, tol_rel * abs(fine)) or depth <= 0:
        return fine, err
    left, right = _split(piece)
    il, el = _adaptive(fvec, left, tol_abs / 2, tol_rel, depth - 1, counter, budget)
    ir, er = _adaptive(fvec, right, tol_abs / 2, tol_rel, depth - 1, counter, budget)
    return il + ir, el + er


def integrate_segment(fvec, a: complex, b: complex,
                      cfg: Optional[QuadratureConfig] = None) -> complex:
    """Adaptive line integral of f along the straight segment a -> b."""
    cfg = cfg or QuadratureConfig()
    val, err = _adaptive(fvec, ("seg", complex(a), complex(b)), cfg.tol_abs,
                         cfg.tol_rel, cfg.max_subdivisions, [0], cfg.oscillation_budget)
    if err > 10 * max(cfg.tol_abs, cfg.tol_rel * abs(val)):
        raise NonConvergence(f"segment integral error estimate {err:.3e}")
    return val


def integrate_arc(fvec, center: complex, radius: float, th0: float, th1: float,
                  cfg: Optional[QuadratureConfig] = None) -> complex:
    """Adaptive line integral along the arc center + radius*exp(i*theta)."""
    cfg = cfg or QuadratureConfig()
    val, err = _adaptive(fvec, ("arc", complex(center), radius, th0, th1),
                         cfg.tol_abs, cfg.tol_rel, cfg.max_subdivisions, [0],
                         cfg.oscillation_budget)
    if err > 10 * max(cfg.tol_abs, cfg.tol_rel * abs(val)):
        raise NonConvergence(f"arc integral error estimate {err:.3e}")
    return val


# ---------------------------------------------------------------------------
# contour assembly
# ---------------------------------------------------------------------------

def build_path(spec: ContourSpec):
    """Piece list for the truncated vertical line with its detours, bottom-up."""
    rp = spec.real_part
    pieces = []
    if spec.has_wings:
        tip = complex(rp - spec.wing_slope * spec.wing_height,
                      -(spec.height_cut + spec.wing_height))
        pieces.append(("seg", tip, complex(rp, -spec.height_cut)))
    z = complex(rp, -spec.height_cut)
    for d in sorted(spec.detours, key=lambda d: d.center.imag):
        p_in = complex(rp, d.center.imag - d.radius)
        a_in = d.center - 1j * d.radius
        a_out = d.center + 1j * d.radius
        p_out = complex(rp, d.center.imag + d.radius)
        if abs(z - p_in) > 0:
            pieces.append(("seg", z, p_in))
        if abs(p_in - a_in) > 0:
            pieces.append(("seg", p_in, a_in))
        if d.side == "right":
            pieces.append(("arc", d.center, d.radius, -math.pi / 2, math.pi / 2))
        else:
            pieces.append(("arc", d.center, d.radius, -math.pi / 2, -3 * math.pi / 2))
        if abs(a_out - p_out) > 0:
            pieces.append(("seg", a_out, p_out))
        z = p_out
    top = complex(rp, spec.height_cut)
    if abs(z - top) > 0:
        pieces.append(("seg", z, top))
    if spec.has_wings:
        tip = complex(rp - spec.wing_slope * spec.wing_height,
                      spec.height_cut + spec.wing_height)
        pieces.append(("seg", top, tip))
    return pieces


def _normalize_poles(poles, ncontours):
    """Poles may be a flat sequence (one contour) or one sequence per contour."""
    items = list(poles)
    if ncontours == 1:
        if len(items) == 1 and isinstance(items[0], (list, tuple, np.ndarray)):
            return (tuple(complex(p) for p in items[0]),)
        return (tuple(complex(p) for p in items),)
    if len(items) != ncontours:
        raise ValueError("need one pole sequence per contour")
    return tuple(tuple(complex(p) for p in np.atleast_1d(seq)) for seq in items)


def _check_poles(spec: ContourSpec, poles, clearance: float = 0.125):
    for p in poles or ():
        p = complex(p)
        if abs(p.imag) > spec.height_cut:
            continue
        if abs(p.real - spec.real_part) >= clearance:
            continue
        if any(abs(p - d.center) <= d.radius for d in spec.detours):
            continue
        raise PoleOnPath(f"pole at {p} within {clearance} of Re(s)={spec.real_part}")


def _integrate_spec(fvec, spec: ContourSpec, cfg: QuadratureConfig) -> complex:
    pieces = build_path(spec)
    total = 0.0 + 0.0j
    err = 0.0
    counter = [0]
    per_piece = cfg.tol_abs / max(1, len(pieces))
    for piece in pieces:
        v, e = _adaptive(fvec, piece, per_piece, cfg.tol_rel,
                         cfg.max_subdivisions, counter, cfg.oscillation_budget)
        total += v
        err += e
    if err > 10 * max(cfg.tol_abs, cfg.tol_rel * abs(total)):
        raise NonConvergence(f"contour error estimate {err:.3e} for Re(s)={spec.real_part}")
    return total


def contour_integral(f, contours, cfg: Optional[QuadratureConfig] = None,
                     poles=None) -> complex:
    """Integrate f over one or two ContourSpec paths.

    One contour: f(s_array) -> array.  Two contours: f(s1_scalar, s2_array)
    -> array; the s2 integral runs innermost.  ``poles`` optionally declares
    pole locations per contour; a declared pole within 1/8 of a path that has
    no covering detour raises PoleOnPath.
    """
    if isinstance(contours, ContourSpec):
        contours = (contours,)
    cfg = cfg or QuadratureConfig(tol_abs=min(c.tol_abs for c in contours),
                                  tol_rel=min(c.tol_rel for c in contours))
    if poles is not None:
        for spec, ps in zip(contours, _normalize_poles(poles, len(contours))):
            _check_poles(spec, ps)
    if len(contours) == 1:
        return _integrate_spec(f, contours[0], cfg)
    if len(contours) != 2:
        raise ValueError("contour_integral supports one or two contours")
    spec1, spec2 = contours
    inner_cfg = cfg.scaled(0.125)

    def outer(s1_arr):
        out = np.empty(len(s1_arr), dtype=complex)
        for i, s1 in enumerate(s1_arr):
            out[i] = _integrate_spec(lambda s2: f(s1, s2), spec2, inner_cfg)
        return out

    return _integrate_spec(outer, spec1, cfg)


# ---------------------------------------------------------------------------
# real-axis rules
# ---------------------------------------------------------------------------

def tanh_sinh(fvec, a: float, b: float, cfg: Optional[QuadratureConfig] = None,
              max_level: int = 11) -> complex:
    """Double-exponential rule on [a, b]; tolerates endpoint singularities.

    Node positions near the endpoints are computed as stable offsets so that
    integrable singularities are resolved to full precision.  The integrand
    is evaluated on arrays of interior points only.
    """
    cfg = cfg or QuadratureConfig()
    tmax = 6.0
    h = 1.0
    t = np.arange(-int(tmax / h), int(tmax / h) + 1) * h
    total = _ts_sum(fvec, t, a, b) * h
    prev = total
    for level in range(1, max_level + 1):
        h /= 2.0
        t_new = np.arange(-int(tmax / h), int(tmax / h) + 1) * h
        t_new = t_new[np.abs(np.round(t_new / (2 * h)) * 2 * h - t_new) > h / 2]
        total = prev / 2.0 + _ts_sum(fvec, t_new, a, b) * h
        err = abs(total - prev)
        if level >= 3 and err <= max(cfg.tol_abs, cfg.tol_rel * abs(total)):
            return total
        prev = total
    if abs(total - prev) > 10 * max(cfg.tol_abs, cfg.tol_rel * abs(total)):
        raise NonConvergence("tanh-sinh failed to converge")
    return total


def _ts_sum(fvec, t, a, b):
    half = (b - a) / 2.0
    u = (math.pi / 2) * np.sinh(t)
    p = np.exp(-2.0 * np.abs(u))
    offset = half * 2.0 * p / (1.0 + p)  # distance to the nearer endpoint
    x = np.where(u < 0, a + offset, b - offset)
    sech2 = 4.0 * p / (1.0 + p) ** 2
    w = half * (math.pi / 2) * np.cosh(t) * sech2
    keep = (offset > 0) & (w > 1e-300)
    if not np.any(keep):
        return 0.0 + 0.0j
    vals = np.asarray(fvec(x[keep]), dtype=complex)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    return complex(np.sum(vals * w[keep]))


def exp_sinh(fvec, a: float, cfg: Optional[QuadratureConfig] = None,
             scale: float = 1.0, max_level: int = 11) -> complex:
    """Double-exponential rule on [a, infinity) for decaying integrands."""
    cfg = cfg or QuadratureConfig()
    tmax = 3.8
    h = 1.0

    def level_sum(t):
        u = (math.pi / 2) * np.sinh(t)
        x = a + scale * np.exp(u)
        w = scale * (math.pi / 2) * np.cosh(t) * np.exp(u)
        keep = np.isfinite(x) & (w > 1e-300) & (w < 1e300)
        vals = np.asarray(fvec(x[keep]), dtype=complex)
        vals = np.where(np.isfinite(vals), vals, 0.0)
        return complex(np.sum(vals * w[keep]))

    t = np.arange(-int(tmax / h), int(tmax / h) + 1) * h
    prev = level_sum(t) * h
    total = prev
    for level in range(1, max_level + 1):
        h /= 2.0
        t_new = np.arange(-int(tmax / h), int(tmax / h) + 1) * h
        t_new = t_new[np.abs(np.round(t_new / (2 * h)) * 2 * h - t_new) > h / 2]
        total = prev / 2.0 + level_sum(t_new) * h
        err = abs(total - prev)
        if level >= 3 and err <= max(cfg.tol_abs, cfg.tol_rel * abs(total)):
            return total
        prev = total
    if abs(total - prev) > 10 * max(cfg.tol_abs, cfg.tol_rel * abs(total)):
        raise NonConvergence("exp-sinh failed to converge")
    return total


def wynn_epsilon(partial_sums) -> Tuple[complex, float]:
    """Accelerate a sequence of partial sums; return (limit, error estimate)."""
    s = [complex(v) for v in partial_sums]
    n = len(s)
    if n == 1:
        return s[0], abs(s[0])
    eps_prev2 = [0.0 + 0.0j] * (n + 1)
    eps_prev = list(s)
    best = s[-1]
    prev_best = s[-2]
    for k in range(1, n):
        cur = []
        for j in range(n - k):
            denom = eps_prev[j + 1] - eps_prev[j]
            if denom == 0:
                cur.append(eps_prev2[j + 1])
            else:
                cur.append(eps_prev2[j + 1] + 1.0 / denom)
        if k % 2 == 0 and cur:
            prev_best, best = best, cur[-1]
        eps_prev2 = eps_prev
        eps_prev = cur
        if not cur:
            break
    return best, abs(best - prev_best)


def oscillatory_tail(fvec, a: float, panel: float,
                     cfg: Optional[QuadratureConfig] = None,
                     max_panels: int = 240) -> complex:
    """Integral over [a, infinity) of a decaying oscillation.

    ``panel`` should be about a half-period of the dominant oscillation; the
    panel partial sums are then nearly alternating and Wynn's epsilon
    algorithm extracts the limit.
    """
    cfg = cfg or QuadratureConfig()
    x16, w16 = _gl(16)
    block = 24
    sums = []
    total = 0.0 + 0.0j
    start = a
    best, best_err = None, math.inf
    for round_no in range(max_panels // block):
        edges = start + panel * np.arange(block + 1)
        mids = (edges[:-1] + edges[1:]) / 2.0
        halves = panel / 2.0
        pts = (mids[:, None] + halves * x16[None, :]).ravel()
        vals = np.asarray(fvec(pts), dtype=complex).reshape(block, len(x16))
        panel_vals = halves * (vals * w16[None, :]).sum(axis=1)
        for pv in panel_vals:
            total += pv
            sums.append(total)
        best, best_err = wynn_epsilon(sums[-min(len(sums), 80):])
        if best_err <= max(cfg.tol_abs, cfg.tol_rel * abs(best)):
            return best
        start = float(edges[-1])
    if best_err > 100 * max(cfg.tol_abs, cfg.tol_rel * abs(best)):
        raise NonConvergence(f"oscillatory tail stalled at error {best_err:.3e}")
    return best
