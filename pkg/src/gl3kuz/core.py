"""Spectral-parameter arithmetic and the Weyl-group action.

The objects here are shared by every other module: the Langlands parameter
triple mu with mu1 + mu2 + mu3 = 0, the six Weyl permutations acting on it,
the one-parameter families mu_d(r) attached to weights d >= 2, and the small
error hierarchy used by the quadrature and special-function code.

The contour-integration engine lives in ``quadrature`` and is re-exported
here so callers can treat this module as the single entry point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
import scipy.special as sps

from .quadrature import (
    ContourSpec,
    Detour,
    NonConvergence,
    PoleOnPath,
    QuadratureConfig,
    contour_integral,
    integrate_arc,
    integrate_segment,
    tanh_sinh,
)


class GammaPole(ArithmeticError):
    """A closed-form evaluation hit a pole of the gamma function."""


# ---------------------------------------------------------------------------
# gamma helpers
# ---------------------------------------------------------------------------

def cgamma(z):
    """Complex gamma, vectorized."""
    return sps.gamma(np.asarray(z, dtype=complex))


def cloggamma(z):
    """Principal branch of log-gamma, vectorized.

    Inputs are coerced to complex so negative real arguments take the
    principal branch instead of scipy's real-dtype nan.
    """
    return sps.loggamma(np.asarray(z, dtype=complex))


def crgamma(z):
    """Reciprocal gamma 1/Gamma(z); zero at the poles, vectorized."""
    return sps.rgamma(np.asarray(z, dtype=complex))


def gamma_checked(z: complex, where: str = "gamma") -> complex:
    """Gamma with an explicit pole signal for scalar closed-form entry points."""
    zc = complex(z)
    if abs(zc.imag) < 1e-12 and zc.real <= 0.5 and abs(zc.real - round(zc.real)) < 1e-12:
        raise GammaPole(f"{where}: argument {zc} is at a gamma pole")
    return complex(sps.gamma(zc))


# ---------------------------------------------------------------------------
# spectral parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralParams:
    """Triple (mu1, mu2, mu3) with mu3 stored implicitly as -mu1-mu2."""

    mu1: complex
    mu2: complex

    @property
    def mu3(self) -> complex:
        return -self.mu1 - self.mu2

    @staticmethod
    def from_triple(mu: Iterable[complex], tol: float = 1e-9) -> "SpectralParams":
        m1, m2, m3 = (complex(x) for x in mu)
        if abs(m1 + m2 + m3) > tol * (1.0 + abs(m1) + abs(m2) + abs(m3)):
            raise ValueError(f"mu must sum to zero, got sum {m1 + m2 + m3}")
        return SpectralParams(m1, m2)

    def as_tuple(self) -> Tuple[complex, complex, complex]:
        return (self.mu1, self.mu2, self.mu3)

    def __iter__(self):
        return iter(self.as_tuple())

    def __len__(self) -> int:
        return 3

    def __getitem__(self, i: int) -> complex:
        return self.as_tuple()[i]

    def conj(self) -> "SpectralParams":
        return SpectralParams(self.mu1.conjugate(), self.mu2.conjugate())

    def neg(self) -> "SpectralParams":
        return SpectralParams(-self.mu1, -self.mu2)

    def norm(self) -> float:
        return max(abs(self.mu1), abs(self.mu2), abs(self.mu3))

    def is_tempered(self, tol: float = 1e-9) -> bool:
        return max(abs(self.mu1.real), abs(self.mu2.real), abs(self.mu3.real)) <= tol

    def r_of_mu_d(self, d: int, tol: float = 1e-9) -> complex:
        """Recover r when this triple equals mu_d(r); raise otherwise."""
        if d < 2:
            raise ValueError("the one-parameter family exists only for d >= 2")
        r = -self.mu3 / 2.0
        ref = mu_d(d, r)
        err = max(abs(self.mu1 - ref.mu1), abs(self.mu2 - ref.mu2))
        if err > tol * (1.0 + self.norm()):
            raise ValueError(f"mu is not on the weight-{d} curve (residual {err:.2e})")
        return r


def mu_d(d: int, r: complex) -> SpectralParams:
    """The weight-d parameter curve ((d-1)/2 + r, -(d-1)/2 + r, -2r)."""
    if d < 2:
        raise ValueError("mu_d requires d >= 2")
    half = (d - 1) / 2.0
    return SpectralParams(half + r, -half + r)


def as_mu(mu) -> SpectralParams:
    """Coerce a SpectralParams or any length-3 sequence to SpectralParams."""
    if isinstance(mu, SpectralParams):
        return mu
    return SpectralParams.from_triple(mu)


def casimir_eigenvalues(mu: SpectralParams) -> Tuple[complex, complex]:
    """Eigenvalues (lambda1, lambda2) of the two Casimir operators."""
    m1, m2, m3 = as_mu(mu).as_tuple()
    lam1 = 1.0 - (m1 * m1 + m2 * m2 + m3 * m3) / 2.0
    lam2 = m1 * m2 * m3
    return lam1, lam2


# ---------------------------------------------------------------------------
# Weyl group
# ---------------------------------------------------------------------------

# Permutations sigma with (mu^w)_i = mu_{sigma(i)}, 0-based.
_WEYL_PERMS = {
    "I": (0, 1, 2),
    "w2": (1, 0, 2),
    "w3": (0, 2, 1),
    "w4": (2, 0, 1),
    "w5": (1, 2, 0),
    "wl": (2, 1, 0),
}

_WEYL_MATRICES = {
    "I": np.eye(3),
    "w2": -np.array([[0.0, 1, 0], [1, 0, 0], [0, 0, 1]]),
    "w3": -np.array([[1.0, 0, 0], [0, 0, 1], [0, 1, 0]]),
    "w4": np.array([[0.0, 1, 0], [0, 0, 1], [1, 0, 0]]),
    "w5": np.array([[0.0, 0, 1], [1, 0, 0], [0, 1, 0]]),
    "wl": -np.array([[0.0, 0, 1], [0, 1, 0], [1, 0, 0]]),
}


@dataclass(frozen=True)
class WeylElement:
    name: str

    def __post_init__(self):
        if self.name not in _WEYL_PERMS:
            raise ValueError(f"unknown Weyl element {self.name!r}")

    @property
    def perm(self) -> Tuple[int, int, int]:
        return _WEYL_PERMS[self.name]

    @property
    def matrix(self) -> np.ndarray:
        return _WEYL_MATRICES[self.name].copy()

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # sigma_{vw} = sigma_v o sigma_w, matching mu^{vw} = (mu^v)^w.
        sv, sw = self.perm, other.perm
        comp = tuple(sv[sw[i]] for i in range(3))
        for name, perm in _WEYL_PERMS.items():
            if perm == comp:
                return WeylElement(name)
        raise AssertionError("Weyl composition left the group")


W_I = WeylElement("I")
W2 = WeylElement("w2")
W3 = WeylElement("w3")
W4 = WeylElement("w4")
W5 = WeylElement("w5")
WL = WeylElement("wl")
WEYL_ALL = (W_I, W2, W3, W4, W5, WL)
WEYL_STAB3 = (W_I, W4, W5)  # the order-three subgroup


def weyl_act(w: WeylElement, mu: SpectralParams) -> SpectralParams:
    """Permute the parameter triple: (mu^w)_i = mu_{sigma_w(i)}."""
    t = as_mu(mu).as_tuple()
    p = w.perm
    return SpectralParams(t[p[0]], t[p[1]])


# ---------------------------------------------------------------------------
# sign pairs
# ---------------------------------------------------------------------------

SIGN_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def v_diag(eps: Tuple[int, int]) -> np.ndarray:
    """The diagonal sign element diag(eps1, eps1*eps2, eps2)."""
    e1, e2 = eps
    return np.diag([float(e1), float(e1 * e2), float(e2)])


def parse_sign_pair(text: str) -> Tuple[int, int]:
    table = {"++": (1, 1), "+-": (1, -1), "-+": (-1, 1), "--": (-1, -1)}
    if text not in table:
        raise ValueError(f"sign pair must be one of ++,+-,-+,--, got {text!r}")
    return table[text]


def default_height_cut(mu_norm: float) -> float:
    """Default vertical truncation height for contour integrals."""
    return 40.0 + 10.0 * mu_norm


__all__ = [
    "NonConvergence",
    "PoleOnPath",
    "GammaPole",
    "SpectralParams",
    "WeylElement",
    "W_I",
    "W2",
    "W3",
    "W4",
    "W5",
    "WL",
    "WEYL_ALL",
    "WEYL_STAB3",
    "weyl_act",
    "mu_d",
    "as_mu",
    "casimir_eigenvalues",
    "SIGN_PAIRS",
    "v_diag",
    "parse_sign_pair",
    "default_height_cut",
    "cgamma",
    "cloggamma",
    "crgamma",
    "gamma_checked",
    "ContourSpec",
    "Detour",
    "QuadratureConfig",
    "contour_integral",
    "integrate_segment",
    "integrate_arc",
    "tanh_sinh",
]
