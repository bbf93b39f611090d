"""Numerical toolkit for SL(3,Z) long-element Kloosterman sums, GL(3) Bessel
kernels, minimal-weight Whittaker functions, and their spectral transforms."""

from .core import (
    GammaPole,
    NonConvergence,
    PoleOnPath,
    SpectralParams,
    WeylElement,
    casimir_eigenvalues,
    mu_d,
    weyl_act,
)

__version__ = "0.1.0"

__all__ = [
    "GammaPole",
    "NonConvergence",
    "PoleOnPath",
    "SpectralParams",
    "WeylElement",
    "casimir_eigenvalues",
    "mu_d",
    "weyl_act",
    "__version__",
]
