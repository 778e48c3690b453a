"""Spectral detection and approach of finite-time PDE singularities.

Adaptive Fourier-Galerkin refinement driven by the determinant of the
reduced-model sensitivity matrix, with on-the-fly recovery of reduced-model
coefficients and three estimators for the blow-up exponent.
"""

from .spectral import ModeRange, SpectralField
from .models import ModelSpec, Partition, burgers_model, nls_model
from .integrators import IntegratorConfig
from .driver import RefinementEvent, RunConfig, RunOutcome, run_adaptive, run_fixed
from .exponents import ExponentReport, ScalingFit

__all__ = [
    "ModeRange", "SpectralField", "ModelSpec", "Partition",
    "burgers_model", "nls_model", "IntegratorConfig",
    "RefinementEvent", "RunConfig", "RunOutcome",
    "run_adaptive", "run_fixed", "ExponentReport", "ScalingFit",
]

__version__ = "0.1.0"
