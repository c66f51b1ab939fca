"""Generalized Gamma approximations of the LMMSE output SNR on receive-correlated MIMO channels."""

__version__ = "0.1.0"

from .channel import SystemConfig, SpectrumPair, power_profile, validate_config
from .errors import (
    ConvergenceError,
    LmmseSnrError,
    NotPositiveDefiniteError,
    NumericError,
    StabilityError,
    ValidationError,
)
from .gengamma import GenGammaParams, fit_from_moments
from .metrics import QuadratureSpec, ber_qpsk, outage_probability
from .moments import AsymptoticMoments, asymptotic_moments
from .montecarlo import SnrSampleSet, run_trials

__all__ = [
    "AsymptoticMoments",
    "ConvergenceError",
    "GenGammaParams",
    "LmmseSnrError",
    "NotPositiveDefiniteError",
    "NumericError",
    "QuadratureSpec",
    "SnrSampleSet",
    "SpectrumPair",
    "StabilityError",
    "SystemConfig",
    "ValidationError",
    "asymptotic_moments",
    "ber_qpsk",
    "fit_from_moments",
    "outage_probability",
    "power_profile",
    "run_trials",
    "validate_config",
]
