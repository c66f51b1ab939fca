"""Generalized Gamma law matched to three moments, through its MGF and cumulant function.

The law G(alpha, b, xi) has mean ``alpha*b``, variance ``alpha*b**2`` and third
central moment ``(xi+1)*alpha*b**3``. Its density has no closed form, so
everything downstream goes through

    log MGF(s) = alpha/(xi-1) * (1 - (1 - b*xi*s)**((xi-1)/xi))

which tends to the Gamma cumulant function ``-alpha*log(1 - b*s)`` as xi -> 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

XI_ONE_TOL = 1e-9
XI_ZERO_TOL = 1e-9


class MgfDomainError(ValidationError):
    def __init__(self, message, boundary=None):
        super().__init__(message)
        self.boundary = boundary


@dataclass(frozen=True)
class GenGammaParams:
    alpha: float
    b: float
    xi: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValidationError(f"alpha must be positive, got {self.alpha!r}")
        if not (math.isfinite(self.b) and self.b > 0):
            raise ValidationError(f"b must be positive, got {self.b!r}")
        if not (math.isfinite(self.xi) and self.xi > -1):
            raise ValidationError(f"xi must exceed -1, got {self.xi!r}")
        if abs(self.xi) < XI_ZERO_TOL:
            raise ValidationError("xi too close to 0: the MGF has no usable form there")

    @property
    def mean(self):
        return self.alpha * self.b

    @property
    def variance(self):
        return self.alpha * self.b**2

    @property
    def third_central(self):
        return (self.xi + 1.0) * self.alpha * self.b**3

    @property
    def is_gamma(self):
        return abs(self.xi - 1.0) < XI_ONE_TOL


class FitError(ValidationError):
    pass


def fit_from_moments(mean, variance, third_central):
    """Match G(alpha, b, xi) to a mean, variance and third central moment."""
    for name, value in (("mean", mean), ("variance", variance), ("third_central", third_central)):
        if not (math.isfinite(value) and value > 0):
            raise FitError(f"{name} must be positive and finite, got {value!r}")
    alpha = mean * mean / variance
    b = variance / mean
    xi = third_central * mean / variance**2 - 1.0
    return GenGammaParams(alpha, b, xi)


def _log_base(p, s):
    """``log(1 - b*xi*s)`` with a domain check; ``s`` may be an array."""
    s = np.asarray(s, dtype=np.float64)
    arg = -p.b * p.xi * s
    if np.any(arg <= -1.0):
        boundary = 1.0 / (p.b * p.xi)
        raise MgfDomainError(
            f"MGF argument outside its domain 1 - b*xi*s > 0 (boundary s* = {boundary:.6g})",
            boundary=boundary,
        )
    return np.log1p(arg)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def cgf(p, s):
    """Cumulant generating function ``K(s) = log MGF(s)``."""
    s = np.asarray(s, dtype=np.float64)
    if p.is_gamma:
        bs = -p.b * s
        if np.any(bs <= -1.0):
            raise MgfDomainError(
                f"MGF argument outside its domain 1 - b*s > 0 (boundary s* = {1.0 / p.b:.6g})",
                boundary=1.0 / p.b,
            )
        return _scalar(-p.alpha * np.log1p(bs))
    log_base = _log_base(p, s)
    e = p.xi - 1.0
    # alpha/e * (1 - base**(e/xi)) written with expm1 to stay accurate near xi = 1
    return _scalar(-(p.alpha / e) * np.expm1((e / p.xi) * log_base))


def mgf(p, s):
    out = np.exp(cgf(p, s))
    return _scalar(out)


def cumulants(p, t):
    """``(K(t), K'(t), K''(t))``.

    ``K' = alpha*b*(1 - b*xi*t)**(-1/xi)`` and
    ``K'' = alpha*b**2*(1 - b*xi*t)**(-1/xi - 1)``; both hold on either side of
    xi = 1 as well as at it.
    """
    k0 = cgf(p, t)
    xi = 1.0 if p.is_gamma else p.xi
    log_base = np.log1p(-p.b * xi * np.asarray(t, dtype=np.float64))
    k1 = p.alpha * p.b * np.exp(-log_base / xi)
    k2 = p.alpha * p.b**2 * np.exp((-1.0 / xi - 1.0) * log_base)
    return k0, _scalar(k1), _scalar(k2)


def saddle_root(p, y):
    """Solve ``K'(t) = y`` in closed form: ``t = (1 - (y/(alpha*b))**(-xi)) / (b*xi)``."""
    y = np.asarray(y, dtype=np.float64)
    if np.any(~(y > 0)):
        raise ValidationError(f"threshold must be positive, got {y}")
    ratio = y / p.mean
    if p.is_gamma:
        return _scalar((1.0 - 1.0 / ratio) / p.b)
    # -expm1(-xi*log r) == 1 - r**(-xi) without cancellation for r near 1
    return _scalar(-np.expm1(-p.xi * np.log(ratio)) / (p.b * p.xi))
