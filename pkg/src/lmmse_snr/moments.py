"""Deterministic equivalents and the first three asymptotic moments of the LMMSE output SNR."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .channel import validate_config
from .errors import ConvergenceError, NumericError, StabilityError, ValidationError

DEFAULT_TOL = 1e-12
MAX_ITER = 10_000
MIN_DAMPING = 1.0 / 64
RESIDUAL_WINDOW = 10


@dataclass(frozen=True)
class FixedPointSolution:
    delta: float
    delta_tilde: float
    t: float
    residual: float
    iterations: int
    tol: float = DEFAULT_TOL


@dataclass(frozen=True)
class AuxiliaryQuantities:
    t_diag: np.ndarray
    t_tilde_diag: np.ndarray
    gamma: float
    gamma_tilde: float


@dataclass(frozen=True)
class AsymptoticMoments:
    """Asymptotic moments of the SNR, already scaled by ``p0``.

    ``mean_norm``, ``omega_sq`` and ``nu`` refer to ``beta / p0`` (the latter
    two before the 1/K and 1/K^2 scalings); ``mean``, ``variance`` and
    ``third_central`` are the moments of ``beta`` itself.
    """

    delta: float
    delta_tilde: float
    gamma: float
    gamma_tilde: float
    mean_norm: float
    omega_sq: float
    nu: float
    mean: float
    variance: float
    third_central: float

    def as_dict(self):
        return dict(self.__dict__)


def _delta_map(d, t, other, k):
    return float(np.sum(d / (1.0 + t * other * d))) / k


def fixed_point_residual(spec, t, delta, delta_tilde):
    k = spec.k
    r1 = delta - _delta_map(spec.d, t, delta_tilde, k)
    r2 = delta_tilde - _delta_map(spec.d_tilde, t, delta, k)
    return max(abs(r1), abs(r2))


def solve_fixed_point(spec, t, tol=DEFAULT_TOL, init=None, max_iter=MAX_ITER):
    """Solve the coupled equations for ``(delta, delta_tilde)``::

        delta       = (1/K) sum_i d_i  / (1 + t * delta_tilde * d_i)
        delta_tilde = (1/K) sum_j dt_j / (1 + t * delta * dt_j)

    by alternating damped Picard steps. The damping factor starts at 1, is
    halved when a step would push the residual above the largest of the last
    few accepted residuals and doubled back (up to 1) after every accepted
    step. The window tolerates the transient growth the undamped map shows
    when ``t`` is large. ``init`` overrides the default start
    ``(Tr D / K, Tr D~ / K)``.
    """
    if not (math.isfinite(t) and t > 0):
        raise ValidationError(f"t must be positive and finite, got {t!r}")
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol!r}")
    d, dt, k = spec.d, spec.d_tilde, spec.k
    if init is None:
        delta, delta_tilde = float(np.sum(d)) / k, float(np.sum(dt)) / k
    else:
        delta, delta_tilde = (float(v) for v in init)
        if not (delta > 0 and delta_tilde > 0):
            raise ValidationError("fixed-point initialization must be positive")

    lam = 1.0
    residual = fixed_point_residual(spec, t, delta, delta_tilde)
    recent = deque([residual], maxlen=RESIDUAL_WINDOW)
    it = 0
    while residual > tol:
        if it >= max_iter:
            raise ConvergenceError(
                f"fixed point did not converge in {max_iter} iterations (residual {residual:.3e})",
                residual=residual,
            )
        it += 1
        new_delta = (1.0 - lam) * delta + lam * _delta_map(d, t, delta_tilde, k)
        new_delta_tilde = (1.0 - lam) * delta_tilde + lam * _delta_map(dt, t, new_delta, k)
        new_residual = fixed_point_residual(spec, t, new_delta, new_delta_tilde)
        if not new_residual <= max(recent) and lam > MIN_DAMPING:
            lam *= 0.5
            continue
        delta, delta_tilde, residual = new_delta, new_delta_tilde, new_residual
        recent.append(residual)
        lam = min(1.0, 2.0 * lam)

    if not (delta > 0 and delta_tilde > 0):
        raise NumericError(f"fixed point left the positive orthant: ({delta}, {delta_tilde})")
    return FixedPointSolution(delta, delta_tilde, t, residual, it, tol)


def auxiliary_quantities(spec, fp):
    """Diagonals of T and T-tilde plus ``gamma = Tr(D^2 T^2)/K`` and its tilde twin."""
    k, t = spec.k, fp.t
    t_diag = 1.0 / (1.0 + t * fp.delta_tilde * spec.d)
    t_tilde_diag = 1.0 / (1.0 + t * fp.delta * spec.d_tilde)
    gamma = float(np.sum((spec.d * t_diag) ** 2)) / k
    gamma_tilde = float(np.sum((spec.d_tilde * t_tilde_diag) ** 2)) / k

    for name, lhs, rhs in (
        ("delta", float(np.sum(spec.d * t_diag)) / k, fp.delta),
        ("delta_tilde", float(np.sum(spec.d_tilde * t_tilde_diag)) / k, fp.delta_tilde),
    ):
        if abs(lhs - rhs) > 10 * fp.tol * max(1.0, abs(rhs)):
            raise NumericError(f"Tr(D T)/K inconsistent with {name}: {lhs!r} vs {rhs!r}")

    stability = t * t * gamma * gamma_tilde
    if not stability < 1.0:
        raise StabilityError(f"t^2 * gamma * gamma_tilde = {stability:.6g} >= 1")
    return AuxiliaryQuantities(t_diag, t_tilde_diag, gamma, gamma_tilde)


def moments_from_spectrum(spec, rho, p0, tol=DEFAULT_TOL):
    fp = solve_fixed_point(spec, 1.0 / rho, tol)
    aux = auxiliary_quantities(spec, fp)
    k = spec.k
    g, gt = aux.gamma, aux.gamma_tilde
    gap = rho * rho - g * gt

    mean_norm = fp.delta / rho
    omega_sq = (g / rho**2) * (g * gt / gap + 1.0)
    tr3 = float(np.sum((spec.d * aux.t_diag) ** 3))
    tr3_tilde = float(np.sum((spec.d_tilde * aux.t_tilde_diag) ** 3))
    nu = 2.0 * rho**3 / (k * gap**3) * (tr3 - (g**3 / rho**3) * tr3_tilde)
    if not nu > 0:
        raise NumericError(
            f"asymptotic third moment nu = {nu:.6g} is not positive; "
            "the generalized Gamma fit needs a positive skew"
        )
    return AsymptoticMoments(
        delta=fp.delta,
        delta_tilde=fp.delta_tilde,
        gamma=g,
        gamma_tilde=gt,
        mean_norm=mean_norm,
        omega_sq=omega_sq,
        nu=nu,
        mean=p0 * mean_norm,
        variance=p0**2 * omega_sq / k,
        third_central=p0**3 * nu / k**2,
    )


def asymptotic_moments(config, tol=DEFAULT_TOL):
    spec = validate_config(config)
    return moments_from_spectrum(spec, config.rho, config.p0, tol)
