"""Analytic BER (QPSK, Gray) and saddle-point outage probability for a fitted generalized Gamma SNR."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .gengamma import cumulants, fit_from_moments, mgf, saddle_root
from .linalg import normal_cdf, normal_pdf

DEGENERATE_W0 = 1e-4
DEGENERATE_STEP = 1e-3


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre rule on (0, pi/2)."""

    nodes: int = 64

    def __post_init__(self):
        if int(self.nodes) != self.nodes or self.nodes < 8:
            raise ValidationError(f"quadrature needs at least 8 nodes, got {self.nodes!r}")

    def rule(self):
        return _gauss_legendre_half_pi(int(self.nodes))


@lru_cache(maxsize=16)
def _gauss_legendre_half_pi(n):
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.25 * math.pi
    phi = half * (x + 1.0)
    phi.setflags(write=False)
    weights = half * w
    weights.setflags(write=False)
    return phi, weights


def ber_qpsk(p, q=QuadratureSpec()):
    """BER = (1/pi) * int_0^{pi/2} MGF(-1 / (2 sin^2 phi)) dphi."""
    phi, w = q.rule()
    s = -0.5 / np.sin(phi) ** 2
    return float(np.dot(w, mgf(p, s)) / math.pi)


@dataclass(frozen=True)
class SaddlePoint:
    """Saddle-point quantities at one threshold; ``raw`` may stray outside [0, 1]."""

    y: float
    t_y: float
    w0: float
    u0: float
    raw: float


def _saddle_terms(p, y):
    t_y = saddle_root(p, y)
    k0, _, k2 = cumulants(p, t_y)
    w0 = math.copysign(math.sqrt(max(2.0 * (t_y * y - k0), 0.0)), t_y)
    u0 = t_y * math.sqrt(k2)
    if w0 == 0.0 or u0 == 0.0:
        raw = math.nan
    else:
        raw = float(normal_cdf(w0) + normal_pdf(w0) * (1.0 / w0 - 1.0 / u0))
    return SaddlePoint(float(y), float(t_y), w0, u0, raw)


def saddle_point_cdf(p, y):
    """Unclamped saddle-point CDF of the fitted law at threshold ``y``.

    The formula has a removable singularity at the mean (w0 = 0); there the
    value is linearly interpolated between ``y*(1 -/+ 1e-3)``.
    """
    if not (math.isfinite(y) and y > 0):
        raise ValidationError(f"threshold must be positive, got {y!r}")
    sp = _saddle_terms(p, y)
    if abs(sp.w0) >= DEGENERATE_W0:
        return sp
    lo_y, hi_y = y * (1.0 - DEGENERATE_STEP), y * (1.0 + DEGENERATE_STEP)
    lo, hi = _saddle_terms(p, lo_y), _saddle_terms(p, hi_y)
    frac = (y - lo_y) / (hi_y - lo_y)
    raw = lo.raw + frac * (hi.raw - lo.raw)
    return SaddlePoint(sp.y, sp.t_y, sp.w0, sp.u0, raw)


def outage_probability(p, y):
    """P(beta < y) from the saddle-point approximation, clamped to [0, 1]."""
    raw = saddle_point_cdf(p, y).raw
    return min(max(raw, 0.0), 1.0)


def fitted_params(config):
    from .moments import asymptotic_moments

    am = asymptotic_moments(config)
    return fit_from_moments(am.mean, am.variance, am.third_central)


def ber_curve(configs, q=QuadratureSpec(), trials=None, seed=None, workers=1):
    """One row per config, ordered by input SNR.

    With ``trials`` set, every row also carries the Monte Carlo BER drawn
    from ``seed`` (the same seed at every point, so the empirical curve uses
    common random numbers).
    """
    from .montecarlo import empirical_ber, run_trials

    rows = []
    for config in sorted(configs, key=lambda c: c.input_snr_db):
        row = {
            "snr_db": config.input_snr_db,
            "ber_theory": ber_qpsk(fitted_params(config), q),
            "ber_empirical": None,
            "trials": trials,
            "seed": seed,
        }
        if trials:
            samples = run_trials(config, trials, seed, workers=workers)
            row["ber_empirical"] = empirical_ber(samples)
        rows.append(row)
    return rows


def outage_curve(config, y_grid, trials=None, seed=None, workers=1):
    """Saddle-point outage over a threshold grid (sorted), optionally with the empirical CDF."""
    from .montecarlo import empirical_outage, run_trials

    grid = sorted(float(y) for y in y_grid)
    if not grid:
        return []
    p = fitted_params(config)
    samples = run_trials(config, trials, seed, workers=workers) if trials else None
    rows = []
    for y in grid:
        rows.append(
            {
                "threshold": y,
                "pout_saddle": outage_probability(p, y),
                "pout_empirical": empirical_outage(samples, y) if samples is not None else None,
            }
        )
    return rows
