"""Monte Carlo sampler of the finite-dimensional LMMSE output SNR.

Trial ``i`` of a run draws everything from ``RngStream(seed, i)``: first the
user-of-interest vector ``z`` (N), then the interference matrix ``Z`` (N x K).
Trials are evaluated in vectorized chunks; chunking and worker count never
change the result.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import SystemConfig, build_correlation_matrix, validate_config
from .errors import ValidationError
from .linalg import RngStream, cholesky, hpd_solve, q_function, sample_standard_complex_gaussian

CHUNK = 512


@dataclass(frozen=True)
class SnrSampleSet:
    samples: np.ndarray
    config: SystemConfig
    seed: int
    trials: int
    moment_convention: str = "population (1/n)"

    def __post_init__(self):
        if self.samples.shape != (self.trials,):
            raise ValidationError("sample count does not match trials")


def _draw(gen, n, k):
    z = sample_standard_complex_gaussian(gen, n)
    big_z = sample_standard_complex_gaussian(gen, (n, k))
    return z, big_z


def _snr_batch(d, d_tilde, rho, p0, z, big_z):
    """beta for stacked draws: z is (B, N), big_z is (B, N, K)."""
    k = d_tilde.shape[0]
    n = d.shape[0]
    t = 1.0 / rho
    sqrt_d = np.sqrt(d)
    x = sqrt_d[None, :, None] * big_z * np.sqrt(d_tilde)[None, None, :]
    m = (t / k) * np.einsum("bik,bjk->bij", x, x.conj()) + np.eye(n)
    v = sqrt_d[None, :] * z
    sol = hpd_solve(m, v)
    quad = np.einsum("bi,bi->b", v.conj(), sol).real
    return (p0 * t / k) * quad


def sample_snr(spec, config, rng):
    """One draw of beta from the reduced (diagonalized) model."""
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    z, big_z = _draw(gen, spec.n, spec.k)
    return float(_snr_batch(spec.d, spec.d_tilde, config.rho, config.p0, z[None], big_z[None])[0])


def _chunk(spec, config, seed, start, stop):
    n, k = spec.n, spec.k
    zs = np.empty((stop - start, n), dtype=np.complex128)
    big_zs = np.empty((stop - start, n, k), dtype=np.complex128)
    for j, i in enumerate(range(start, stop)):
        zs[j], big_zs[j] = _draw(RngStream(seed, i).generator(), n, k)
    return _snr_batch(spec.d, spec.d_tilde, config.rho, config.p0, zs, big_zs)


def _check_trials(trials, seed):
    if int(trials) != trials or trials < 1:
        raise ValidationError(f"trials must be a positive integer, got {trials!r}")
    RngStream(seed, 0)  # validates the seed range


def run_trials(config, trials, seed, workers=1, chunk=CHUNK, spec=None):
    """Sample ``trials`` SNR values; trial ``i`` uses stream id ``i`` of ``seed``.

    ``workers > 1`` spreads chunks over processes. The output is assembled in
    trial order, so it is bit-identical for any ``workers``/``chunk``.
    """
    _check_trials(trials, seed)
    if spec is None:
        spec = validate_config(config)
    bounds = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_chunk, spec, config, seed, a, b) for a, b in bounds]
            parts = [f.result() for f in futures]
    else:
        parts = [_chunk(spec, config, seed, a, b) for a, b in bounds]
    samples = np.concatenate(parts)
    return SnrSampleSet(samples=samples, config=config, seed=int(seed), trials=int(trials))


def _full_chunk(config, factor, seed, start, stop):
    n, k = config.n_rx, config.k_users
    b = stop - start
    w0 = np.empty((b, n), dtype=np.complex128)
    w = np.empty((b, n, k), dtype=np.complex128)
    for j, i in enumerate(range(start, stop)):
        w0[j], w[j] = _draw(RngStream(seed, i).generator(), n, k)
    y = math.sqrt(config.p0 / k) * np.einsum("ij,bj->bi", factor, w0)
    sigma = np.einsum("ij,bjk->bik", factor, w) * np.sqrt(np.asarray(config.powers) / k)[None, None, :]
    m = np.einsum("bik,bjk->bij", sigma, sigma.conj()) + config.rho * np.eye(n)
    sol = hpd_solve(m, y)
    return np.einsum("bi,bi->b", y.conj(), sol).real


def run_trials_full_model(config, trials, seed, chunk=CHUNK):
    """Sample beta from the undiagonalized model ``y^H (Sigma Sigma^H + rho I)^{-1} y``.

    The correlation square root is the Cholesky factor of the correlation
    matrix; any factor ``L`` with ``L L^H = Psi`` gives the same law because
    the Gaussian channel matrix is unitarily invariant.
    """
    _check_trials(trials, seed)
    validate_config(config)
    psi = build_correlation_matrix(config.n_rx, config.k_users, config.corr_a)
    factor = cholesky(psi)
    parts = [
        _full_chunk(config, factor, seed, a, min(a + chunk, trials)) for a in range(0, trials, chunk)
    ]
    return SnrSampleSet(samples=np.concatenate(parts), config=config, seed=int(seed), trials=int(trials))


def _values(s):
    return s.samples if isinstance(s, SnrSampleSet) else np.asarray(s, dtype=np.float64)


def empirical_moments(s):
    """Sample mean, variance and third central moment (1/n normalization)."""
    x = _values(s)
    if x.size < 2:
        raise ValidationError(f"empirical moments need at least 2 samples, got {x.size}")
    m = float(np.mean(x))
    c = x - m
    return m, float(np.mean(c**2)), float(np.mean(c**3))


def empirical_ber(s):
    """Average of Q(sqrt(beta)) over the samples."""
    x = _values(s)
    return float(np.mean(q_function(np.sqrt(x))))


def empirical_outage(s, y):
    x = _values(s)
    return float(np.mean(x < y))
