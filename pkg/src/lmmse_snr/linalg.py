"""Small dense linear algebra, Gaussian special functions and RNG streams.

Only what the channel model and the Monte Carlo kernel need: eigenvalues of
small Hermitian matrices (cyclic Jacobi), Cholesky-based Hermitian positive
definite solves that broadcast over leading batch axes, standard complex
Gaussian sampling from reproducible per-trial streams, and the normal
cdf/pdf/Q function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import NotPositiveDefiniteError, NumericError, ValidationError

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 30

_UINT64_MAX = 2**64 - 1


def as_hermitian(m, tol=HERMITIAN_TOL):
    """Return ``m`` as a square 2-D array after checking it is Hermitian.

    The tolerance is absolute for matrices with entries of order one and
    scales with the largest entry otherwise.
    """
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValidationError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix contains NaN or Inf")
    scale = max(1.0, float(np.max(np.abs(a))))
    asym = float(np.max(np.abs(a - a.conj().T)))
    if asym > tol * scale:
        raise ValidationError(f"matrix is not Hermitian (max |m - m^H| = {asym:.3e})")
    return a


def hermitian_eigenvalues(m, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.

    Real symmetric input stays in real arithmetic. Iteration stops once the
    off-diagonal Frobenius norm drops below ``tol * ||m||_F``.
    """
    a = as_hermitian(m)
    if np.iscomplexobj(a) and np.any(a.imag != 0):
        a = a.astype(np.complex128, copy=True)
        is_complex = True
    else:
        a = np.array(a.real, dtype=np.float64, copy=True)
        is_complex = False
    # exact symmetrization; the check above bounds what this discards
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    norm = np.linalg.norm(a)
    if n == 1 or norm == 0.0:
        return np.sort(np.real(np.diag(a)))

    target = tol * norm
    off = _off_norm(a)
    for _ in range(max_sweeps):
        if off < target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]] zeroes a[p, q]
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=a.dtype)
                cols = a[:, [p, q]] @ g
                a[:, p] = cols[:, 0]
                a[:, q] = cols[:, 1]
                rows = g.conj().T @ a[[p, q], :]
                a[p, :] = rows[0]
                a[q, :] = rows[1]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        off = _off_norm(a)
    else:
        if off >= target:
            raise NumericError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal residual {off:.3e}, target {target:.3e})"
            )
    if is_complex:
        return np.sort(np.diag(a).real)
    return np.sort(np.diag(a))


def _off_norm(a):
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.linalg.norm(off))


def cholesky(m):
    """Lower Cholesky factor of Hermitian positive definite matrices.

    ``m`` may carry leading batch axes, ``(..., n, n)``; the column loop is
    shared across the batch.
    """
    a = np.asarray(m)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValidationError(f"expected square matrices, got shape {a.shape}")
    dtype = np.result_type(a.dtype, np.float64)
    n = a.shape[-1]
    low = np.zeros(a.shape, dtype=dtype)
    for j in range(n):
        row = low[..., j, :j]
        pivot = a[..., j, j].real - np.sum((row * row.conj()).real, axis=-1)
        if not np.all(pivot > 0.0):
            worst = float(np.min(pivot))
            raise NotPositiveDefiniteError(
                f"non-positive pivot {worst:.3e} at column {j}: matrix is not positive definite"
            )
        diag = np.sqrt(pivot)
        low[..., j, j] = diag
        if j + 1 < n:
            below = a[..., j + 1 :, j] - np.einsum("...ik,...k->...i", low[..., j + 1 :, :j], row.conj())
            low[..., j + 1 :, j] = below / diag[..., None]
    return low


def forward_substitution(low, b):
    """Solve ``low @ x = b`` for lower-triangular ``low`` (batched)."""
    n = low.shape[-1]
    x = np.zeros(np.broadcast_shapes(low.shape[:-1], b.shape), dtype=np.result_type(low, b))
    for i in range(n):
        acc = b[..., i] - np.einsum("...k,...k->...", low[..., i, :i], x[..., :i])
        x[..., i] = acc / low[..., i, i]
    return x


def back_substitution_adjoint(low, y):
    """Solve ``low^H @ x = y`` for lower-triangular ``low`` (batched)."""
    n = low.shape[-1]
    x = np.zeros(np.broadcast_shapes(low.shape[:-1], y.shape), dtype=np.result_type(low, y))
    for i in range(n - 1, -1, -1):
        # row i of low^H is conj(low[:, i])
        acc = y[..., i] - np.einsum("...k,...k->...", low[..., i + 1 :, i].conj(), x[..., i + 1 :])
        x[..., i] = acc / low[..., i, i].conj()
    return x


def hpd_solve(m, rhs):
    """Solve ``m @ x = rhs`` for Hermitian positive definite ``m``.

    Works on a single system or a stack of them: ``m`` is ``(..., n, n)`` and
    ``rhs`` is ``(..., n)``.
    """
    rhs = np.asarray(rhs)
    low = cholesky(m)
    if rhs.shape[-1] != low.shape[-1]:
        raise ValidationError(f"rhs length {rhs.shape[-1]} does not match matrix size {low.shape[-1]}")
    return back_substitution_adjoint(low, forward_substitution(low, rhs))


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by ``(seed, stream_id)``.

    Backed by the counter-based Philox generator keyed on the 128-bit pair,
    so distinct stream ids never share key material and need no coordination.
    The dataclass itself is immutable; :meth:`generator` hands out a fresh
    generator positioned at the start of the stream.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= int(value) <= _UINT64_MAX:
                raise ValidationError(f"{name} must be an unsigned 64-bit integer, got {value!r}")

    @property
    def key(self):
        return int(self.seed) | (int(self.stream_id) << 64)

    def generator(self):
        return np.random.Generator(np.random.Philox(key=self.key))

    def substream(self, stream_id):
        return RngStream(self.seed, stream_id)


def sample_standard_complex_gaussian(rng, n):
    """Draw ``n`` i.i.d. CN(0, 1) values (variance 1/2 per real component).

    ``rng`` is an :class:`RngStream` (sampled from its start) or an already
    running ``numpy.random.Generator``. ``n`` may be an int or a shape tuple.
    """
    shape = (n,) if np.isscalar(n) else tuple(n)
    if any(int(s) < 1 for s in shape):
        raise ValidationError(f"sample size must be >= 1, got {n}")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    draws = gen.standard_normal(shape + (2,))
    return (draws[..., 0] + 1j * draws[..., 1]) * math.sqrt(0.5)


def normal_cdf(x):
    return special.ndtr(x)


def normal_pdf(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return out if out.ndim else float(out)


def q_function(x):
    """Gaussian tail ``Q(x) = P(N(0,1) > x)``, accurate in the far tail."""
    return 0.5 * special.erfc(np.asarray(x, dtype=np.float64) / math.sqrt(2.0))
