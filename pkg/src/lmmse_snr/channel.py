"""Receive-correlated channel: exponential correlation matrix, spectra and power profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .linalg import hermitian_eigenvalues

PRESET_K = (2, 4, 8, 16, 32)

# interferer power classes (multiples of P) and their relative frequencies for K = 8, 16, 32
POWER_CLASSES = (1.0, 2.0, 4.0, 8.0, 16.0)
CLASS_FREQUENCIES = (1 / 8, 1 / 4, 1 / 4, 1 / 8, 1 / 4)


@dataclass(frozen=True)
class SystemConfig:
    """Link parameters.

    ``rho`` is the noise level, ``p0`` the power of the user of interest and
    ``powers`` the diagonal of the interferer power matrix (length ``k_users``).
    """

    n_rx: int
    k_users: int
    rho: float
    p0: float
    corr_a: float
    powers: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "powers", tuple(float(p) for p in self.powers))
        if int(self.n_rx) != self.n_rx or self.n_rx < 1:
            raise ValidationError(f"n_rx must be a positive integer, got {self.n_rx!r}")
        if int(self.k_users) != self.k_users or self.k_users < 1:
            raise ValidationError(f"k_users must be a positive integer, got {self.k_users!r}")
        if not (math.isfinite(self.corr_a) and 0.0 <= self.corr_a < 1.0):
            raise ValidationError(f"corr_a must lie in [0, 1), got {self.corr_a!r}")
        if not (math.isfinite(self.rho) and self.rho > 0.0):
            raise ValidationError(f"rho must be positive and finite, got {self.rho!r}")
        if not (math.isfinite(self.p0) and self.p0 > 0.0):
            raise ValidationError(f"p0 must be positive and finite, got {self.p0!r}")
        if len(self.powers) != self.k_users:
            raise ValidationError(
                f"powers has {len(self.powers)} entries but k_users = {self.k_users}"
            )

    @property
    def t(self):
        return 1.0 / self.rho

    @property
    def input_snr_db(self):
        return 10.0 * math.log10(self.p0 / self.rho)

    @classmethod
    def from_snr_db(cls, n_rx, k_users, snr_db, corr_a, powers=None, p0=1.0):
        """Build a config whose input SNR ``p0 / rho`` equals ``snr_db``.

        Without explicit ``powers`` the preset profile for ``k_users`` is used
        with base power ``P = p0``.
        """
        if powers is None:
            powers = power_profile(k_users, p0)
        rho = p0 / db_to_linear(snr_db)
        return cls(n_rx=n_rx, k_users=k_users, rho=rho, p0=p0, corr_a=corr_a, powers=tuple(powers))

    def with_snr_db(self, snr_db):
        return SystemConfig(
            n_rx=self.n_rx,
            k_users=self.k_users,
            rho=self.p0 / db_to_linear(snr_db),
            p0=self.p0,
            corr_a=self.corr_a,
            powers=self.powers,
        )

    def to_dict(self):
        return {
            "n_rx": self.n_rx,
            "k_users": self.k_users,
            "rho": self.rho,
            "p0": self.p0,
            "corr_a": self.corr_a,
            "powers": list(self.powers),
        }


@dataclass(frozen=True)
class SpectrumPair:
    """Diagonals of D (eigenvalues of the correlation matrix) and D-tilde (interferer powers)."""

    d: np.ndarray
    d_tilde: np.ndarray

    @property
    def n(self):
        return self.d.shape[0]

    @property
    def k(self):
        return self.d_tilde.shape[0]


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def build_correlation_matrix(n, k, a):
    """Exponential correlation ``sqrt(k/n) * a**|i-j|`` as an ``n x n`` real Toeplitz matrix."""
    if n < 1 or k < 1:
        raise ValidationError(f"n and k must be >= 1, got n={n}, k={k}")
    if not (math.isfinite(a) and 0.0 <= a < 1.0):
        raise ValidationError(f"corr_a must lie in [0, 1), got {a!r}")
    idx = np.arange(n)
    lag = np.abs(idx[:, None] - idx[None, :])
    # 0**0 == 1 keeps the a = 0 case an exact scaled identity
    return math.sqrt(k / n) * np.power(float(a), lag)


def correlation_spectrum(config):
    psi = build_correlation_matrix(config.n_rx, config.k_users, config.corr_a)
    d = np.asarray(hermitian_eigenvalues(psi), dtype=np.float64)
    return SpectrumPair(d=d, d_tilde=np.asarray(config.powers, dtype=np.float64))


def power_profile(k, base_power=1.0):
    """Preset interferer powers for ``k`` in {2, 4, 8, 16, 32}, ascending.

    K=2 gives [4P, 5P], K=4 gives [P, P, 2P, 4P]; larger powers of two split
    the users over the five power classes in the tabulated proportions.
    """
    if not (math.isfinite(base_power) and base_power > 0):
        raise ValidationError(f"base power must be positive, got {base_power!r}")
    if k == 2:
        mult = [4.0, 5.0]
    elif k == 4:
        mult = [1.0, 1.0, 2.0, 4.0]
    elif k in (8, 16, 32):
        mult = []
        for level, freq in zip(POWER_CLASSES, CLASS_FREQUENCIES):
            mult.extend([level] * int(round(k * freq)))
    else:
        raise ValidationError(
            f"no preset power profile for K={k} (presets: {PRESET_K}); supply a power file"
        )
    return [base_power * m for m in mult]


def read_power_file(path):
    """Read interferer powers: one positive decimal per line, blank lines ignored."""
    powers = []
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            value = float(line)
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: not a number: {line!r}") from None
        if not (math.isfinite(value) and value > 0):
            raise ValidationError(f"{path}:{lineno}: power must be positive and finite, got {line}")
        powers.append(value)
    if not powers:
        raise ValidationError(f"{path}: no powers found")
    return powers


def write_power_file(path, powers):
    Path(path).write_text("".join(f"{float(p)!r}\n" for p in powers))


def validate_config(config):
    """Return the spectrum pair of ``config`` after checking the boundedness and trace assumptions.

    Boundedness: every eigenvalue and power finite. Trace: the normalized
    traces ``Tr(D)/K`` and ``Tr(D~)/K`` strictly positive, which with
    nonnegative entries also rules out zero powers.
    """
    if not isinstance(config, SystemConfig):
        raise ValidationError(f"expected SystemConfig, got {type(config).__name__}")
    powers = np.asarray(config.powers, dtype=np.float64)
    if powers.size == 0:
        raise ValidationError("empty interferer power profile")
    if not np.all(np.isfinite(powers)):
        raise ValidationError("boundedness assumption violated: interferer powers must be finite")
    if np.any(powers <= 0):
        raise ValidationError(
            "trace assumption violated: interferer powers must all be strictly positive"
        )
    spec = correlation_spectrum(config)
    if spec.d.size == 0 or not np.all(np.isfinite(spec.d)):
        raise ValidationError("boundedness assumption violated: correlation spectrum not finite")
    if np.any(spec.d < 0):
        raise ValidationError("correlation matrix is not positive semidefinite")
    k = config.k_users
    if not (np.sum(spec.d) / k > 0 and np.sum(spec.d_tilde) / k > 0):
        raise ValidationError("trace assumption violated: normalized traces must be positive")
    return spec
