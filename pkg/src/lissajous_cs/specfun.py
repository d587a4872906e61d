"""Normalized 1D oscillator eigenfunctions and log-domain factorial ratios.

Everything here works at unit oscillator scale (m = omega = hbar = 1); a
frequency multiplier enters only through :class:`OscillatorScale`.

The eigenfunctions are generated by the three-term recurrence on the
*normalized* functions,

    psi_{n+1}(u) = sqrt(2/(n+1)) u psi_n(u) - sqrt(n/(n+1)) psi_{n-1}(u),

so no raw Hermite polynomial is ever formed.  The Gaussian factor is kept
out of the recurrence and the running values are rescaled in the log
domain, which keeps ``hermite_fn(500, 20.0)`` finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

__all__ = [
    "CapacityError",
    "DEFAULT_MAX_ORDER",
    "DEFAULT_MAX_FACTORIAL",
    "OscillatorScale",
    "LogFactorialTable",
    "LOG_FACTORIALS",
    "hermite_fn",
    "hermite_fn_deriv",
    "hermite_table",
    "hermite_table_with_deriv",
    "scaled_eigenfunction",
    "scaled_eigenfunction_deriv",
    "log_binomial_ratio",
]

DEFAULT_MAX_ORDER = 512
DEFAULT_MAX_FACTORIAL = 1024

_PI_M14 = np.pi ** -0.25
# rescale threshold for the running recurrence values (per sample point)
_BIG = 1e150
_LOG_BIG = np.log(_BIG)


class CapacityError(ValueError):
    """An index exceeds a configured table or recurrence capacity."""


@dataclass(frozen=True)
class OscillatorScale:
    """Inverse length scale sqrt(m*w/hbar) of one oscillator direction.

    In natural units this is ``sqrt(q)`` for x and ``sqrt(p)`` for y.
    """

    length_scale_inv: float

    def __post_init__(self):
        if not (self.length_scale_inv > 0 and np.isfinite(self.length_scale_inv)):
            raise ValueError(f"length_scale_inv must be positive, got {self.length_scale_inv}")

    @classmethod
    def from_frequency(cls, multiplier: float) -> "OscillatorScale":
        return cls(float(np.sqrt(multiplier)))


@dataclass(frozen=True)
class LogFactorialTable:
    """Immutable table ``values[n] = ln(n!)`` for ``n = 0..n_max``."""

    n_max: int = DEFAULT_MAX_FACTORIAL
    values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        vals = gammaln(np.arange(self.n_max + 1, dtype=float) + 1.0)
        vals[:2] = 0.0
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __call__(self, n):
        n = np.asarray(n)
        if np.any(n < 0) or np.any(n > self.n_max):
            raise CapacityError(f"factorial argument outside table range [0, {self.n_max}]")
        out = self.values[n]
        return float(out) if out.ndim == 0 else out


LOG_FACTORIALS = LogFactorialTable()


def log_binomial_ratio(qN: int, pK: int, qNmqK: int, table: LogFactorialTable = LOG_FACTORIALS) -> float:
    """ln[(qN)! / ((pK)! (qN - qK)!)].

    The arguments need not satisfy ``pK + qNmqK == qN``; for p != q the
    ratio is not a binomial coefficient.
    """
    return table(qN) - table(pK) - table(qNmqK)


def _check_order(n_max: int, max_order: int) -> None:
    if n_max < 0:
        raise ValueError("order must be non-negative")
    if n_max > max_order:
        raise CapacityError(f"order {n_max} exceeds the configured maximum {max_order}")


def hermite_table(n_max: int, u, max_order: int = DEFAULT_MAX_ORDER) -> np.ndarray:
    """Unit-scale eigenfunctions psi_0..psi_{n_max} at the points ``u``.

    Returns an array of shape ``(n_max + 1,) + u.shape``.
    """
    _check_order(n_max, max_order)
    u = np.asarray(u, dtype=float)
    shape = u.shape
    u = u.ravel()
    out = np.empty((n_max + 1, u.size))
    gauss_log = -0.5 * u * u

    # prev/cur hold psi_n * exp(u^2/2 - log_scale)
    log_scale = np.zeros_like(u)
    prev = np.zeros_like(u)
    cur = np.full_like(u, _PI_M14)
    out[0] = cur * np.exp(gauss_log)
    for n in range(n_max):
        nxt = np.sqrt(2.0 / (n + 1)) * u * cur - np.sqrt(n / (n + 1.0)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _BIG
        if big.any():
            cur[big] /= _BIG
            prev[big] /= _BIG
            log_scale[big] += _LOG_BIG
        out[n + 1] = cur * np.exp(log_scale + gauss_log)
    return out.reshape((n_max + 1,) + shape)


def hermite_table_with_deriv(n_max: int, u, max_order: int = DEFAULT_MAX_ORDER):
    """Eigenfunctions and their u-derivatives, both shaped like :func:`hermite_table`."""
    psi = hermite_table(n_max, u, max_order)
    u = np.asarray(u, dtype=float)
    dpsi = np.empty_like(psi)
    dpsi[0] = -u * psi[0]
    if n_max > 0:
        n = np.arange(1, n_max + 1).reshape((-1,) + (1,) * u.ndim)
        dpsi[1:] = np.sqrt(2.0 * n) * psi[:-1] - u * psi[1:]
    return psi, dpsi


def hermite_fn(n: int, u, max_order: int = DEFAULT_MAX_ORDER):
    """pi^{-1/4} (2^n n!)^{-1/2} exp(-u^2/2) H_n(u), via the normalized recurrence."""
    out = hermite_table(n, u, max_order)[n]
    return float(out) if out.ndim == 0 else out


def hermite_fn_deriv(n: int, u, max_order: int = DEFAULT_MAX_ORDER):
    """d psi_n / du = sqrt(2n) psi_{n-1}(u) - u psi_n(u)."""
    _, dpsi = hermite_table_with_deriv(n, u, max_order)
    out = dpsi[n]
    return float(out) if out.ndim == 0 else out


def scaled_eigenfunction(n: int, coord, scale: OscillatorScale, max_order: int = DEFAULT_MAX_ORDER):
    """Normalized eigenfunction sqrt(s) psi_n(s x) for inverse length scale s."""
    s = scale.length_scale_inv
    return np.sqrt(s) * hermite_fn(n, s * np.asarray(coord, dtype=float), max_order)


def scaled_eigenfunction_deriv(n: int, coord, scale: OscillatorScale, max_order: int = DEFAULT_MAX_ORDER):
    s = scale.length_scale_inv
    return s ** 1.5 * hermite_fn_deriv(n, s * np.asarray(coord, dtype=float), max_order)
