"""Lissajous coherent states on a degenerate subspace of the 2D oscillator.

The subspace (N, p, q) is spanned by |pK>_x |q(N-K)>_y, K = 0..N, all with
weighted number q*n_x + p*n_y = Npq.  A state is stored as its coefficient
vector C_K over that basis together with the amplitude zeta = alpha^p / beta^q.

Two independent constructions are provided:

* :func:`build_by_projection` projects the Glauber product |alpha>|beta>
  term by term and normalizes.
* :func:`build_by_recurrence` iterates the ladder relation
  (a_x^p - zeta a_y^q)|psi> = 0 one coefficient at a time.

Both work in log-magnitude + phase so factorial ratios at qN ~ 100 do not
overflow, and both fix the global phase so that C_0 is real and positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import logsumexp

from .specfun import LOG_FACTORIALS, CapacityError

__all__ = [
    "DegenerateSubspace",
    "ComplexAmplitude",
    "GlauberProduct",
    "LcsState",
    "StateTag",
    "StateClass",
    "DegenerateAmplitudeError",
    "ZeroProjectionError",
    "ConsistencyError",
    "canonical_angle",
    "build_by_projection",
    "build_by_recurrence",
    "classify",
    "apply_weighted_number",
    "annihilation_residual",
    "evolve_glauber",
    "glauber_for_zeta",
    "number_expectations",
    "phase_aligned_distance",
]

DEFAULT_CLASSIFY_TOL = 1e-9
NORM_TOL = 1e-12


class DegenerateAmplitudeError(ValueError):
    pass


class ZeroProjectionError(ValueError):
    """The Glauber product has no component in the requested subspace."""


class ConsistencyError(RuntimeError):
    """Coefficients do not scale uniformly under the weighted number operator."""


def canonical_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    r = math.remainder(float(theta), 2.0 * math.pi)
    return math.pi if r <= -math.pi else r


@dataclass(frozen=True)
class DegenerateSubspace:
    N: int
    p: int = 1
    q: int = 1

    def __post_init__(self):
        for name in ("N", "p", "q"):
            v = getattr(self, name)
            if int(v) != v:
                raise ValueError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.N < 0:
            raise ValueError(f"N must be non-negative, got {self.N}")
        if self.p < 1 or self.q < 1:
            raise ValueError(f"p and q must be positive, got p={self.p}, q={self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p and q must be coprime, got p={self.p}, q={self.q}")

    @property
    def dim(self) -> int:
        return self.N + 1

    @property
    def eigenvalue(self) -> int:
        return self.N * self.p * self.q

    def levels(self) -> tuple[np.ndarray, np.ndarray]:
        """Fock levels (pK, q(N-K)) of each basis element."""
        K = np.arange(self.N + 1)
        return self.p * K, self.q * (self.N - K)

    def log_weights(self) -> np.ndarray:
        """ln[(qN)! / ((pK)! (qN-qK)!)] for K = 0..N."""
        nx, ny = self.levels()
        return LOG_FACTORIALS(self.q * self.N) - LOG_FACTORIALS(nx) - LOG_FACTORIALS(ny)


@dataclass(frozen=True)
class ComplexAmplitude:
    """zeta = modulus * exp(i phase) with phase in (-pi, pi]; modulus may be inf."""

    modulus: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.modulus >= 0:
            raise ValueError(f"modulus must be non-negative, got {self.modulus}")
        object.__setattr__(self, "modulus", float(self.modulus))
        object.__setattr__(self, "phase", canonical_angle(self.phase))

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexAmplitude":
        return cls(abs(z), np.angle(z))

    @property
    def value(self) -> complex:
        return self.modulus * complex(math.cos(self.phase), math.sin(self.phase))

    def conjugate(self) -> "ComplexAmplitude":
        return ComplexAmplitude(self.modulus, -self.phase)


@dataclass(frozen=True)
class GlauberProduct:
    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise ValueError("Glauber amplitudes must be finite")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def zeta(self, p: int, q: int) -> ComplexAmplitude:
        a, b = abs(self.alpha), abs(self.beta)
        phase = p * np.angle(self.alpha) - q * np.angle(self.beta)
        if b == 0:
            if a == 0:
                return ComplexAmplitude(0.0, 0.0)
            return ComplexAmplitude(math.inf, phase)
        if a == 0:
            return ComplexAmplitude(0.0, phase)
        return ComplexAmplitude(math.exp(p * math.log(a) - q * math.log(b)), phase)


@dataclass(frozen=True, eq=False)
class LcsState:
    """Normalized coefficients C_K over the basis |pK>|q(N-K)>."""

    subspace: DegenerateSubspace
    zeta: ComplexAmplitude
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (self.subspace.dim,):
            raise ValueError(f"expected {self.subspace.dim} coefficients, got shape {c.shape}")
        norm = np.sum(np.abs(c) ** 2)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"coefficients are not normalized (sum |C|^2 = {norm!r})")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self) -> int:
        return self.subspace.N

    @property
    def p(self) -> int:
        return self.subspace.p

    @property
    def q(self) -> int:
        return self.subspace.q

    def fock_amplitudes(self) -> np.ndarray:
        """Dense amplitude array over (n_x, n_y) in [0, pN] x [0, qN]."""
        sub = self.subspace
        out = np.zeros((sub.p * sub.N + 1, sub.q * sub.N + 1), dtype=complex)
        nx, ny = sub.levels()
        out[nx, ny] = self.coeffs
        return out


def _unit(phase) -> np.ndarray:
    """exp(i phase), exact on the real and imaginary axes.

    Keeps standing-wave states (zeta phase 0 or pi) exactly real instead of
    carrying ~1e-16 imaginary parts from sin(K pi).
    """
    phase = np.asarray(phase, dtype=float)
    c, s = np.cos(phase), np.sin(phase)
    tol = 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(phase))
    on_real = np.abs(s) < tol
    on_imag = np.abs(c) < tol
    c = np.where(on_real, np.sign(c), np.where(on_imag, 0.0, c))
    s = np.where(on_imag, np.sign(s), np.where(on_real, 0.0, s))
    return c + 1j * s


def _finish(sub: DegenerateSubspace, zeta: ComplexAmplitude, logmag: np.ndarray, units: np.ndarray) -> LcsState:
    logmag = logmag - 0.5 * logsumexp(2.0 * logmag)
    coeffs = np.exp(logmag) * units
    # C_0 real positive; fall back to the largest coefficient if C_0 underflowed
    ref = 0 if coeffs[0] != 0 else int(np.argmax(logmag))
    coeffs = coeffs * np.conj(units[ref])
    coeffs[ref] = abs(coeffs[ref])
    return LcsState(sub, zeta, coeffs)


def build_by_projection(sub: DegenerateSubspace, g: GlauberProduct) -> LcsState:
    """Project |alpha>_x |beta>_y onto the subspace and normalize.

    The K-th projected amplitude is alpha^{pK} beta^{q(N-K)} / sqrt((pK)! (q(N-K))!);
    the common Gaussian prefactor drops out in normalization.
    """
    nx, ny = sub.levels()
    a, b = abs(g.alpha), abs(g.beta)
    if a == 0 and b == 0:
        if sub.N == 0:
            return LcsState(sub, ComplexAmplitude(0.0), np.ones(1))
        raise ZeroProjectionError(f"vacuum has no component in the subspace with Npq = {sub.eigenvalue}")
    zeta = g.zeta(sub.p, sub.q)
    ln_a = math.log(a) if a > 0 else -math.inf
    ln_b = math.log(b) if b > 0 else -math.inf
    with np.errstate(invalid="ignore"):
        # 0 * -inf only where a power is zero, i.e. 0^0 = 1
        logmag = np.where(nx > 0, nx * ln_a, 0.0) + np.where(ny > 0, ny * ln_b, 0.0)
    logmag = logmag - 0.5 * (LOG_FACTORIALS(nx) + LOG_FACTORIALS(ny))
    units = _unit(nx * np.angle(g.alpha) + ny * np.angle(g.beta))
    return _finish(sub, zeta, logmag, units)


def build_by_recurrence(sub: DegenerateSubspace, zeta: ComplexAmplitude) -> LcsState:
    """Solve (a_x^p - zeta a_y^q)|psi> = 0 on the subspace coefficient by coefficient.

    C_{K+1} = zeta C_K sqrt[(qN-qK)! (pK)! / ((qN-qK-q)! (pK+p)!)], then normalize.
    """
    if not math.isfinite(zeta.modulus):
        raise DegenerateAmplitudeError("recurrence needs a finite zeta; use build_by_projection for beta = 0")
    N, p, q = sub.N, sub.p, sub.q
    if q * N > LOG_FACTORIALS.n_max or p * N > LOG_FACTORIALS.n_max:
        raise CapacityError(f"qN = {q * N} exceeds the factorial table")
    lf = LOG_FACTORIALS.values
    ln_z = math.log(zeta.modulus) if zeta.modulus > 0 else -math.inf
    u = complex(_unit(zeta.phase))
    logmag = np.empty(N + 1)
    units = np.empty(N + 1, dtype=complex)
    logmag[0] = 0.0
    units[0] = 1.0
    for K in range(N):
        step = 0.5 * (lf[q * (N - K)] + lf[p * K] - lf[q * (N - K) - q] - lf[p * K + p])
        logmag[K + 1] = logmag[K] + ln_z + step
        units[K + 1] = units[K] * u
    return _finish(sub, zeta, logmag, units)


def glauber_for_zeta(sub: DegenerateSubspace, zeta: ComplexAmplitude, beta: complex = 1.0) -> GlauberProduct:
    """One Glauber product whose projection onto ``sub`` has amplitude ``zeta``."""
    beta = complex(beta)
    target = zeta.phase + sub.q * np.angle(beta)
    mod = (zeta.modulus * abs(beta) ** sub.q) ** (1.0 / sub.p)
    return GlauberProduct(mod * np.exp(1j * target / sub.p), beta)


class StateTag(str, Enum):
    STANDING_WAVE = "StandingWave"
    VORTEX_LIMIT = "VortexLimit"
    INTERMEDIATE = "Intermediate"


@dataclass(frozen=True)
class StateClass:
    """Phase-condition class of a state.

    ``circulation_sign`` is the sign of sin(theta).  Measured on the current
    field, +1 is clockwise flow (negative winding number) and -1 is
    counterclockwise.
    """

    tag: StateTag
    circulation_sign: int


def classify(state: LcsState, tol: float = DEFAULT_CLASSIFY_TOL) -> StateClass:
    if not 0 < tol <= math.pi / 8:
        raise ValueError(f"tol must lie in (0, pi/8], got {tol}")
    theta = state.zeta.phase
    d_standing = abs(math.remainder(theta, math.pi))
    d_vortex = abs(math.remainder(theta - math.pi / 2, math.pi))
    sign = 1 if math.sin(theta) > 0 else -1
    if d_standing <= tol:
        return StateClass(StateTag.STANDING_WAVE, 0)
    if d_vortex <= tol:
        return StateClass(StateTag.VORTEX_LIMIT, sign)
    return StateClass(StateTag.INTERMEDIATE, sign)


def apply_weighted_number(state: LcsState, tol: float = 1e-12) -> int:
    """Apply q n_x + p n_y to the Fock amplitudes and return the common eigenvalue."""
    sub = state.subspace
    fock = state.fock_amplitudes()
    nx = np.arange(fock.shape[0])[:, None]
    ny = np.arange(fock.shape[1])[None, :]
    image = (sub.q * nx + sub.p * ny) * fock
    support = np.abs(fock) > 0
    if not support.any():
        raise ConsistencyError("state has no support")
    ratios = image[support] / fock[support]
    lam = ratios[np.argmax(np.abs(fock[support]))].real
    if np.max(np.abs(ratios - lam)) > tol * max(1.0, abs(lam)):
        raise ConsistencyError("components scale non-uniformly under the weighted number operator")
    return int(round(lam))


def annihilation_residual(state: LcsState) -> float:
    """Relative norm of (a_x^p - zeta a_y^q)|psi>.

    Zero (to rounding) exactly for coefficients obeying the ladder recurrence;
    a single corrupted coefficient shows up here.
    """
    fock = state.fock_amplitudes()
    if not math.isfinite(state.zeta.modulus):
        # beta = 0 limit: the relation degenerates to a_y^q |psi> = 0
        return float(np.linalg.norm(_lower(fock, state.q, axis=1)))
    lhs = _lower(fock, state.p, axis=0)
    rhs = state.zeta.value * _lower(fock, state.q, axis=1)
    scale = np.linalg.norm(lhs) + np.linalg.norm(rhs)
    return float(np.linalg.norm(lhs - rhs) / scale) if scale > 0 else 0.0


def _lower(fock: np.ndarray, power: int, axis: int) -> np.ndarray:
    """Apply a^power along ``axis`` of a dense Fock array (shape preserved)."""
    n = np.arange(fock.shape[axis])
    out = np.zeros_like(fock)
    lf = LOG_FACTORIALS.values
    src = n[power:]
    factor = np.exp(0.5 * (lf[src] - lf[src - power]))
    if axis == 0:
        out[: len(src)] = factor[:, None] * fock[power:]
    else:
        out[:, : len(src)] = factor[None, :] * fock[:, power:]
    return out


def number_expectations(state: LcsState) -> tuple[float, float]:
    """<n_x>, <n_y> of the state."""
    w = np.abs(state.coeffs) ** 2
    nx, ny = state.subspace.levels()
    return float(w @ nx), float(w @ ny)


def evolve_glauber(g: GlauberProduct, omega_x: float, omega_y: float, t: float) -> GlauberProduct:
    """Free evolution alpha -> alpha e^{-i w_x t}, beta -> beta e^{-i w_y t} (global phase dropped)."""
    return GlauberProduct(g.alpha * np.exp(-1j * omega_x * t), g.beta * np.exp(-1j * omega_y * t))


def phase_aligned_distance(a: LcsState, b: LcsState) -> float:
    """max_K |a_K - e^{i phi} b_K| with phi chosen to align the largest component."""
    k = int(np.argmax(np.abs(a.coeffs)))
    if abs(b.coeffs[k]) == 0:
        return float(np.max(np.abs(a.coeffs - b.coeffs)))
    rot = a.coeffs[k] / b.coeffs[k]
    rot /= abs(rot)
    return float(np.max(np.abs(a.coeffs - rot * b.coeffs)))
