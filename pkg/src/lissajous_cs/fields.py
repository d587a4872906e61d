"""Configuration-space fields of a Lissajous coherent state.

Psi(x, y) = sum_K C_K psi_{pK}(x; sqrt q) psi_{q(N-K)}(y; sqrt p) is separable
term by term, so each evaluation builds 1D tables once per direction and
combines them with a fixed-order sum over K (bitwise reproducible, no BLAS
reductions).  Gradients come from the analytic eigenfunction derivatives.

Array convention: ``values[i, j]`` sits at ``(x[i], y[j])``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .specfun import hermite_table_with_deriv
from .states import LcsState

__all__ = [
    "Grid2D",
    "WaveField",
    "ScalarField",
    "VectorField",
    "NodalCrossingError",
    "UndersamplingError",
    "MassDeficitError",
    "eval_wavefunction",
    "eval_at_points",
    "probability_density",
    "current_density",
    "phase_field",
    "phase_gradient_current",
    "divergence",
    "interior",
    "trapezoid_weights",
    "total_mass",
    "current_magnitude_integral",
    "winding_number",
    "fringe_visibility",
    "branch_overlap",
    "localization_mass",
]

DEFAULT_RHO_FLOOR_REL = 1e-12


class NodalCrossingError(ValueError):
    """A sampled point has density below the phase floor."""


class UndersamplingError(ValueError):
    pass


class MassDeficitError(ValueError):
    """The grid does not capture the support of the density."""


@dataclass(frozen=True)
class Grid2D:
    x_min: float = -8.0
    x_max: float = 8.0
    y_min: float = -8.0
    y_max: float = 8.0
    nx: int = 401
    ny: int = 401

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("grid bounds must satisfy max > min")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least two points per axis")

    @classmethod
    def square(cls, half_width: float = 8.0, n: int = 401) -> "Grid2D":
        return cls(-half_width, half_width, -half_width, half_width, n, n)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    @property
    def hx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def hy(self) -> float:
        return (self.y_max - self.y_min) / (self.ny - 1)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="ij")

    def refined(self) -> "Grid2D":
        """Same domain, half the spacing."""
        return Grid2D(self.x_min, self.x_max, self.y_min, self.y_max, 2 * self.nx - 1, 2 * self.ny - 1)

    def coarsened(self) -> "Grid2D":
        """Same domain, double the spacing (point counts must be odd)."""
        if self.nx % 2 == 0 or self.ny % 2 == 0:
            raise ValueError("coarsening needs odd point counts")
        return Grid2D(self.x_min, self.x_max, self.y_min, self.y_max, (self.nx + 1) // 2, (self.ny + 1) // 2)

    def contains(self, x, y) -> bool:
        x, y = np.asarray(x), np.asarray(y)
        return bool(np.all((x >= self.x_min) & (x <= self.x_max) & (y >= self.y_min) & (y <= self.y_max)))


@dataclass(frozen=True, eq=False)
class WaveField:
    grid: Grid2D
    psi: np.ndarray = field(repr=False)
    grad: np.ndarray = field(repr=False)  # (nx, ny, 2): dPsi/dx, dPsi/dy
    state: LcsState | None = None


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: Grid2D
    values: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class VectorField:
    grid: Grid2D
    values: np.ndarray = field(repr=False)  # (nx, ny, 2)


def _tables(state: LcsState, x, y):
    """Scaled 1D eigenfunction tables (value, derivative) for both directions."""
    sub = state.subspace
    nx_levels, ny_levels = sub.levels()
    sx, sy = np.sqrt(sub.q), np.sqrt(sub.p)
    px, dpx = hermite_table_with_deriv(int(nx_levels.max()), sx * np.asarray(x, dtype=float))
    py, dpy = hermite_table_with_deriv(int(ny_levels.max()), sy * np.asarray(y, dtype=float))
    X = np.sqrt(sx) * px[nx_levels]
    dX = sx ** 1.5 * dpx[nx_levels]
    Y = np.sqrt(sy) * py[ny_levels]
    dY = sy ** 1.5 * dpy[ny_levels]
    return X, dX, Y, dY


def _separable(state: LcsState, x, y, with_grad: bool = True):
    """Psi (and gradient components) on the outer product of 1D coordinates."""
    X, dX, Y, dY = _tables(state, x, y)
    shape = (len(X[0]), len(Y[0]))
    psi = np.zeros(shape, dtype=complex)
    gx = np.zeros(shape, dtype=complex) if with_grad else None
    gy = np.zeros(shape, dtype=complex) if with_grad else None
    for K, c in enumerate(state.coeffs):
        if c == 0:
            continue
        cx = c * X[K]
        psi += np.multiply.outer(cx, Y[K])
        if with_grad:
            gx += np.multiply.outer(c * dX[K], Y[K])
            gy += np.multiply.outer(cx, dY[K])
    return psi, gx, gy


def eval_wavefunction(state: LcsState, grid: Grid2D) -> WaveField:
    psi, gx, gy = _separable(state, grid.x, grid.y)
    return WaveField(grid, psi, np.stack([gx, gy], axis=-1), state)


def eval_at_points(state: LcsState, x, y, with_grad: bool = False):
    """Psi (and optionally its gradient) at scattered points of equal shape."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    X, dX, Y, dY = _tables(state, x, y)
    psi = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    gx = np.zeros_like(psi)
    gy = np.zeros_like(psi)
    for K, c in enumerate(state.coeffs):
        if c == 0:
            continue
        psi += c * X[K] * Y[K]
        if with_grad:
            gx += c * dX[K] * Y[K]
            gy += c * X[K] * dY[K]
    if with_grad:
        return psi, np.stack([gx, gy], axis=-1)
    return psi


def probability_density(wf: WaveField) -> ScalarField:
    return ScalarField(wf.grid, wf.psi.real ** 2 + wf.psi.imag ** 2)


def current_density(wf: WaveField) -> VectorField:
    """J = Im(Psi^* grad Psi) (hbar = m = 1)."""
    return VectorField(wf.grid, np.imag(np.conj(wf.psi)[..., None] * wf.grad))


def _rho_floor(rho: np.ndarray, rho_floor: float | None) -> float:
    if rho_floor is None:
        return DEFAULT_RHO_FLOOR_REL * float(rho.max())
    if not rho_floor > 0:
        raise ValueError("rho_floor must be positive")
    return rho_floor


def phase_field(wf: WaveField, rho_floor: float | None = None) -> ScalarField:
    """Phase atan2(Im Psi, Re Psi) in (-pi, pi]; NaN where rho < rho_floor.

    ``rho_floor`` defaults to 1e-12 of the peak density.
    """
    rho = wf.psi.real ** 2 + wf.psi.imag ** 2
    floor = _rho_floor(rho, rho_floor)
    chi = np.angle(wf.psi)
    chi = np.where(chi == -np.pi, np.pi, chi)
    chi[rho < floor] = np.nan
    return ScalarField(wf.grid, chi)


def phase_gradient_current(state: LcsState, grid: Grid2D, step: float | None = None) -> VectorField:
    """rho * grad(chi) with grad(chi) from central differences of the local phase.

    The phase difference across each stencil edge is taken as the minimal
    increment ``angle(Psi(+) conj(Psi(-)))``, i.e. per-edge unwrapping.  The
    stencil is a pair of lattices shifted by ``step`` (grid spacing by default).
    """
    hx = grid.hx if step is None else step
    hy = grid.hy if step is None else step
    x, y = grid.x, grid.y

    def psi_at(xs, ys):
        return _separable(state, xs, ys, with_grad=False)[0]

    psi = psi_at(x, y)
    dchi_x = np.angle(psi_at(x + hx, y) * np.conj(psi_at(x - hx, y))) / (2 * hx)
    dchi_y = np.angle(psi_at(x, y + hy) * np.conj(psi_at(x, y - hy))) / (2 * hy)
    rho = psi.real ** 2 + psi.imag ** 2
    return VectorField(grid, rho[..., None] * np.stack([dchi_x, dchi_y], axis=-1))


def divergence(j: VectorField) -> ScalarField:
    """Second-order central differences inside, one-sided on the boundary rows."""
    g = j.grid
    div = np.gradient(j.values[..., 0], g.hx, axis=0) + np.gradient(j.values[..., 1], g.hy, axis=1)
    return ScalarField(g, div)


def interior(values: np.ndarray) -> np.ndarray:
    """Drop boundary rows and columns."""
    return values[1:-1, 1:-1]


def trapezoid_weights(grid: Grid2D) -> np.ndarray:
    wx = np.full(grid.nx, grid.hx)
    wx[[0, -1]] *= 0.5
    wy = np.full(grid.ny, grid.hy)
    wy[[0, -1]] *= 0.5
    return np.multiply.outer(wx, wy)


def total_mass(rho: ScalarField) -> float:
    return float(np.sum(trapezoid_weights(rho.grid) * rho.values))


def current_magnitude_integral(j: VectorField) -> float:
    return float(np.sum(trapezoid_weights(j.grid) * np.hypot(j.values[..., 0], j.values[..., 1])))


def winding_number(
    wf: WaveField,
    center=(0.0, 0.0),
    radius: float = 1.0,
    n_samples: int = 2048,
    rho_floor: float | None = None,
) -> int:
    """Accumulated phase around a circle divided by 2 pi.

    The circle is sampled counterclockwise, so a positive result means the
    phase increases counterclockwise.  Raises :class:`NodalCrossingError` if
    the circle passes through a low-density region.
    """
    if wf.state is None:
        raise ValueError("winding_number needs a WaveField that carries its state")
    t = 2 * np.pi * np.arange(n_samples) / n_samples
    cx, cy = center
    xs, ys = cx + radius * np.cos(t), cy + radius * np.sin(t)
    if not wf.grid.contains(xs, ys):
        raise ValueError("circle leaves the grid domain")
    psi = eval_at_points(wf.state, xs, ys)
    rho = psi.real ** 2 + psi.imag ** 2
    floor = _rho_floor(wf.psi.real ** 2 + wf.psi.imag ** 2, rho_floor)
    if np.any(rho < floor):
        raise NodalCrossingError(f"circle of radius {radius} crosses a region with rho < {floor:.3g}")
    steps = np.angle(np.roll(psi, -1) * np.conj(psi))
    if np.max(np.abs(steps)) > 0.75 * np.pi:
        raise UndersamplingError("phase increments too large to unwrap; increase n_samples")
    turns = steps.sum() / (2 * np.pi)
    w = int(round(turns))
    if abs(turns - w) > 1e-6:
        raise UndersamplingError(f"accumulated phase {turns!r} turns is not an integer")
    return w


def _check_mass(rho: ScalarField, tol: float = 1e-6) -> float:
    mass = total_mass(rho)
    if mass < 1.0 - tol:
        raise MassDeficitError(f"grid captures only {mass:.9f} of the probability")
    return mass


def fringe_visibility(profile: np.ndarray, prominence: float = 1e-6) -> float:
    """Visibility of the first interference fringe inside the main lobe.

    ``profile`` is the density sampled along a ray from the center outward.
    Starting at the global maximum (the main lobe near the turning point)
    walk inward to the next local minimum and on to the fringe maximum that
    follows it.  Returns

        V = (rho_fringe - rho_min) / (rho_peak + rho_min),

    which is the usual (max - min) / (max + min) contrast when the fringe is
    as tall as the main lobe and drops to 0 when no fringe exists.  Climbs
    smaller than ``prominence`` times the peak are treated as rounding noise.
    """
    i = int(np.argmax(profile))
    peak = float(profile[i])
    if peak <= 0:
        return 0.0
    inward = profile[i::-1]
    low = peak
    k = 0
    while k < len(inward) and inward[k] <= low + prominence * peak:
        low = min(low, float(inward[k]))
        k += 1
    if k == len(inward):
        return 0.0
    top = float(inward[k])
    while k + 1 < len(inward) and inward[k + 1] >= top:
        k += 1
        top = float(inward[k])
    return (top - low) / (peak + low)


def branch_overlap(
    state: LcsState,
    grid: Grid2D,
    axis=(1 / np.sqrt(2), 1 / np.sqrt(2)),
    n_line: int = 4001,
) -> float:
    """Interference proxy for the overlap of the two counter-flowing branches.

    A hard split of Psi by the sign of J . axis gives branches with disjoint
    support, so their literal overlap is zero.  Instead this measures
    :func:`fringe_visibility` along the line through the origin in direction
    ``axis`` (the major axis for |zeta| = 1 isotropic states), taking the
    larger value of the two half-lines.
    """
    wf = eval_wavefunction(state, grid)
    _check_mass(probability_density(wf))
    ax = np.asarray(axis, dtype=float)
    ax = ax / np.linalg.norm(ax)
    with np.errstate(divide="ignore"):
        limits = [
            grid.x_max / ax[0] if ax[0] > 0 else (grid.x_min / ax[0] if ax[0] < 0 else np.inf),
            grid.y_max / ax[1] if ax[1] > 0 else (grid.y_min / ax[1] if ax[1] < 0 else np.inf),
            grid.x_min / ax[0] if ax[0] > 0 else (grid.x_max / ax[0] if ax[0] < 0 else -np.inf),
            grid.y_min / ax[1] if ax[1] > 0 else (grid.y_max / ax[1] if ax[1] < 0 else -np.inf),
        ]
    t_max = min(limits[0], limits[1])
    t_min = max(limits[2], limits[3])
    best = 0.0
    for end in (t_max, t_min):
        t = np.linspace(0.0, end, n_line)
        psi = eval_at_points(state, t * ax[0], t * ax[1])
        best = max(best, fringe_visibility(psi.real ** 2 + psi.imag ** 2))
    return best


def localization_mass(rho: ScalarField, traj, tube_width: float) -> float:
    """Fraction of the trapezoid mass within ``tube_width`` of the sampled curve."""
    pts = np.column_stack([traj.x, traj.y])
    X, Y = rho.grid.mesh()
    w = trapezoid_weights(rho.grid) * rho.values
    if np.isinf(tube_width):
        return 1.0
    dist, _ = cKDTree(pts).query(np.column_stack([X.ravel(), Y.ravel()]), distance_upper_bound=tube_width * (1 + 1e-12))
    inside = np.isfinite(dist).reshape(X.shape) & (dist.reshape(X.shape) <= tube_width)
    return float(w[inside].sum() / w.sum())
