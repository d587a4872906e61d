"""Resolution-of-identity quadratures and the invariant suite.

Completeness on the degenerate subspace is checked two ways:

* general (any coprime p, q): integrate the projected Glauber dyad
  Pi |alpha, beta><alpha, beta| Pi over d^2alpha d^2beta / pi^2 in polar
  coordinates.  Gauss-Laguerre in u = r^2 handles the radial Gamma moments,
  a uniform rule in the angle handles the phase orthogonality exactly.
* SU(2) (p = q = 1): integrate (N+1)/pi d^2zeta/(1+|zeta|^2)^2 |zeta,N><zeta,N|
  on the sphere, zeta = tan(theta/2) e^{-i phi}, where the measure becomes
  sin(theta) dtheta dphi / 4.  Gauss-Legendre in cos(theta) is exact here.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np
from scipy.special import roots_laguerre, roots_legendre

from .classical import matched_trajectory
from .fields import (
    Grid2D,
    MassDeficitError,
    current_density,
    divergence,
    eval_at_points,
    eval_wavefunction,
    interior,
    localization_mass,
    phase_gradient_current,
    probability_density,
    total_mass,
    winding_number,
)
from .specfun import LOG_FACTORIALS
from .states import (
    ComplexAmplitude,
    ConsistencyError,
    DegenerateSubspace,
    GlauberProduct,
    LcsState,
    StateTag,
    annihilation_residual,
    apply_weighted_number,
    build_by_projection,
    build_by_recurrence,
    classify,
    glauber_for_zeta,
    phase_aligned_distance,
)

__all__ = [
    "QuadratureSpec",
    "QuadraturePreconditionError",
    "Check",
    "VerificationReport",
    "DEFAULT_TOLERANCES",
    "DEFAULT_COMPLETENESS_CASES",
    "completeness_general",
    "completeness_su2",
    "check_state",
    "run_suite",
]


class QuadraturePreconditionError(ValueError):
    """Too few nodes: phase integrals would alias or radial moments be inexact."""


@dataclass(frozen=True)
class QuadratureSpec:
    radial_nodes: int = 64
    angular_nodes: int = 128

    @classmethod
    def minimal(cls, sub: DegenerateSubspace) -> "QuadratureSpec":
        m = max(sub.p, sub.q) * sub.N
        return cls(radial_nodes=m + 2, angular_nodes=2 * m + 1)

    def at_least(self, other: "QuadratureSpec") -> "QuadratureSpec":
        return QuadratureSpec(max(self.radial_nodes, other.radial_nodes), max(self.angular_nodes, other.angular_nodes))


def _require_general(sub: DegenerateSubspace, spec: QuadratureSpec) -> None:
    m = max(sub.p, sub.q) * sub.N
    if spec.angular_nodes <= 2 * m:
        raise QuadraturePreconditionError(f"angular_nodes must exceed {2 * m}, got {spec.angular_nodes}")
    if spec.radial_nodes < m + 2:
        raise QuadraturePreconditionError(f"radial_nodes must be at least {m + 2}, got {spec.radial_nodes}")


def _polar_rule(spec: QuadratureSpec):
    """Nodes (u = r^2, phi) and weights for int d^2z/pi e^{-|z|^2} f(z)."""
    u, w = roots_laguerre(spec.radial_nodes)
    phi = 2 * np.pi * np.arange(spec.angular_nodes) / spec.angular_nodes
    # d^2z = r dr dphi = du dphi / 2; the Laguerre weight carries e^{-u}
    weights = np.multiply.outer(0.5 * w, np.full(spec.angular_nodes, 2 * np.pi / spec.angular_nodes)) / np.pi
    U, PHI = np.meshgrid(u, phi, indexing="ij")
    return U.ravel(), PHI.ravel(), weights.ravel()


def _mode_gram(levels: np.ndarray, spec: QuadratureSpec) -> np.ndarray:
    """G[K, K'] = int d^2z/pi e^{-|z|^2} z^{n_K} conj(z)^{n_K'} / sqrt(n_K! n_K'!)."""
    U, PHI, W = _polar_rule(spec)
    logamp = 0.5 * (np.multiply.outer(np.log(U), levels) - LOG_FACTORIALS(levels)[None, :])
    with np.errstate(divide="ignore"):
        logw = 0.5 * np.log(W)
    B = np.exp(logamp + logw[:, None]) * np.exp(1j * np.multiply.outer(PHI, levels))
    return B.T @ B.conj()


def completeness_general(sub: DegenerateSubspace, spec: QuadratureSpec | None = None, form: str = "projected") -> np.ndarray:
    """Matrix of int d^2a d^2b/pi^2 Pi|a,b><a,b|Pi in the (N+1)-dim basis.

    ``form="projected"`` integrates the unnormalized projected dyad, which
    factorizes into an x-mode Gram matrix times a y-mode Gram matrix
    (elementwise).  ``form="normalized"`` integrates normalized states from
    :func:`build_by_projection` weighted by e^{-(|a|^2+|b|^2)} / N(a,b)^2; it
    costs a full 4D product rule and is meant for small cross-checks.
    """
    spec = spec or QuadratureSpec.minimal(sub)
    _require_general(sub, spec)
    nx, ny = sub.levels()
    if form == "projected":
        M = _mode_gram(nx, spec) * _mode_gram(ny, spec)
    elif form == "normalized":
        M = _completeness_normalized(sub, spec)
    else:
        raise ValueError(f"unknown form {form!r}")
    return M


def _completeness_normalized(sub: DegenerateSubspace, spec: QuadratureSpec) -> np.ndarray:
    U, PHI, W = _polar_rule(spec)
    nx, ny = sub.levels()
    lf = LOG_FACTORIALS(nx) + LOG_FACTORIALS(ny)
    M = np.zeros((sub.dim, sub.dim), dtype=complex)
    for ua, pa, wa in zip(U, PHI, W):
        for ub, pb, wb in zip(U, PHI, W):
            g = GlauberProduct(math.sqrt(ua) * np.exp(1j * pa), math.sqrt(ub) * np.exp(1j * pb))
            c = build_by_projection(sub, g).coeffs
            # 1 / N(a,b)^2 = sum_K |a|^{2pK} |b|^{2q(N-K)} / ((pK)! (q(N-K))!)
            inv_norm2 = np.exp(nx * math.log(ua) + ny * math.log(ub) - lf).sum()
            M += wa * wb * inv_norm2 * np.outer(c, c.conj())
    return M


def completeness_su2(N: int, spec: QuadratureSpec | None = None) -> np.ndarray:
    """(N+1)/pi int d^2zeta/(1+|zeta|^2)^2 |zeta,N><zeta,N| on the sphere.

    ``spec.radial_nodes`` is the Gauss-Legendre node count in cos(theta).
    """
    spec = spec or QuadratureSpec(radial_nodes=N + 1, angular_nodes=2 * N + 1)
    if spec.angular_nodes <= 2 * N:
        raise QuadraturePreconditionError(f"angular_nodes must exceed {2 * N}, got {spec.angular_nodes}")
    if spec.radial_nodes < N + 1:
        raise QuadraturePreconditionError(f"Gauss-Legendre nodes must be at least {N + 1}, got {spec.radial_nodes}")
    sub = DegenerateSubspace(N, 1, 1)
    c, wc = roots_legendre(spec.radial_nodes)
    half = np.arccos(c) / 2
    phis = 2 * np.pi * np.arange(spec.angular_nodes) / spec.angular_nodes
    wphi = 2 * np.pi / spec.angular_nodes
    rows = []
    weights = []
    for h, w in zip(half, wc):
        for phi in phis:
            g = GlauberProduct(math.sin(h) * np.exp(-1j * phi), math.cos(h))
            rows.append(build_by_projection(sub, g).coeffs)
            weights.append(w * wphi)
    B = np.sqrt(np.array(weights) * (N + 1) / (4 * np.pi))[:, None] * np.conj(np.array(rows))
    return B.conj().T @ B


# ---------------------------------------------------------------------------
# reporting


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool
    params: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, residual: float, tolerance: float, passed: bool | None = None, **params) -> Check:
        residual = float(residual)
        if passed is None:
            passed = bool(residual <= tolerance)
        chk = Check(name, residual, float(tolerance), bool(passed), params)
        self.checks.append(chk)
        return chk

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            params = ";".join(f"{k}={_fmt(v)}" for k, v in sorted(c.params.items()))
            lines.append(
                f"check={c.name} residual={c.residual:.16e} tolerance={c.tolerance:.16e} "
                f"pass={'true' if c.passed else 'false'} params={params}"
            )
        lines.append(f"overall={'pass' if self.overall else 'fail'}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"overall": self.overall, "checks": [asdict(c) for c in self.checks]}


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.16e}"
    return str(v)


DEFAULT_TOLERANCES = {
    "algebraic": 1e-12,
    "completeness": 1e-9,
    "continuity": 1e-3,
    "two_form": 1e-6,
    "standing_current": 1e-12,
    "rotational_symmetry": 1e-8,
    "localization": 0.9,
    "convergence_band": 0.2,
}

DEFAULT_COMPLETENESS_CASES = ((3, 2, 3), (10, 1, 2), (20, 1, 1))
DEFAULT_SU2_CASES = (1, 5, 20)
TWO_FORM_STEP = 1e-6
TUBE_WIDTH = 1.5


def _divergence_residual(state: LcsState, grid: Grid2D) -> tuple[float, float]:
    """(max interior |div J| * h / max|J|, max interior |div J|)."""
    J = current_density(eval_wavefunction(state, grid))
    jmax = float(np.abs(J.values).max())
    res = float(np.abs(interior(divergence(J).values)).max())
    h = max(grid.hx, grid.hy)
    return (res * h / jmax if jmax > 0 else 0.0), res


def check_state(report: VerificationReport, state: LcsState, grid: Grid2D, tol: dict | None = None) -> None:
    """Append every per-state invariant check for ``state`` to ``report``.

    Raises :class:`MassDeficitError` when the grid truncates the state.
    """
    tol = {**DEFAULT_TOLERANCES, **(tol or {})}
    sub = state.subspace
    tag = classify(state)
    params = dict(N=sub.N, p=sub.p, q=sub.q, zeta_mod=state.zeta.modulus, zeta_arg=state.zeta.phase, tag=tag.tag.value)

    report.add("norm", abs(np.sum(np.abs(state.coeffs) ** 2) - 1.0), tol["algebraic"], **params)

    if math.isfinite(state.zeta.modulus):
        ref = build_by_recurrence(sub, state.zeta)
        proj = build_by_projection(sub, glauber_for_zeta(sub, state.zeta))
        res = max(phase_aligned_distance(state, ref), phase_aligned_distance(proj, ref))
        report.add("construction_equivalence", res, tol["algebraic"], **params)

    try:
        lam = apply_weighted_number(state)
        report.add("eigenvalue", abs(lam - sub.eigenvalue), 0.0, **params)
    except ConsistencyError:
        report.add("eigenvalue", math.inf, 0.0, **params)
    report.add("ladder_relation", annihilation_residual(state), tol["algebraic"], **params)

    wf = eval_wavefunction(state, grid)
    rho = probability_density(wf)
    mass = total_mass(rho)
    if mass < 1.0 - 1e-6:
        raise MassDeficitError(f"grid captures only {mass:.9f} of the probability for {params}")
    J = current_density(wf)
    jmax = float(np.abs(J.values).max())
    rho_peak = float(rho.values.max())

    if tag.tag is StateTag.STANDING_WAVE:
        report.add("standing_wave_current", jmax / rho_peak, tol["standing_current"], **params)
    else:
        rel, fine = _divergence_residual(state, grid)
        report.add("divergence", rel, tol["continuity"], **params)
        if grid.nx % 2 and grid.ny % 2 and grid.nx >= 5 and grid.ny >= 5:
            _, coarse = _divergence_residual(state, grid.coarsened())
            ratio = coarse / fine
            report.add(
                "divergence_order",
                abs(ratio / 4.0 - 1.0),
                tol["convergence_band"],
                ratio=ratio,
                **params,
            )
        A = phase_gradient_current(state, grid, TWO_FORM_STEP)
        mask = rho.values >= 1e-8
        two_form = float(np.abs(A.values - J.values)[mask].max() / jmax) if mask.any() else 0.0
        report.add("two_form_current", two_form, tol["two_form"], **params)

    if tag.tag is StateTag.VORTEX_LIMIT and sub.p == sub.q == 1 and sub.N > 0:
        radius = math.sqrt(sub.N)
        expected = -tag.circulation_sign * sub.N
        w = winding_number(wf, (0.0, 0.0), radius)
        report.add("winding", abs(w - expected), 0.0, winding=w, expected=expected, **params)
        report.add("rotational_symmetry", _rotational_spread(state), tol["rotational_symmetry"], **params)

    mass_in = localization_mass(rho, matched_trajectory(state), TUBE_WIDTH)
    report.add(
        "localization",
        1.0 - mass_in,
        1.0 - tol["localization"],
        tube_mass=mass_in,
        tube_width=TUBE_WIDTH,
        **params,
    )


def _rotational_spread(state: LcsState, radii=None, n_angles: int = 720) -> float:
    """max over circles of (max rho - min rho) / max rho."""
    if radii is None:
        r0 = math.sqrt(state.N)
        radii = r0 * np.array([0.5, 0.75, 1.0, 1.25, 1.5])
    t = 2 * np.pi * np.arange(n_angles) / n_angles
    worst = 0.0
    for r in radii:
        psi = eval_at_points(state, r * np.cos(t), r * np.sin(t))
        rho = np.abs(psi) ** 2
        worst = max(worst, float((rho.max() - rho.min()) / rho.max()))
    return worst


def run_suite(
    params: Iterable = (),
    grid: Grid2D | None = None,
    spec: QuadratureSpec | None = None,
    tolerances: dict | None = None,
    completeness_cases=DEFAULT_COMPLETENESS_CASES,
    su2_cases=DEFAULT_SU2_CASES,
) -> VerificationReport:
    """Run the invariant suite.

    ``params`` holds ``(DegenerateSubspace, ComplexAmplitude)`` pairs or
    ready-made :class:`LcsState` objects.  Check failures are recorded, not
    raised; capacity errors and grid mass deficits propagate.  ``spec`` is a
    floor on the quadrature resolution, raised per case to the admissible
    minimum.
    """
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    grid = grid or Grid2D.square(8.0, 801)
    spec = spec or QuadratureSpec()
    report = VerificationReport()

    subspaces = [DegenerateSubspace(*c) for c in completeness_cases]
    for item in params:
        state = item if isinstance(item, LcsState) else build_by_recurrence(*item)
        check_state(report, state, grid, tol)
        if state.subspace not in subspaces:
            subspaces.append(state.subspace)

    for sub in subspaces:
        M = completeness_general(sub, spec.at_least(QuadratureSpec.minimal(sub)))
        res = float(np.abs(M - np.eye(sub.dim)).max())
        report.add("completeness_general", res, tol["completeness"], N=sub.N, p=sub.p, q=sub.q)
    for N in su2_cases:
        s = spec.at_least(QuadratureSpec(N + 1, 2 * N + 1))
        M = completeness_su2(N, s)
        res = float(np.abs(M - np.eye(N + 1)).max())
        report.add("completeness_su2", res, tol["completeness"], N=N)
        report.add("completeness_su2_trace", abs(np.trace(M).real - (N + 1)), tol["completeness"], N=N)
    return report
