"""Command-line interface: ``state``, ``field``, ``classical``, ``evolve``, ``verify``.

Exit codes: 0 pass, 1 verification failure, 2 bad arguments, 3 I/O error,
4 capacity or infrastructure failure.  All numbers are written in fixed
17-significant-digit scientific notation so identical flags give
byte-identical files.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import zlib
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .classical import ehrenfest_centroid, lissajous, matched_trajectory
from .fields import (
    Grid2D,
    MassDeficitError,
    current_density,
    eval_wavefunction,
    phase_field,
    probability_density,
)
from .specfun import CapacityError
from .states import (
    ComplexAmplitude,
    DegenerateSubspace,
    GlauberProduct,
    build_by_projection,
    build_by_recurrence,
    classify,
    evolve_glauber,
)
from .verify import DEFAULT_TOLERANCES, QuadratureSpec, run_suite

UNITS = "natural: m=omega=hbar=1"
FLOAT_FMT = "%.16e"
CURRENT_ZERO = 1e-15

EXIT_OK, EXIT_FAIL, EXIT_ARGS, EXIT_IO, EXIT_CAPACITY = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    N: int | None = None
    p: int = 1
    q: int = 1
    zeta_mod: float | None = None
    zeta_arg: float | None = None
    alpha_mod: float | None = None
    alpha_arg: float | None = None
    beta_mod: float | None = None
    beta_arg: float | None = None
    grid: dict = field(default_factory=dict)
    out: str | None = None
    report: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def has_zeta(self) -> bool:
        return self.zeta_mod is not None or self.zeta_arg is not None

    @property
    def has_glauber(self) -> bool:
        return any(v is not None for v in (self.alpha_mod, self.alpha_arg, self.beta_mod, self.beta_arg))

    def validate(self) -> None:
        if self.has_zeta and self.has_glauber:
            raise UsageError("give either --zeta-* or --alpha-*/--beta-*, not both")
        if self.has_zeta and (self.zeta_mod is None or self.zeta_arg is None):
            raise UsageError("--zeta-mod and --zeta-arg go together")
        if self.has_glauber and (self.alpha_mod is None or self.beta_mod is None):
            raise UsageError("--alpha-mod and --beta-mod are required with Glauber amplitudes")
        for name in ("zeta_mod", "alpha_mod", "beta_mod"):
            v = getattr(self, name)
            if v is not None and not (v >= 0 and math.isfinite(v)):
                raise UsageError(f"--{name.replace('_', '-')} must be a finite non-negative number")
        if self.grid:
            Grid2D(**self.grid)

    def subspace(self) -> DegenerateSubspace:
        if self.N is None:
            raise UsageError("--N is required")
        return DegenerateSubspace(self.N, self.p, self.q)

    def glauber(self) -> GlauberProduct:
        a = self.alpha_mod * np.exp(1j * (self.alpha_arg or 0.0))
        b = self.beta_mod * np.exp(1j * (self.beta_arg or 0.0))
        return GlauberProduct(a, b)

    def state(self):
        sub = self.subspace()
        if self.has_zeta:
            return build_by_recurrence(sub, ComplexAmplitude(self.zeta_mod, self.zeta_arg))
        if self.has_glauber:
            return build_by_projection(sub, self.glauber())
        raise UsageError("a state needs --zeta-mod/--zeta-arg or --alpha-*/--beta-*")


_number_format = "fixed"


def _fmt(v: float) -> str:
    if _number_format == "shortest":
        return repr(float(v))
    return FLOAT_FMT % v


def _csv(header: list[str], columns: list[np.ndarray]) -> str:
    data = np.column_stack(columns)
    if _number_format == "shortest":
        rows = (",".join(repr(float(v)) for v in row) for row in data)
        return ",".join(header) + "\n" + "".join(r + "\n" for r in rows)
    buf = io.StringIO()
    np.savetxt(buf, data, fmt=FLOAT_FMT, delimiter=",", header=",".join(header), comments="", newline="\n")
    return buf.getvalue()


def _write(path: str, text: str, cfg: RunConfig) -> None:
    payload = text.encode("ascii")
    meta = {
        "config": _config_dict(cfg),
        "version": __version__,
        "units": UNITS,
        "checksum": f"{zlib.crc32(payload):08x}",
    }
    with open(path, "wb") as fh:
        fh.write(payload)
    with open(path + ".json", "w", encoding="ascii", newline="\n") as fh:
        fh.write(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _config_dict(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    d["grid"] = asdict(Grid2D(**cfg.grid)) if cfg.grid else {}
    return d


# ---------------------------------------------------------------------------
# subcommands


def cmd_state(cfg: RunConfig) -> int:
    state = cfg.state()
    cls = classify(state)
    nx, ny = state.subspace.levels()
    lines = [
        f"# N={state.N} p={state.p} q={state.q} zeta_mod={_fmt(state.zeta.modulus)} zeta_arg={_fmt(state.zeta.phase)}",
        "K,pK,qNmK,re_c,im_c,abs2",
    ]
    for K, c in enumerate(state.coeffs):
        lines.append(f"{K},{nx[K]},{ny[K]},{_fmt(c.real)},{_fmt(c.imag)},{_fmt(abs(c) ** 2)}")
    lines.append(f"# class={cls.tag.value} circulation_sign={cls.circulation_sign}")
    text = "\n".join(lines) + "\n"
    if cfg.out:
        _write(cfg.out, text, cfg)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def field_csv(cfg: RunConfig) -> str:
    state = cfg.state()
    grid = Grid2D(**cfg.grid)
    wf = eval_wavefunction(state, grid)
    rho = probability_density(wf).values
    J = current_density(wf).values.copy()
    J[np.abs(J) < CURRENT_ZERO] = 0.0
    chi = phase_field(wf, cfg.extra.get("rho_floor")).values
    X, Y = grid.mesh()
    cols = [X, Y, wf.psi.real, wf.psi.imag, rho, J[..., 0], J[..., 1], chi]
    return _csv(["x", "y", "re_psi", "im_psi", "rho", "jx", "jy", "chi"], [c.ravel() for c in cols])


def cmd_field(cfg: RunConfig) -> int:
    if not cfg.out:
        raise UsageError("field needs --out")
    _write(cfg.out, field_csv(cfg), cfg)
    return EXIT_OK


def cmd_classical(cfg: RunConfig) -> int:
    if not cfg.out:
        raise UsageError("classical needs --out")
    n = cfg.extra.get("n_samples") or 2001
    if cfg.extra.get("delta") is not None:
        traj = lissajous(cfg.extra.get("ax") or 1.0, cfg.extra.get("ay") or 1.0, cfg.p, cfg.q, cfg.extra["delta"], n)
    elif cfg.has_glauber:
        traj = ehrenfest_centroid(cfg.glauber(), cfg.p, cfg.q, n)
    else:
        traj = matched_trajectory(cfg.state(), n)
    _write(cfg.out, _csv(["t", "x", "y"], [traj.t, traj.x, traj.y]), cfg)
    return EXIT_OK


def cmd_evolve(cfg: RunConfig) -> int:
    if not cfg.out:
        raise UsageError("evolve needs --out")
    if not cfg.has_glauber:
        raise UsageError("evolve needs --alpha-*/--beta-* amplitudes")
    g0 = cfg.glauber()
    wx = cfg.extra.get("omega_x") if cfg.extra.get("omega_x") is not None else float(cfg.q)
    wy = cfg.extra.get("omega_y") if cfg.extra.get("omega_y") is not None else float(cfg.p)
    n = cfg.extra.get("n_samples") or 257
    t_max = cfg.extra.get("t_max") if cfg.extra.get("t_max") is not None else 2 * math.pi
    t = np.linspace(0.0, t_max, n)
    xs, ys, zr, zi = (np.empty(n) for _ in range(4))
    for k, tk in enumerate(t):
        g = evolve_glauber(g0, wx, wy, tk)
        xs[k] = math.sqrt(2.0 / wx) * g.alpha.real
        ys[k] = math.sqrt(2.0 / wy) * g.beta.real
        z = g.zeta(cfg.p, cfg.q).value if g.beta != 0 else complex(math.nan, math.nan)
        zr[k], zi[k] = z.real, z.imag
    _write(cfg.out, _csv(["t", "x", "y", "re_zeta", "im_zeta"], [t, xs, ys, zr, zi]), cfg)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    tol = dict(DEFAULT_TOLERANCES)
    if cfg.extra.get("tolerance_completeness") is not None:
        tol["completeness"] = cfg.extra["tolerance_completeness"]
    if cfg.N is not None:
        if not cfg.has_zeta and not cfg.has_glauber:
            cfg.zeta_mod, cfg.zeta_arg = 1.0, math.pi / 2
        params = [cfg.state()]
    else:
        params = [(DegenerateSubspace(20, 1, 1), ComplexAmplitude(1.0, math.pi / 2))]
    grid = Grid2D(**cfg.grid)
    spec = QuadratureSpec(cfg.extra.get("radial_nodes") or 64, cfg.extra.get("angular_nodes") or 128)
    report = run_suite(params, grid, spec, tol)
    text = report.to_text()
    if cfg.report:
        _write(cfg.report, text, cfg)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.overall else EXIT_FAIL


COMMANDS = {
    "state": cmd_state,
    "field": cmd_field,
    "classical": cmd_classical,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, grid_n: int) -> None:
    p.add_argument("--N", type=int)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--zeta-mod", type=float)
    p.add_argument("--zeta-arg", type=float, help="radians")
    p.add_argument("--alpha-mod", type=float)
    p.add_argument("--alpha-arg", type=float, help="radians")
    p.add_argument("--beta-mod", type=float)
    p.add_argument("--beta-arg", type=float, help="radians")
    p.add_argument("--xmin", type=float, default=-8.0)
    p.add_argument("--xmax", type=float, default=8.0)
    p.add_argument("--ymin", type=float, default=-8.0)
    p.add_argument("--ymax", type=float, default=8.0)
    p.add_argument("--nx", type=int, default=grid_n)
    p.add_argument("--ny", type=int, default=grid_n)
    p.add_argument("--out")
    p.add_argument(
        "--number-format",
        choices=("fixed", "shortest"),
        default="fixed",
        help="fixed: 17 significant digits, byte-stable (default); shortest: round-trip repr",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lissajous-cs", description="Lissajous coherent states of the 2D harmonic oscillator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("state", help="print the coefficient listing"), 401)

    p = sub.add_parser("field", help="export rho, J, chi on a grid as CSV")
    _common(p, 401)
    p.add_argument("--rho-floor", type=float)

    p = sub.add_parser("classical", help="export a classical Lissajous curve as CSV")
    _common(p, 401)
    p.add_argument("--ax", type=float)
    p.add_argument("--ay", type=float)
    p.add_argument("--delta", type=float, help="relative phase in radians")
    p.add_argument("--n-samples", type=int)

    p = sub.add_parser("evolve", help="export the Ehrenfest centroid and projected zeta over time")
    _common(p, 401)
    p.add_argument("--omega-x", type=float)
    p.add_argument("--omega-y", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--n-samples", type=int)

    p = sub.add_parser("verify", help="run the verification suite")
    _common(p, 801)
    p.add_argument("--report")
    p.add_argument("--tolerance-completeness", type=float)
    p.add_argument("--radial-nodes", type=int)
    p.add_argument("--angular-nodes", type=int)
    return parser


_CORE = {
    "command", "N", "p", "q", "zeta_mod", "zeta_arg", "alpha_mod", "alpha_arg", "beta_mod", "beta_arg", "out", "report",
}
_GRID = {"xmin": "x_min", "xmax": "x_max", "ymin": "y_min", "ymax": "y_max", "nx": "nx", "ny": "ny"}


def parse_config(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    core = {k: ns.get(k) for k in _CORE}
    grid = {v: ns.pop(k) for k, v in _GRID.items()}
    extra = {k: v for k, v in ns.items() if k not in _CORE}
    cfg = RunConfig(**core, grid=grid, extra=extra)
    cfg.validate()
    global _number_format
    _number_format = extra.get("number_format", "fixed")
    if cfg.N is not None:
        cfg.subspace()
    return cfg


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.command](cfg)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except MassDeficitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
