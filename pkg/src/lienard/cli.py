"""Command-line front end.

Four subcommands: ``simulate`` (sampled trajectory with momenta and energy),
``verify`` (the named cross-check report), ``spectrum`` (numeric vs
closed-form levels), and ``wavefunction`` (one eigenfunction in all its
guises).  Sampled curves go to CSV, structured reports to JSON, and either
can be forced with --format; --plot renders a PNG next to the data file.

Exit codes: 0 success, 1 a verification check failed, 2 invalid
parameters, 3 numerical failure.  Every failure path prints a single
stderr line of the form ``error[<category>]: <message>``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import classical, figures, mechanics, spectral
from .model import (
    DomainError,
    EtaBranch,
    LienardParams,
    QuantumSetup,
    SolutionParams,
    ambiguity_for_epsilon,
    derive_ell,
    eta_branch,
)
from .classical import IntegrationError
from .specfun import ConvergenceError
from .spectral import RadialGrid, ResolutionError
from .verify import run_verification

__all__ = ["build_parser", "main", "entry"]

_DEFAULT_OUT = {
    "simulate": "simulate.csv",
    "verify": "verify.json",
    "spectrum": "spectrum.json",
    "wavefunction": "wavefunction.csv",
}
_DEFAULT_FORMAT = {
    "simulate": "csv",
    "verify": "json",
    "spectrum": "json",
    "wavefunction": "csv",
}


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs for one invocation; handlers never touch argv."""

    command: str
    params: LienardParams
    out: Path
    fmt: str
    plot: bool
    sol: SolutionParams | None = None
    branch: EtaBranch | None = None
    setup: QuantumSetup | None = None
    grid: RadialGrid | None = None
    levels: int = 6
    t_end: float = 0.0
    samples: int = 1024
    eta_override: float | None = None


def _fmt_float(v: float) -> str:
    return format(float(v), ".17g")


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = [",".join(header)]
    n = len(columns[0])
    for i in range(n):
        rows.append(",".join(_fmt_float(col[i]) for col in columns))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def _write_json(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def _columns_json(header: list[str], columns: list[np.ndarray]) -> dict:
    return {name: [float(v) for v in col] for name, col in zip(header, columns)}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lienard",
        description="Exact dynamics, dual Hamiltonian structure, and the "
        "half-line spectral problem of the cubic Lienard oscillator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_oscillator(sp):
        sp.add_argument("--k", type=float, default=1.0, help="damping strength, nonzero (default 1)")
        sp.add_argument("--omega", type=float, default=1.0, help="linear frequency, positive (default 1)")

    def add_orbit(sp):
        sp.add_argument("--A", type=float, default=1.0, help="orbit amplitude (default 1)")
        sp.add_argument("--delta", type=float, default=0.0, help="orbit phase (default 0)")

    def add_quantum(sp):
        sp.add_argument("--epsilon", type=float, default=0.0, help="ordering parameter (default 0)")
        sp.add_argument("--grid-n", type=int, default=6000, help="grid points incl. endpoints (default 6000)")
        sp.add_argument("--y-min", type=float, default=1e-3, help="inner grid edge (default 1e-3)")
        sp.add_argument("--y-max", type=float, default=12.0, help="outer grid edge (default 12)")

    def add_output(sp, command):
        sp.add_argument("--out", type=Path, default=Path(_DEFAULT_OUT[command]),
                        help=f"output file (default {_DEFAULT_OUT[command]})")
        sp.add_argument("--format", choices=("csv", "json"), default=_DEFAULT_FORMAT[command],
                        help=f"output format (default {_DEFAULT_FORMAT[command]})")
        sp.add_argument("--plot", action="store_true",
                        help="also render a PNG figure next to the output file")

    sp = sub.add_parser("simulate", help="integrate the oscillator and tabulate t,x,xdot,p,ptilde,H")
    add_oscillator(sp)
    add_orbit(sp)
    sp.add_argument("--eta", type=float, choices=(-3.0, -1.5), default=-1.5,
                    help="exponent branch for the momentum columns (default -1.5)")
    sp.add_argument("--t-end", type=float, default=None,
                    help="integration span (default: one period, 2 pi / omega)")
    sp.add_argument("--samples", type=int, default=1024, help="uniform samples (default 1024)")
    add_output(sp, "simulate")

    sp = sub.add_parser("verify", help="run the cross-check battery and write a JSON report")
    add_oscillator(sp)
    add_orbit(sp)
    sp.add_argument("--samples", type=int, default=1024, help="samples per flow (default 1024)")
    sp.add_argument("--sabotage-eta", type=float, default=None, help=argparse.SUPPRESS)
    add_output(sp, "verify")

    sp = sub.add_parser("spectrum", help="numeric vs closed-form levels of the half-line problem")
    add_oscillator(sp)
    add_quantum(sp)
    sp.add_argument("--levels", type=int, default=6, help="number of low levels (default 6)")
    add_output(sp, "spectrum")

    sp = sub.add_parser("wavefunction", help="one eigenfunction: closed form, numeric, momentum guise")
    add_oscillator(sp)
    add_quantum(sp)
    sp.add_argument("--levels", type=int, default=0,
                    help="level index n of the eigenfunction (default 0)")
    add_output(sp, "wavefunction")

    return parser


def _validate(args: argparse.Namespace) -> RunConfig:
    params = LienardParams(k=args.k, omega=args.omega)
    common = dict(command=args.command, params=params, out=args.out,
                  fmt=args.format, plot=args.plot)

    if args.command in ("simulate", "verify"):
        sol = SolutionParams(A=args.A, delta=args.delta)
        sol.validate_for(params)
        if args.samples < 16:
            raise ValueError(f"need at least 16 samples, got {args.samples}")
        if args.command == "simulate":
            t_end = args.t_end if args.t_end is not None else classical.period(params)
            if not t_end > 0.0:
                raise ValueError(f"t-end must be positive, got {t_end}")
            return RunConfig(**common, sol=sol, branch=eta_branch(params, args.eta),
                             t_end=t_end, samples=args.samples)
        return RunConfig(**common, sol=sol, samples=args.samples,
                         eta_override=args.sabotage_eta)

    setup = derive_ell(ambiguity_for_epsilon(args.epsilon), params)
    grid = RadialGrid(y_min=args.y_min, y_max=args.y_max, n=args.grid_n)
    if args.command == "spectrum":
        if args.levels < 1:
            raise ValueError(f"need at least one level, got {args.levels}")
    else:
        if not 0 <= args.levels <= spectral.MAX_LEVEL:
            raise ValueError(
                f"wavefunction level must be in [0, {spectral.MAX_LEVEL}], got {args.levels}"
            )
    return RunConfig(**common, setup=setup, grid=grid, levels=args.levels)


def _run_simulate(cfg: RunConfig) -> int:
    params, sol, branch = cfg.params, cfg.sol, cfg.branch
    x0 = float(classical.exact_x(0.0, params, sol))
    v0 = float(classical.exact_xdot(0.0, params, sol))
    traj = classical.lienard_trajectory(
        params, classical.TrajectoryState(0.0, x0, v0), cfg.t_end, samples=cfg.samples
    )
    p = mechanics.conjugate_momentum(traj.x, traj.xdot, branch, params)
    ptilde = (branch.eta + 1.0) * p
    energy = mechanics.hamiltonian_general(traj.x, ptilde, branch, params)
    header = ["t", "x", "xdot", "p", "ptilde", "H"]
    columns = [traj.t, traj.x, traj.xdot, p, ptilde, energy]
    if cfg.fmt == "csv":
        _write_csv(cfg.out, header, columns)
    else:
        _write_json(cfg.out, _columns_json(header, columns))
    if cfg.plot:
        figures.trajectory_figure(dict(zip(header, columns)), cfg.out.with_suffix(".png"))
    return 0


def _run_verify(cfg: RunConfig) -> int:
    report = run_verification(
        cfg.params, cfg.sol, samples=cfg.samples, eta_override=cfg.eta_override
    )
    if cfg.fmt == "json":
        _write_json(cfg.out, report.to_dict())
    else:
        header = ["name", "residual", "threshold", "passed"]
        rows = [",".join(header)]
        for c in report.checks:
            rows.append(
                f"{c.name},{_fmt_float(c.residual)},{_fmt_float(c.threshold)},{int(c.passed)}"
            )
        cfg.out.write_text("\n".join(rows) + "\n", encoding="utf-8")
    if cfg.plot:
        figures.verification_figure(report, cfg.out.with_suffix(".png"))
    if not report.passed:
        bad = ", ".join(c.name for c in report.failures)
        print(f"error[verification]: {len(report.failures)} check(s) failed: {bad}",
              file=sys.stderr)
        return 1
    return 0


def _run_spectrum(cfg: RunConfig) -> int:
    result = spectral.compute_spectrum(cfg.setup, cfg.grid, cfg.levels)
    obj = {
        "setup": {
            "ell": cfg.setup.ell,
            "omega": cfg.params.omega,
            "epsilon": cfg.setup.ambiguity.epsilon,
            "grid": {"y_min": cfg.grid.y_min, "y_max": cfg.grid.y_max, "n": cfg.grid.n},
        },
        "levels": [
            {
                "n": lv.n,
                "numeric": lv.numeric,
                "analytic": lv.analytic,
                "analytic_paper_printed": lv.analytic_printed,
                "rel_err": lv.rel_err,
            }
            for lv in result.levels
        ],
    }
    if cfg.fmt == "json":
        _write_json(cfg.out, obj)
    else:
        header = ["n", "numeric", "analytic", "analytic_paper_printed", "rel_err"]
        columns = [
            np.array([lv.n for lv in result.levels], dtype=float),
            result.numeric,
            result.analytic,
            np.array([lv.analytic_printed for lv in result.levels]),
            np.array([lv.rel_err for lv in result.levels]),
        ]
        _write_csv(cfg.out, header, columns)
    if cfg.plot:
        figures.spectrum_figure(result, cfg.out.with_suffix(".png"))
    return 0


def _run_wavefunction(cfg: RunConfig) -> int:
    wf = spectral.analytic_wavefunction(cfg.levels, cfg.setup, cfg.grid)
    _, phi_num = spectral.numeric_eigenfunction(cfg.setup, cfg.grid, cfg.levels)
    if spectral.overlap(phi_num, wf.phi, wf.y) < 0.0:
        phi_num = -phi_num
    header = ["y", "phi_analytic", "phi_numeric", "psi", "ptilde", "psi_of_ptilde"]
    columns = [wf.y, wf.phi, phi_num, wf.psi, wf.ptilde, wf.psi_ptilde]
    if cfg.fmt == "csv":
        _write_csv(cfg.out, header, columns)
    else:
        _write_json(cfg.out, _columns_json(header, columns))
    if cfg.plot:
        figures.wavefunction_figure(wf, phi_num, cfg.out.with_suffix(".png"))
    return 0


_HANDLERS = {
    "simulate": _run_simulate,
    "verify": _run_verify,
    "spectrum": _run_spectrum,
    "wavefunction": _run_wavefunction,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _validate(args)
    except ValueError as exc:  # DomainError included
        print(f"error[invalid-params]: {exc}", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[cfg.command](cfg)
    except (IntegrationError, ResolutionError, ConvergenceError, DomainError) as exc:
        print(f"error[numerical]: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
