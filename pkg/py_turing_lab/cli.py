"""
Command line front end

Example usage:
    $ py-turing-lab equilibrium run.cfg
    $ py-turing-lab simulate run.cfg --output runs/k32-2
"""

__all__ = ["SUBCOMMANDS", "dispatch", "main", "build_parser"]

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

import numpy as np

from py_turing_lab.__about__ import VERSION
from py_turing_lab.config import RunConfig, load_config
from py_turing_lab.exceptions import (
    BlowUpError,
    BracketError,
    ConditionViolated,
    ConfigException,
    CoreException,
    DomainError,
    ParseError,
    StepSizeError,
    ValidationError,
)
from py_turing_lab.model import CrossDiffusionModel
from py_turing_lab.solvers.linear_stability import LinearStability
from py_turing_lab.solvers.ode_solver import OdeSolver
from py_turing_lab.solvers.pattern_analysis import PatternAnalysis
from py_turing_lab.solvers.pde_solver import PdeSolver
from py_turing_lab.writers import (
    snapshot_basename,
    write_dispersion_csv,
    write_matrix,
    write_pgm,
    write_sweep_csv,
    write_trajectory_csv,
)

py_turing_lab_logger = logging.getLogger("py_turing_lab")

SUBCOMMANDS = ("equilibrium", "ode", "dispersion", "threshold", "simulate", "sweep")

EXIT_CODES = (
    ParseError,
    ValidationError,
    ConditionViolated,
    DomainError,
    StepSizeError,
    BracketError,
    BlowUpError,
    CoreException,
)

CONTINUOUS_MU_POINTS = 4001
USAGE_EXIT_CODE = 64


def _exit_code_help() -> str:
    lines = ["exit codes:", "  0  success"]
    lines.extend(f"  {error.exit_code:<2} {error.__name__}" for error in EXIT_CODES)
    lines.append(f"  {USAGE_EXIT_CODE:<2} command line usage error")
    return "\n".join(lines)


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _write_manifest(cfg: RunConfig, out: Path) -> Path:
    path = out / "manifest.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(cfg.to_text(), encoding="utf-8")
    return path


def _equilibrium(cfg: RunConfig, stdout: TextIO) -> int:
    model = CrossDiffusionModel(cfg.model)
    exists = model.check_existence()
    print(f"existence abc > max{{e(b-a), d(a-b)}}: {str(exists).lower()}", file=stdout)
    ubar = model.positive_equilibrium()
    for name, value in ubar._asdict().items():
        print(f"{name} = {_fmt(value)}", file=stdout)
    stability = LinearStability(model)
    for which in ("k31", "k32"):
        print(
            f"turing_hypothesis {which}: "
            f"{str(stability.turing_hypothesis(which)).lower()}",
            file=stdout,
        )
    return 0


def _ode(cfg: RunConfig, stdout: TextIO) -> int:
    solver = OdeSolver(CrossDiffusionModel(cfg.model))
    trajectory = solver.integrate_ode(cfg.ode.u0, cfg.ode.t_end, cfg.ode.dt)
    path = write_trajectory_csv(trajectory, cfg.output_dir / "trajectory.csv")
    print(f"trajectory: {path}", file=stdout)
    print(f"clipped components: {trajectory.clip_count}", file=stdout)
    final = trajectory.final
    print("final = " + ", ".join(_fmt(v) for v in final), file=stdout)
    if np.all(trajectory.states > 0.0):
        report = solver.verify_lyapunov_descent(trajectory)
        print(f"lyapunov monotone: {str(report.monotone).lower()}", file=stdout)
        print(f"lyapunov max_increase: {_fmt(report.max_increase)}", file=stdout)
    else:
        print("lyapunov descent: skipped (a species is extinct)", file=stdout)
    return 0


def _mu_set(cfg: RunConfig) -> np.ndarray:
    lattice = cfg.sweep.lattice()
    if cfg.sweep.mu_domain == "lattice":
        return lattice
    return np.linspace(0.0, float(lattice.max()), CONTINUOUS_MU_POINTS)


def _dispersion(cfg: RunConfig, stdout: TextIO) -> int:
    stability = LinearStability(CrossDiffusionModel(cfg.model))
    mu_set = _mu_set(cfg)
    curve = stability.dispersion_vs_parameter(
        cfg.sweep.parameter, cfg.sweep.values, mu_set
    )
    path = write_dispersion_csv(curve, cfg.output_dir / "dispersion.csv")
    by_mu = stability.dispersion_vs_wavenumber(mu_set)
    mu_path = write_dispersion_csv(by_mu, cfg.output_dir / "dispersion_mu.csv")
    print(f"dispersion: {path}", file=stdout)
    print(f"dispersion_mu: {mu_path}", file=stdout)
    print(stability.det_cubic().to_table(), file=stdout)
    for crossing in curve.zero_crossings():
        print(f"zero crossing {cfg.sweep.parameter} ~ {_fmt(crossing)}", file=stdout)
    return 0


def _threshold(cfg: RunConfig, stdout: TextIO) -> int:
    stability = LinearStability(CrossDiffusionModel(cfg.model))
    sweep = cfg.sweep
    value = stability.turing_threshold(
        sweep.parameter, sweep.lo, sweep.hi, sweep.tol, sweep.threshold_lattice()
    )
    print(f"threshold {sweep.parameter} = {_fmt(value)}", file=stdout)
    print(f"bracket = [{_fmt(sweep.lo)}, {_fmt(sweep.hi)}]", file=stdout)
    print(f"tol = {_fmt(sweep.tol)}", file=stdout)
    print(f"mu_domain = {sweep.mu_domain}", file=stdout)
    return 0


def _simulate(cfg: RunConfig, stdout: TextIO) -> int:
    model = CrossDiffusionModel(cfg.model)
    result = PdeSolver(model).simulate(cfg.grid, cfg.sim)
    out = cfg.output_dir
    for snapshot in result.snapshots:
        for species, f in enumerate(snapshot.fields):
            name = snapshot_basename(species, snapshot.step)
            if cfg.output.raster != "none":
                write_pgm(f, out / f"{name}.pgm", binary=cfg.output.raster == "p5")
            if cfg.output.dump:
                write_matrix(f, out / f"{name}.txt")
    manifest = _write_manifest(cfg, out)
    metrics = PatternAnalysis(model).pattern_metrics(result.final[0])
    print(f"manifest: {manifest}", file=stdout)
    print(f"snapshots: {len(result.snapshots)}", file=stdout)
    print(f"u1 amplitude: {_fmt(metrics.amplitude)}", file=stdout)
    print(f"u1 spot_count: {metrics.spot_count}", file=stdout)
    print(f"classification: {metrics.classification}", file=stdout)
    print(f"clamps: {result.diagnostics.clamps}", file=stdout)
    print(f"picard_failures: {result.diagnostics.picard_failures}", file=stdout)
    if cfg.sim.perturb_amplitude == 0.0:
        print(
            "note: perturb_amplitude = 0, the run starts at the equilibrium",
            file=stdout,
        )
    return 0


def _sweep(cfg: RunConfig, stdout: TextIO) -> int:
    analysis = PatternAnalysis(CrossDiffusionModel(cfg.model))
    sweep = cfg.sweep
    threshold = analysis.domain_threshold(
        cfg.grid, sweep.parameter, sweep.lo, sweep.hi, sweep.tol
    )
    records = analysis.bifurcation_sweep(
        cfg.grid,
        cfg.sim,
        sweep.parameter,
        sweep.values,
        workers=sweep.workers,
        threshold=threshold,
    )
    path = write_sweep_csv(records, cfg.output_dir / "sweep.csv")
    _write_manifest(cfg, cfg.output_dir)
    print(f"sweep: {path}", file=stdout)
    print("u1 extrema are taken over the final snapshot", file=stdout)
    print(f"grid threshold {sweep.parameter} = {_fmt(threshold)}", file=stdout)
    violations = analysis.check_monotone_sweep(records)
    print(f"up-set violations: {len(violations)}", file=stdout)
    disagreements = analysis.check_against_prediction(records, threshold)
    print(f"prediction disagreements: {len(disagreements)}", file=stdout)
    return 0


HANDLERS = {
    "equilibrium": _equilibrium,
    "ode": _ode,
    "dispersion": _dispersion,
    "threshold": _threshold,
    "simulate": _simulate,
    "sweep": _sweep,
}


def _report(err: Exception, stderr: TextIO) -> int:
    message = str(err).replace("\n", " ")
    print(
        f"error code={err.code} type={type(err).__name__} message={message}",
        file=stderr,
    )
    return err.code


def dispatch(
    cfg: RunConfig,
    subcommand: str,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """
    Run one pipeline stage and write its files under the output directory.

    Returns:
        0 on success, otherwise the exit code of the raised error
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if subcommand not in HANDLERS:
        raise ValueError(f"subcommand must be one of {', '.join(SUBCOMMANDS)}")
    try:
        return HANDLERS[subcommand](cfg, stdout)
    except (CoreException, ConfigException) as err:
        py_turing_lab_logger.error("%s failed: %s", subcommand, err)
        return _report(err, stderr)


class UsageParser(argparse.ArgumentParser):
    """Exits with its own code so usage errors stay apart from ParseError"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT_CODE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = UsageParser(
        prog="py-turing-lab",
        description="Stability analysis and pattern simulation for a "
        "cross-diffusion two-prey one-predator system.",
        epilog=_exit_code_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=VERSION)
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("config", type=Path, help="configuration document")
    parser.add_argument("--output", type=Path, help="override [output] directory")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    return parser


def main(argv=None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None):
    args = build_parser().parse_args(argv)
    stderr = stderr or sys.stderr
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args.config)
    except (CoreException, ConfigException) as err:
        return _report(err, stderr)
    if args.output is not None:
        cfg = dataclasses.replace(
            cfg, output=dataclasses.replace(cfg.output, directory=str(args.output))
        )
    return dispatch(cfg, args.subcommand, stdout=stdout, stderr=stderr)


if __name__ == "__main__":
    sys.exit(main())
