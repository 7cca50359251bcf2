"""Command-line front end: runs, sweeps, self-checks, and archived figures.

Configs are JSON documents of dimensionless products (omega0_T, tau_over_T,
delta_T, gamma) plus the fraction angles for the chosen system.  Exit codes:
0 on success, 1 when a verification property fails, 2 on any config or
lookup problem (the message names the offending field), 3 when propagation
accuracy cannot be guaranteed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import reports
from .core import Protocol
from .evolve import (
    DecayConfig,
    IntegrationAccuracyError,
    TimeGrid,
    Trajectory,
    propagate_density,
    propagate_state,
)
from .figures import UnknownFigureError, registry_lookup
from .lambda_system import LambdaModel
from .pulses import LambdaDriveConfig, TripodDriveConfig
from .sweeps import SweepAxis, SweepSpec, System, reproduce_figure, run_sweep
from .tripod_system import TripodModel
from .verify import DEFAULT_SEED, verify_system

THREADS_ENV = "FRACSTA_THREADS"

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_CONFIG = 2
EXIT_ACCURACY = 3

_MISSING = object()

_TOP_KEYS = {
    "system", "protocol", "omega0_T", "tau_over_T", "delta_T",
    "alpha", "beta", "chi", "gamma", "grid", "output",
}
_GRID_KEYS = {"t_start_over_T", "t_end_over_T", "n_steps"}
_OUTPUT_KEYS = {"path", "format"}


class ConfigError(ValueError):
    """Schema violation in a config document; the message names the field."""


def _number(doc: dict, key: str, default=_MISSING, *,
            minimum: float | None = None, exclusive: bool = False) -> float:
    value = doc.get(key, default)
    if value is _MISSING:
        raise ConfigError(f"missing required field '{key}'")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{key}' must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"field '{key}' must be finite, got {value!r}")
    if minimum is not None:
        if exclusive and not value > minimum:
            raise ConfigError(f"field '{key}' must be greater than {minimum}, got {value}")
        if not exclusive and value < minimum:
            raise ConfigError(f"field '{key}' must be at least {minimum}, got {value}")
    return value


def _choice(doc: dict, key: str, allowed: set[str]) -> str:
    value = doc.get(key, _MISSING)
    if value is _MISSING:
        raise ConfigError(f"missing required field '{key}'")
    if not isinstance(value, str) or value not in allowed:
        raise ConfigError(f"field '{key}' must be one of {sorted(allowed)}, got {value!r}")
    return value


@dataclass(frozen=True)
class RunConfig:
    """One validated CLI run: system, protocol, drive, decay, grid, output."""

    system: System
    protocol: Protocol
    omega0_T: float
    tau_over_T: float
    delta_T: float = 0.0
    alpha: float | None = None
    beta: float | None = None
    chi: float | None = None
    gamma: float = 0.0
    grid: TimeGrid = field(default_factory=TimeGrid)
    output_path: str | None = None
    output_format: str = reports.CSV_FORMAT

    @classmethod
    def from_dict(cls, doc) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        unknown = sorted(set(doc) - _TOP_KEYS)
        if unknown:
            raise ConfigError(f"unknown field '{unknown[0]}'")

        system = System(_choice(doc, "system", {s.value for s in System}))
        protocol = Protocol(_choice(doc, "protocol", {p.value for p in Protocol}))
        omega0 = _number(doc, "omega0_T", minimum=0.0, exclusive=True)
        tau = _number(doc, "tau_over_T", minimum=0.0)
        delta = _number(doc, "delta_T", 0.0)
        gamma = _number(doc, "gamma", 0.0, minimum=0.0)

        angles: dict[str, float] = {}
        wanted = ("alpha",) if system is System.LAMBDA else ("beta", "chi")
        for name in ("alpha", "beta", "chi"):
            if name in wanted:
                angles[name] = _number(doc, name)
            elif name in doc:
                raise ConfigError(f"field '{name}' does not apply to system={system.value}")

        grid_doc = doc.get("grid", {})
        if not isinstance(grid_doc, dict):
            raise ConfigError("field 'grid' must be an object")
        unknown = sorted(set(grid_doc) - _GRID_KEYS)
        if unknown:
            raise ConfigError(f"unknown grid field '{unknown[0]}'")
        t_start = _number(grid_doc, "t_start_over_T", -5.0)
        t_end = _number(grid_doc, "t_end_over_T", 5.0)
        if not t_start < t_end:
            raise ConfigError("field 'grid.t_end_over_T' must exceed 'grid.t_start_over_T'")
        n_steps = grid_doc.get("n_steps", 4000)
        if isinstance(n_steps, bool) or not isinstance(n_steps, int):
            raise ConfigError(f"field 'grid.n_steps' must be an integer, got {n_steps!r}")
        # The step floor is an accuracy guarantee, not a schema rule: let
        # TimeGrid raise IntegrationAccuracyError so it maps to exit 3.
        grid = TimeGrid(t_start=t_start, t_end=t_end, n_steps=n_steps)

        out_doc = doc.get("output", {})
        if not isinstance(out_doc, dict):
            raise ConfigError("field 'output' must be an object")
        unknown = sorted(set(out_doc) - _OUTPUT_KEYS)
        if unknown:
            raise ConfigError(f"unknown output field '{unknown[0]}'")
        path = out_doc.get("path")
        if path is not None and not isinstance(path, str):
            raise ConfigError(f"field 'output.path' must be a string, got {path!r}")
        fmt = out_doc.get("format", reports.CSV_FORMAT)
        if isinstance(fmt, str):
            fmt = fmt.lower()
        if fmt not in reports.OUTPUT_FORMATS:
            raise ConfigError(
                f"field 'output.format' must be one of {list(reports.OUTPUT_FORMATS)},"
                f" got {out_doc.get('format')!r}"
            )

        run = cls(
            system=system, protocol=protocol, omega0_T=omega0, tau_over_T=tau,
            delta_T=delta, alpha=angles.get("alpha"), beta=angles.get("beta"),
            chi=angles.get("chi"), gamma=gamma, grid=grid,
            output_path=path, output_format=fmt,
        )
        try:
            run.drive_config()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return run

    def to_dict(self) -> dict:
        """Canonical JSON document; from_dict on it rebuilds an equal RunConfig."""
        doc: dict = {
            "system": self.system.value,
            "protocol": self.protocol.value,
            "omega0_T": self.omega0_T,
            "tau_over_T": self.tau_over_T,
            "delta_T": self.delta_T,
            "gamma": self.gamma,
        }
        if self.system is System.LAMBDA:
            doc["alpha"] = self.alpha
        else:
            doc["beta"] = self.beta
            doc["chi"] = self.chi
        doc["grid"] = {
            "t_start_over_T": self.grid.t_start,
            "t_end_over_T": self.grid.t_end,
            "n_steps": self.grid.n_steps,
        }
        output: dict = {}
        if self.output_path is not None:
            output["path"] = self.output_path
        if self.output_format != reports.CSV_FORMAT:
            output["format"] = self.output_format
        if output:
            doc["output"] = output
        return doc

    def drive_config(self) -> LambdaDriveConfig | TripodDriveConfig:
        if self.system is System.LAMBDA:
            return LambdaDriveConfig(
                omega0=self.omega0_T, tau=self.tau_over_T, T=1.0,
                alpha=self.alpha, delta=self.delta_T,
            )
        return TripodDriveConfig(
            omega0=self.omega0_T, tau=self.tau_over_T, T=1.0,
            beta=self.beta, chi=self.chi, delta=self.delta_T,
        )

    def decay_config(self) -> DecayConfig:
        return DecayConfig(gamma=self.gamma, T=1.0)

    def model(self, protocol: Protocol | None = None):
        make = LambdaModel if self.system is System.LAMBDA else TripodModel
        return make(self.drive_config(), protocol or self.protocol)


def _load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return RunConfig.from_dict(doc)


def _resolve_threads(value: int | None) -> int:
    if value is None:
        raw = os.environ.get(THREADS_ENV)
        if raw is None:
            return 1
        try:
            value = int(raw)
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ConfigError("thread count must be at least 1")
    return value


def cmd_simulate(args: argparse.Namespace) -> int:
    run = _load_config(args.config)
    if run.protocol is Protocol.BOTH:
        raise ConfigError(
            "field 'protocol' must name a single protocol for simulate;"
            " 'both' applies to sweeps"
        )
    model = run.model()
    if run.gamma > 0:
        traj = propagate_density(model.matrix, model.initial_density(),
                                 run.decay_config(), run.grid)
    else:
        traj = propagate_state(model.matrix, model.initial_state(), run.grid)
    path = Path(args.output or run.output_path or f"trajectory.{run.output_format}")
    extra = {
        "system": run.system.value,
        "protocol": run.protocol.value,
        "gamma": run.gamma,
        "detuning_convention": "delta_T is the one-photon detuning times the pulse width",
    }
    reports.write_trajectory(path, traj, config=run.to_dict(), extra=extra,
                             fmt=run.output_format)
    written = [str(path)]
    if args.plot:
        png = path.with_suffix(".png")
        reports.render_trajectory(png, traj,
                                  title=f"{run.system.value} / {run.protocol.value}")
        written.append(str(png))
    print("wrote " + " and ".join(written))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    run = _load_config(args.config)
    axis = SweepAxis(args.param)
    threads = _resolve_threads(args.threads)
    if args.points < 2:
        raise ConfigError("--points must be at least 2")
    spec = SweepSpec(
        system=run.system,
        protocol=run.protocol,
        swept=axis,
        sweep_range=(args.min, args.max, args.points),
        fixed=run.drive_config(),
        decay=run.decay_config(),
        grid=run.grid,
        open_system=run.gamma > 0 or axis is SweepAxis.GAMMA,
    )
    result = run_sweep(spec, threads=threads)
    path = Path(args.output or run.output_path or f"sweep_{axis.value}.{run.output_format}")
    reports.write_sweep(path, result, config=run.to_dict(), fmt=run.output_format)
    written = [str(path)]
    if args.plot:
        png = path.with_suffix(".png")
        reports.render_sweep(png, result, xlabel=axis.value,
                             title=f"{run.system.value} / {run.protocol.value}")
        written.append(str(png))
    print("wrote " + " and ".join(written))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.trials <= 0:
        print("nothing to verify: --trials must be positive", file=sys.stderr)
        return EXIT_CONFIG
    report = verify_system(System(args.system), args.trials, seed=args.seed)
    width = max(len(s.name) for s in report.suites)
    print(f"system={report.system} trials={report.trials} seed={report.seed}")
    for suite in report.suites:
        status = "ok" if suite.passed else "FAIL"
        print(f"  {suite.name:<{width}}  worst {suite.worst:.3e}"
              f"  tolerance {suite.tolerance:.1e}  {status}")
    failure = report.first_failure
    if failure is not None:
        print(f"verification failed: {failure.name}"
              f" (worst {failure.worst:.3e} exceeds {failure.tolerance:.1e})",
              file=sys.stderr)
        return EXIT_PROPERTY_FAILURE
    print("all suites passed")
    return EXIT_OK


def cmd_figure(args: argparse.Namespace) -> int:
    entry = registry_lookup(args.id)
    threads = _resolve_threads(args.threads)
    result = reproduce_figure(entry.figure_id, threads=threads)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    data_path = outdir / f"figure_{entry.figure_id}.csv"
    info = {
        "figure": entry.figure_id,
        "system": entry.system,
        "protocols": [p.value for p in entry.protocols],
        "params": entry.params,
        "figure_gamma": entry.gamma,
        "note": entry.note,
    }
    written = [str(data_path)]
    if isinstance(result, Trajectory):
        reports.write_trajectory(data_path, result, extra=info)
        if not args.no_plot:
            png = outdir / f"figure_{entry.figure_id}.png"
            reports.render_trajectory(png, result, title=entry.figure_id)
            written.append(str(png))
    else:
        reports.write_sweep(data_path, result, extra=info)
        if not args.no_plot:
            png = outdir / f"figure_{entry.figure_id}.png"
            reports.render_sweep(png, result, xlabel=result.metadata.get("swept"),
                                 title=entry.figure_id)
            written.append(str(png))
    print("wrote " + " and ".join(written))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracsta",
        description="Fractional Raman-passage simulator: trajectories, sweeps,"
                    " self-verification, and archived figure runs.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {reports._package_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate",
                         help="propagate one configuration and write the trajectory")
    sim.add_argument("config", help="path to a JSON run configuration")
    sim.add_argument("--output", help="output path (default: config output.path,"
                                      " else trajectory.<format>)")
    sim.add_argument("--plot", action="store_true",
                     help="also render a PNG next to the data file")
    sim.set_defaults(handler=cmd_simulate)

    swp = sub.add_parser("sweep", help="vary one axis and record final populations")
    swp.add_argument("config", help="path to a JSON run configuration (the fixed point)")
    swp.add_argument("--param", required=True, choices=[a.value for a in SweepAxis],
                     help="axis to vary")
    swp.add_argument("--min", type=float, required=True, help="first swept value")
    swp.add_argument("--max", type=float, required=True, help="last swept value")
    swp.add_argument("--points", type=int, required=True, help="number of grid points")
    swp.add_argument("--output", help="output path (default: sweep_<param>.<format>)")
    swp.add_argument("--threads", type=int, default=None,
                     help=f"worker threads for sweep points (env {THREADS_ENV}; default 1)")
    swp.add_argument("--plot", action="store_true",
                     help="also render a PNG next to the data file")
    swp.set_defaults(handler=cmd_sweep)

    ver = sub.add_parser("verify", help="run the self-check suites over random draws")
    ver.add_argument("--system", required=True, choices=[s.value for s in System])
    ver.add_argument("--trials", type=int, default=50, help="random parameter draws")
    ver.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ver.set_defaults(handler=cmd_verify)

    fig = sub.add_parser("figure",
                         help="re-run an archived figure and write figure_<id>.csv/.png")
    fig.add_argument("--id", required=True, help="registered figure id")
    fig.add_argument("--outdir", default=".", help="directory for the output files")
    fig.add_argument("--threads", type=int, default=None,
                     help=f"worker threads for sweep figures (env {THREADS_ENV}; default 1)")
    fig.add_argument("--no-plot", action="store_true",
                     help="write only the data file, skip the PNG")
    fig.set_defaults(handler=cmd_figure)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return args.handler(args)
    except IntegrationAccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except UnknownFigureError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())
