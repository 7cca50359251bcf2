"""Delimited/JSON output and figure rendering for runs and sweeps.

Every text artifact is deterministic: values print with 12 significant
digits, metadata lines are `#`-prefixed key/value pairs ahead of the
header, and one of them echoes the originating config as canonical JSON
so a run can be replayed from its own output file.
"""

from __future__ import annotations

import json
from importlib import metadata as _im
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evolve import Trajectory
from .sweeps import SweepResult

CSV_FORMAT = "csv"
JSON_FORMAT = "json"
OUTPUT_FORMATS = (CSV_FORMAT, JSON_FORMAT)


def _package_version() -> str:
    try:
        return _im.version("fracsta")
    except _im.PackageNotFoundError:
        return "0.0.0"


def format_value(value: float) -> str:
    return format(float(value), ".12g")


def trajectory_table(traj: Trajectory) -> tuple[list[str], np.ndarray]:
    """Column names and row block for a propagated trajectory."""
    n_states = traj.populations.shape[1]
    columns = ["t_over_T"] + [f"P{i + 1}" for i in range(n_states)]
    rows = np.column_stack([traj.times, traj.populations])
    return columns, rows


def sweep_table(result: SweepResult) -> tuple[list[str], np.ndarray]:
    """Column names and row block for a sweep.

    Single-protocol sweeps use bare P<i>_final columns; two-protocol
    sweeps prefix each group with the protocol name, shortcut first.
    Theory columns, when the axis has a closed form, come last.
    """
    protocols = result.protocols
    blocks = [result.swept_values.reshape(-1, 1)]
    columns = ["swept_value"]
    for proto in protocols:
        finals = result.finals[proto]
        prefix = "" if len(protocols) == 1 else f"{proto.value}_"
        columns += [f"{prefix}P{i + 1}_final" for i in range(finals.shape[1])]
        blocks.append(finals)
    if result.theory is not None:
        columns += [f"theory_P{i + 1}" for i in range(result.theory.shape[1])]
        blocks.append(result.theory)
    return columns, np.hstack(blocks)


def _metadata_lines(config: dict | None, extra: dict | None) -> list[str]:
    lines = [f"# fracsta {_package_version()}"]
    if config is not None:
        lines.append(f"# config: {json.dumps(config, sort_keys=True)}")
    for key, value in (extra or {}).items():
        rendered = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
        lines.append(f"# {key}: {rendered}")
    return lines


def _write_csv(path: Path, columns: list[str], rows: np.ndarray, lines: list[str]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        for line in lines:
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def _write_json(path: Path, columns: list[str], rows: np.ndarray,
                config: dict | None, extra: dict | None) -> None:
    doc = {
        "artifact": {"name": "fracsta", "version": _package_version()},
        "config": config,
        "metadata": extra or {},
        "columns": columns,
        "rows": [[float(format_value(v)) for v in row] for row in rows],
    }
    with path.open("w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_table(path: str | Path, columns: list[str], rows: np.ndarray, *,
                config: dict | None = None, extra: dict | None = None,
                fmt: str = CSV_FORMAT) -> Path:
    """Write a column block to disk in the requested format, return the path."""
    if fmt not in OUTPUT_FORMATS:
        raise ValueError(f"unknown output format {fmt!r}; expected one of {OUTPUT_FORMATS}")
    path = Path(path)
    if fmt == CSV_FORMAT:
        _write_csv(path, columns, rows, _metadata_lines(config, extra))
    else:
        _write_json(path, columns, rows, config, extra)
    return path


def write_trajectory(path: str | Path, traj: Trajectory, *,
                     config: dict | None = None, extra: dict | None = None,
                     fmt: str = CSV_FORMAT) -> Path:
    columns, rows = trajectory_table(traj)
    meta = dict(extra or {})
    drift = traj.norm_drift if traj.norm_drift is not None else traj.trace_drift
    if drift is not None:
        meta.setdefault("max_drift", float(drift))
    return write_table(path, columns, rows, config=config, extra=meta, fmt=fmt)


def write_sweep(path: str | Path, result: SweepResult, *,
                config: dict | None = None, extra: dict | None = None,
                fmt: str = CSV_FORMAT) -> Path:
    columns, rows = sweep_table(result)
    merged = {**(extra or {}), **result.metadata}
    return write_table(path, columns, rows, config=config, extra=merged, fmt=fmt)


def render_trajectory(path: str | Path, traj: Trajectory, *, title: str | None = None) -> Path:
    """Plot every population against t/T and save a PNG."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for i in range(traj.populations.shape[1]):
        ax.plot(traj.times, traj.populations[:, i], label=f"P{i + 1}", lw=1.6)
    ax.set_xlabel("t / T")
    ax.set_ylabel("population")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False, ncol=2)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.25, lw=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
    return path


def render_sweep(path: str | Path, result: SweepResult, *,
                 xlabel: str | None = None, title: str | None = None) -> Path:
    """Plot final populations (and the analytic target, if any) along the axis."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    x = result.swept_values
    many = len(result.protocols) > 1
    styles = {0: "-", 1: "--"}
    for k, proto in enumerate(result.protocols):
        finals = result.finals[proto]
        prefix = f"{proto.value} " if many else ""
        for i in range(finals.shape[1]):
            ax.plot(x, finals[:, i], styles.get(k, "-"), label=f"{prefix}P{i + 1}", lw=1.4)
    if result.theory is not None:
        for i in range(result.theory.shape[1]):
            label = "target" if i == 0 else None
            ax.plot(x, result.theory[:, i], ":", color="0.35", lw=1.0, label=label)
    ax.set_xlabel(xlabel or result.metadata.get("swept", "swept value"))
    ax.set_ylabel("final population")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False, fontsize=8, ncol=2)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.25, lw=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
    return path
