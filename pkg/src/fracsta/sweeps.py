"""Parameter sweeps over final populations, with analytic overlays.

A sweep fixes one drive (or decay) configuration, varies a single axis
over a uniform grid, and records the final populations of each requested
protocol at every point.  Points are propagated independently and stitched
back together in axis order, so results are bit-identical for a given spec
no matter how many worker threads run the points.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .core import Protocol
from .evolve import (
    DecayConfig,
    IntegrationAccuracyError,
    TimeGrid,
    Trajectory,
    propagate_density,
    propagate_state,
)
from .figures import FigureRegistryEntry, registry_lookup
from .lambda_system import LambdaModel
from .pulses import HALF_RANGE, LambdaDriveConfig, TripodDriveConfig
from .tripod_system import TripodModel


class System(Enum):
    LAMBDA = "lambda"
    TRIPOD = "tripod"


class SweepAxis(Enum):
    OMEGA0 = "omega0"
    TAU = "tau"
    ALPHA = "alpha"
    BETA = "beta"
    CHI = "chi"
    GAMMA = "gamma"


# Axes that rescale a drive-config field directly, keyed to that field.
_DRIVE_FIELDS = {
    SweepAxis.OMEGA0: "omega0",
    SweepAxis.TAU: "tau",
    SweepAxis.ALPHA: "alpha",
    SweepAxis.BETA: "beta",
    SweepAxis.CHI: "chi",
}

_LAMBDA_ONLY = {SweepAxis.ALPHA}
_TRIPOD_ONLY = {SweepAxis.BETA, SweepAxis.CHI}

# Fraction-angle axes admit a closed-form final-population law.
_THEORY_AXES = {SweepAxis.ALPHA, SweepAxis.BETA, SweepAxis.CHI}

# Fixed expansion order for protocol=BOTH; also the column order in reports.
_BOTH_ORDER = (Protocol.F_STA, Protocol.F_STIRAP)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: which system and protocol(s), which axis, over what grid."""

    system: System
    protocol: Protocol
    swept: SweepAxis
    sweep_range: tuple[float, float, int]
    fixed: LambdaDriveConfig | TripodDriveConfig
    decay: DecayConfig = DecayConfig()
    grid: TimeGrid = field(default_factory=TimeGrid)
    open_system: bool = False

    def __post_init__(self) -> None:
        expected = LambdaDriveConfig if self.system is System.LAMBDA else TripodDriveConfig
        if not isinstance(self.fixed, expected):
            raise ValueError(
                f"{self.system.value} sweep needs a {expected.__name__}, "
                f"got {type(self.fixed).__name__}"
            )
        if self.system is System.LAMBDA and self.swept in _TRIPOD_ONLY:
            raise ValueError(f"axis {self.swept.value} does not exist in the 3-level scheme")
        if self.system is System.TRIPOD and self.swept in _LAMBDA_ONLY:
            raise ValueError(f"axis {self.swept.value} does not exist in the 4-level scheme")
        if self.swept is SweepAxis.GAMMA and not self.open_system:
            raise ValueError("a gamma sweep only makes sense with open_system=True")
        lo, hi, n = self.sweep_range
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ValueError(f"bad sweep range [{lo}, {hi}]")
        if int(n) != n or n < 2:
            raise ValueError(f"a sweep needs at least 2 points, got {n}")

    @property
    def values(self) -> np.ndarray:
        lo, hi, n = self.sweep_range
        return np.linspace(lo, hi, int(n))

    @property
    def protocols(self) -> tuple[Protocol, ...]:
        if self.protocol is Protocol.BOTH:
            return _BOTH_ORDER
        return (self.protocol,)

    @property
    def in_validated_range(self) -> bool:
        ok = self.fixed.in_validated_range
        if self.swept in _THEORY_AXES:
            ok = ok and self.sweep_range[1] <= HALF_RANGE
        return ok


@dataclass(frozen=True)
class SweepResult:
    """Final populations per protocol along the swept axis."""

    swept_values: np.ndarray
    finals: dict[Protocol, np.ndarray]
    theory: np.ndarray | None
    metadata: dict

    @property
    def protocols(self) -> tuple[Protocol, ...]:
        return tuple(self.finals.keys())


def theory_curve(spec: SweepSpec) -> np.ndarray:
    """Closed-form final populations along the swept axis.

    Available only for fraction-angle axes, where the frozen dark state
    fixes the targets outright: (cos^2 a, 0, sin^2 a) against alpha, and
    (cos^2 b, 0, sin^2 b cos^2 x, sin^2 b sin^2 x) against beta or chi.
    """
    v = spec.values
    if spec.system is System.LAMBDA and spec.swept is SweepAxis.ALPHA:
        return np.stack([np.cos(v) ** 2, np.zeros_like(v), np.sin(v) ** 2], axis=1)
    if spec.system is System.TRIPOD and spec.swept is SweepAxis.BETA:
        chi = spec.fixed.chi
        return np.stack(
            [
                np.cos(v) ** 2,
                np.zeros_like(v),
                np.sin(v) ** 2 * np.cos(chi) ** 2,
                np.sin(v) ** 2 * np.sin(chi) ** 2,
            ],
            axis=1,
        )
    if spec.system is System.TRIPOD and spec.swept is SweepAxis.CHI:
        beta = spec.fixed.beta
        return np.stack(
            [
                np.full_like(v, np.cos(beta) ** 2),
                np.zeros_like(v),
                np.sin(beta) ** 2 * np.cos(v) ** 2,
                np.sin(beta) ** 2 * np.sin(v) ** 2,
            ],
            axis=1,
        )
    raise ValueError(f"no analytic final-population law for axis {spec.swept.value}")


def _point(spec: SweepSpec, value: float) -> tuple[dict[Protocol, np.ndarray], float]:
    if spec.swept is SweepAxis.GAMMA:
        cfg, decay = spec.fixed, replace(spec.decay, gamma=float(value))
    else:
        cfg = replace(spec.fixed, **{_DRIVE_FIELDS[spec.swept]: float(value)})
        decay = spec.decay
    make = LambdaModel if spec.system is System.LAMBDA else TripodModel
    finals: dict[Protocol, np.ndarray] = {}
    drift = 0.0
    for proto in spec.protocols:
        model = make(cfg, proto)
        if spec.open_system:
            traj = propagate_density(model.matrix, model.initial_density(), decay, spec.grid)
            drift = max(drift, traj.trace_drift)
        else:
            traj = propagate_state(model.matrix, model.initial_state(), spec.grid)
            drift = max(drift, traj.norm_drift)
        finals[proto] = traj.final_populations
    return finals, drift


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Propagate every point of the sweep and collect final populations.

    threads > 1 runs points on a thread pool; assembly stays in axis order,
    so the result is identical to the single-threaded one.
    """
    values = spec.values

    def indexed(pair: tuple[int, float]):
        row, value = pair
        try:
            return _point(spec, value)
        except IntegrationAccuracyError as exc:
            raise IntegrationAccuracyError(
                f"sweep row {row} ({spec.swept.value}={value:.6g}): {exc}"
            ) from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(indexed, enumerate(values)))
    else:
        rows = [indexed(pair) for pair in enumerate(values)]

    finals = {
        proto: np.array([row[0][proto] for row in rows]) for proto in spec.protocols
    }
    drift = max(row[1] for row in rows)
    theory = theory_curve(spec) if spec.swept in _THEORY_AXES else None

    fixed = spec.fixed
    fixed_params = {
        "omega0_T": fixed.omega0 * fixed.T,
        "tau_over_T": fixed.tau / fixed.T,
        "delta_T": fixed.delta * fixed.T,
    }
    if isinstance(fixed, LambdaDriveConfig):
        fixed_params["alpha"] = fixed.alpha
    else:
        fixed_params["beta"] = fixed.beta
        fixed_params["chi"] = fixed.chi
    metadata = {
        "system": spec.system.value,
        "protocol": spec.protocol.value,
        "swept": spec.swept.value,
        "range": [spec.sweep_range[0], spec.sweep_range[1], int(spec.sweep_range[2])],
        "fixed": fixed_params,
        "gamma": "swept" if spec.swept is SweepAxis.GAMMA else spec.decay.gamma,
        "open_system": spec.open_system,
        "grid": {
            "t_start": spec.grid.t_start,
            "t_end": spec.grid.t_end,
            "n_steps": spec.grid.n_steps,
        },
        "in_validated_range": spec.in_validated_range,
        "max_drift": drift,
        "theory": theory is not None,
    }
    return SweepResult(swept_values=values, finals=finals, theory=theory, metadata=metadata)


def _entry_drive(entry: FigureRegistryEntry) -> LambdaDriveConfig | TripodDriveConfig:
    p = entry.params
    common = {
        "omega0": p["omega0_T"],
        "tau": p["tau_over_T"],
        "T": 1.0,
        "delta": p["delta_T"],
    }
    if entry.system == "lambda":
        return LambdaDriveConfig(alpha=p["alpha"], **common)
    return TripodDriveConfig(beta=p["beta"], chi=p["chi"], **common)


def reproduce_figure(figure_id: str, threads: int = 1) -> Trajectory | SweepResult:
    """Re-run the simulation behind a registered figure.

    Trajectory entries come back as a Trajectory (single protocol); sweep
    entries come back as a SweepResult covering every registered protocol.
    """
    entry = registry_lookup(figure_id)
    cfg = _entry_drive(entry)
    grid = TimeGrid.spanning(cfg.T)
    if entry.kind == "trajectory":
        make = LambdaModel if entry.system == "lambda" else TripodModel
        model = make(cfg, entry.protocols[0])
        if entry.open_system:
            decay = DecayConfig(gamma=entry.gamma, T=cfg.T)
            return propagate_density(model.matrix, model.initial_density(), decay, grid)
        return propagate_state(model.matrix, model.initial_state(), grid)

    sweep = entry.sweep
    spec = SweepSpec(
        system=System(entry.system),
        protocol=entry.protocols[0] if len(entry.protocols) == 1 else Protocol.BOTH,
        swept=SweepAxis(sweep["axis"]),
        sweep_range=(sweep["min"], sweep["max"], sweep["points"]),
        fixed=cfg,
        decay=DecayConfig(gamma=entry.gamma, T=cfg.T),
        grid=grid,
        open_system=entry.open_system,
    )
    return run_sweep(spec, threads=threads)
