"""Self-checks against independent oracles, over random parameter draws.

Four suites, each with a hard tolerance:

* counterdiabatic oracle: the analytic correction i dU/dt U^T must match a
  central finite difference of the transformation matrix itself;
* dark-state annihilation: the bare Hamiltonian must kill its dark
  state(s) to rounding accuracy, relative to the Hamiltonian scale;
* orthonormality: the dressed-state transformation must be orthogonal;
* conservation: default-grid propagation must hold the norm (closed) and
  the trace (open) to well below the documented drift budget.

The draws cover the validated parameter box (fraction angles inside
(0, pi/2), drive strengths 0.5..10, delays 0.2..1.5, detunings 0..2*pi,
with a zero-detuning draw mixed in every fifth trial).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Protocol
from .evolve import DecayConfig, TimeGrid, propagate_density, propagate_state
from .lambda_system import LambdaModel, lambda_ha, lambda_transformation
from .pulses import LambdaDriveConfig, TripodDriveConfig
from .sweeps import System
from .tripod_system import TripodModel, tripod_ha, tripod_transformation

CD_ACCURACY = 1e-5  # per unit 1/T, elementwise
DARK_ACCURACY = 1e-12  # relative to the largest Hamiltonian entry
ORTHONORMALITY_ACCURACY = 1e-12
NORM_DRIFT_BUDGET = 1e-7
TRACE_DRIFT_BUDGET = 1e-7
HERMITICITY_DRIFT_BUDGET = 1e-9

FD_STEP = 1e-5  # finite-difference half step, units of T
DEFAULT_SEED = 20260816


@dataclass(frozen=True)
class SuiteResult:
    name: str
    worst: float
    tolerance: float
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    system: str
    trials: int
    seed: int
    suites: tuple[SuiteResult, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    @property
    def first_failure(self) -> SuiteResult | None:
        for s in self.suites:
            if not s.passed:
                return s
        return None


def _draw_config(system: System, rng: np.random.Generator, index: int):
    omega0 = rng.uniform(0.5, 10.0)
    tau = rng.uniform(0.2, 1.5)
    delta = 0.0 if index % 5 == 0 else rng.uniform(0.0, 2.0 * np.pi)
    lo, hi = 0.05, np.pi / 2 - 0.05
    if system is System.LAMBDA:
        return LambdaDriveConfig(omega0=omega0, tau=tau, alpha=rng.uniform(lo, hi), delta=delta)
    return TripodDriveConfig(
        omega0=omega0, tau=tau, beta=rng.uniform(lo, hi), chi=rng.uniform(lo, hi), delta=delta
    )


def _sample_times(rng: np.random.Generator) -> np.ndarray:
    return np.concatenate([np.linspace(-3.0, 3.0, 9), rng.uniform(-3.0, 3.0, 4)])


def _cd_defect(system: System, cfg, t: float) -> float:
    """Elementwise gap between the analytic correction and i dU/dt U^T."""
    if system is System.LAMBDA:
        transform, correction = lambda_transformation, lambda_ha
    else:
        transform, correction = tripod_transformation, tripod_ha
    du = (transform(cfg, t + FD_STEP) - transform(cfg, t - FD_STEP)) / (2.0 * FD_STEP)
    fd = 1j * du @ transform(cfg, t).T
    return float(np.abs(correction(cfg, t).elements - fd).max())


def _dark_defect(system: System, cfg, t: float) -> float:
    """Residual of H0 on its dark state(s), relative to the H0 scale."""
    if system is System.LAMBDA:
        from .lambda_system import _h0_matrix

        h0 = _h0_matrix(cfg, t)
        u = lambda_transformation(cfg, t)
        dark = u[:, 1:2]  # dark column
    else:
        from .tripod_system import _h0_matrix

        h0 = _h0_matrix(cfg, t)
        u = tripod_transformation(cfg, t)
        dark = u[:, 0:2]  # both degenerate dark columns
    scale = max(float(np.abs(h0).max()), 1e-300)
    return float(np.abs(h0 @ dark).max()) / scale


def _ortho_defect(system: System, cfg, t: float) -> float:
    u = lambda_transformation(cfg, t) if system is System.LAMBDA else tripod_transformation(cfg, t)
    return float(np.abs(u @ u.T - np.eye(u.shape[0])).max())


def verify_system(
    system: System,
    trials: int,
    seed: int = DEFAULT_SEED,
    propagation_trials: int | None = None,
    grid: TimeGrid | None = None,
) -> VerificationReport:
    """Run all suites over `trials` random draws and report the worst cases.

    propagation_trials caps how many draws get full default-grid
    propagations (they dominate the runtime); None means all of them.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    grid = grid or TimeGrid()
    n_prop = trials if propagation_trials is None else min(propagation_trials, trials)

    worst = {"cd": 0.0, "dark": 0.0, "ortho": 0.0, "norm": 0.0, "trace": 0.0, "herm": 0.0}
    where = {k: "" for k in worst}

    def bump(key: str, value: float, cfg) -> None:
        if value > worst[key]:
            worst[key] = value
            where[key] = f"worst at {cfg}"

    make = LambdaModel if system is System.LAMBDA else TripodModel
    for i in range(trials):
        cfg = _draw_config(system, rng, i)
        for t in _sample_times(rng):
            bump("cd", _cd_defect(system, cfg, float(t)), cfg)
            bump("dark", _dark_defect(system, cfg, float(t)), cfg)
            bump("ortho", _ortho_defect(system, cfg, float(t)), cfg)

        if i < n_prop:
            protocol = Protocol.F_STA if i % 2 == 0 else Protocol.F_STIRAP
            model = make(cfg, protocol)
            closed = propagate_state(model.matrix, model.initial_state(), grid)
            bump("norm", closed.norm_drift, cfg)
            decay = DecayConfig(gamma=float(rng.uniform(0.0, 3.0)))
            opened = propagate_density(model.matrix, model.initial_density(), decay, grid)
            bump("trace", opened.trace_drift, cfg)
            bump("herm", opened.hermiticity_drift, cfg)

    suites = [
        ("counterdiabatic finite-difference oracle", "cd", CD_ACCURACY),
        ("dark-state annihilation", "dark", DARK_ACCURACY),
        ("transformation orthonormality", "ortho", ORTHONORMALITY_ACCURACY),
    ]
    if n_prop > 0:
        suites += [
            ("norm conservation (closed system)", "norm", NORM_DRIFT_BUDGET),
            ("trace conservation (open system)", "trace", TRACE_DRIFT_BUDGET),
            ("Hermiticity conservation (open system)", "herm", HERMITICITY_DRIFT_BUDGET),
        ]
    results = tuple(
        SuiteResult(
            name=name,
            worst=worst[key],
            tolerance=tol,
            passed=worst[key] <= tol,
            detail=where[key],
        )
        for name, key, tol in suites
    )
    return VerificationReport(system=system.value, trials=trials, seed=seed, suites=results)
