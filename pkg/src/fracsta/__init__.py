"""Fractional Raman passage in three- and four-level systems.

Simulates partial population transfer driven by delayed Gaussian pulse
pairs whose ratio is pinned at late times, both in the bare adiabatic
protocol and with the counterdiabatic correction that makes the transfer
exact at any drive strength.  Closed-system dynamics propagate state
vectors; spontaneous emission from the excited level propagates density
matrices through a Lindblad dissipator.  Everything is expressed in units
of the pulse width T (hbar = 1).

The command-line entry point lives in fracsta.cli; report writing and
figure rendering in fracsta.reports (imported lazily, they pull in
matplotlib).
"""

from importlib import metadata as _metadata

try:
    __version__ = _metadata.version("fracsta")
except _metadata.PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0"

from .core import (
    DensityMatrix,
    HamiltonianSample,
    Protocol,
    StateVector,
    commutator,
    hermiticity_defect,
    populations,
)
from .evolve import (
    DecayConfig,
    IntegrationAccuracyError,
    PositivityWarning,
    TimeGrid,
    Trajectory,
    propagate_density,
    propagate_state,
)
from .figures import (
    CheckOutcome,
    FigureRegistryEntry,
    UnknownFigureError,
    evaluate_entry,
    figure_ids,
    registry_lookup,
)
from .lambda_system import (
    LambdaModel,
    lambda_dark_state,
    lambda_h0,
    lambda_ha,
    lambda_hamiltonian,
    lambda_transformation,
)
from .pulses import (
    HALF_RANGE,
    LambdaDriveConfig,
    MixingAngles,
    TripodDriveConfig,
    lambda_mixing,
    lambda_pulse_derivatives,
    lambda_pulses,
    tripod_mixing,
    tripod_pulse_derivatives,
    tripod_pulses,
)
from .sweeps import (
    SweepAxis,
    SweepResult,
    SweepSpec,
    System,
    reproduce_figure,
    run_sweep,
    theory_curve,
)
from .tripod_system import (
    TripodModel,
    dark_dark_transition_probability,
    tripod_dressed_states,
    tripod_h0,
    tripod_ha,
    tripod_hamiltonian,
    tripod_transformation,
)
from .verify import SuiteResult, VerificationReport, verify_system

__all__ = [
    "__version__",
    "CheckOutcome",
    "DecayConfig",
    "DensityMatrix",
    "FigureRegistryEntry",
    "HALF_RANGE",
    "HamiltonianSample",
    "IntegrationAccuracyError",
    "LambdaDriveConfig",
    "LambdaModel",
    "MixingAngles",
    "PositivityWarning",
    "Protocol",
    "StateVector",
    "SuiteResult",
    "SweepAxis",
    "SweepResult",
    "SweepSpec",
    "System",
    "TimeGrid",
    "Trajectory",
    "TripodDriveConfig",
    "TripodModel",
    "UnknownFigureError",
    "VerificationReport",
    "commutator",
    "dark_dark_transition_probability",
    "evaluate_entry",
    "figure_ids",
    "hermiticity_defect",
    "lambda_dark_state",
    "lambda_h0",
    "lambda_ha",
    "lambda_hamiltonian",
    "lambda_mixing",
    "lambda_pulse_derivatives",
    "lambda_pulses",
    "lambda_transformation",
    "populations",
    "propagate_density",
    "propagate_state",
    "registry_lookup",
    "reproduce_figure",
    "run_sweep",
    "theory_curve",
    "tripod_dressed_states",
    "tripod_h0",
    "tripod_ha",
    "tripod_hamiltonian",
    "tripod_mixing",
    "tripod_pulse_derivatives",
    "tripod_pulses",
    "tripod_transformation",
    "verify_system",
]
