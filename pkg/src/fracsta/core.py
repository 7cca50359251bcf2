"""Dense state containers and small-matrix helpers.

Everything in this package works in natural units with hbar = 1, so a
Hamiltonian sample is just a Hermitian complex matrix and frequencies are
inverse times.  The containers below are deliberately thin wrappers around
numpy arrays: they validate the physics invariants once, at construction,
and then hand out read-only views.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# Construction-time tolerances.  Propagated objects are noisier than hand
# built ones, so the constructors accept an explicit override.
NORM_ACCURACY = 1e-9
TRACE_ACCURACY = 1e-9
HERMITICITY_ACCURACY = 1e-12

SUPPORTED_DIMS = (3, 4)


class Protocol(Enum):
    """Which Hamiltonian a model hands to the propagator.

    F_STIRAP drives with the bare coupling Hamiltonian only; F_STA adds the
    counterdiabatic correction on top.  BOTH is accepted by the sweep layer,
    which expands it into the two single-protocol runs.
    """

    F_STIRAP = "f_stirap"
    F_STA = "f_sta"
    BOTH = "both"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StateVector:
    """Pure state of a 3- or 4-level system, normalized at construction."""

    amplitudes: np.ndarray
    norm_tol: float = field(default=NORM_ACCURACY, repr=False, compare=False)

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size not in SUPPORTED_DIMS:
            raise ValueError(f"state must have 3 or 4 amplitudes, got {amps.size}")
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("state amplitudes must be finite")
        defect = abs(float(np.sum(np.abs(amps) ** 2)) - 1.0)
        if defect > self.norm_tol:
            raise ValueError(f"state norm deviates from 1 by {defect:.3e}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density_matrix(self) -> "DensityMatrix":
        """Projector |psi><psi| as a DensityMatrix."""
        outer = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(outer, trace_tol=max(TRACE_ACCURACY, 2 * self.norm_tol))


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state: Hermitian, unit trace, physical diagonal."""

    elements: np.ndarray
    herm_tol: float = field(default=HERMITICITY_ACCURACY, repr=False, compare=False)
    trace_tol: float = field(default=TRACE_ACCURACY, repr=False, compare=False)

    def __post_init__(self) -> None:
        m = np.array(self.elements, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in SUPPORTED_DIMS:
            raise ValueError(f"density matrix must be 3x3 or 4x4, got {m.shape}")
        if not np.all(np.isfinite(m.view(float))):
            raise ValueError("density matrix entries must be finite")
        defect = hermiticity_defect(m)
        if defect > self.herm_tol:
            raise ValueError(f"density matrix Hermiticity defect {defect:.3e}")
        tr = m.trace()
        if abs(tr - 1.0) > self.trace_tol:
            raise ValueError(f"density matrix trace {tr:.12g} is not 1")
        diag = np.real(np.diag(m))
        if diag.min() < -self.trace_tol or diag.max() > 1.0 + self.trace_tol:
            raise ValueError("density matrix diagonal outside [0, 1]")
        object.__setattr__(self, "elements", _frozen(m))

    @property
    def dim(self) -> int:
        return self.elements.shape[0]


@dataclass(frozen=True)
class HamiltonianSample:
    """One Hermitian Hamiltonian matrix tagged with the time it was taken."""

    elements: np.ndarray
    time: float

    def __post_init__(self) -> None:
        m = np.array(self.elements, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in SUPPORTED_DIMS:
            raise ValueError(f"Hamiltonian must be 3x3 or 4x4, got {m.shape}")
        defect = hermiticity_defect(m)
        scale = max(1.0, float(np.abs(m).max()))
        if defect > HERMITICITY_ACCURACY * scale:
            raise ValueError(f"Hamiltonian Hermiticity defect {defect:.3e}")
        object.__setattr__(self, "elements", _frozen(m))

    @property
    def dim(self) -> int:
        return self.elements.shape[0]


def _as_matrix(obj) -> np.ndarray:
    if isinstance(obj, (HamiltonianSample, DensityMatrix)):
        return obj.elements
    return np.asarray(obj, dtype=complex)


def commutator(a, b) -> np.ndarray:
    """[A, B] = AB - BA for equally sized square matrices."""
    ma, mb = _as_matrix(a), _as_matrix(b)
    if ma.shape != mb.shape or ma.ndim != 2 or ma.shape[0] != ma.shape[1]:
        raise ValueError(f"incompatible shapes {ma.shape} and {mb.shape}")
    return ma @ mb - mb @ ma


def populations(state: StateVector | DensityMatrix) -> np.ndarray:
    """Level occupations: |c_n|^2 for a pure state, Re(rho_nn) for a mixed one."""
    if isinstance(state, StateVector):
        return np.abs(state.amplitudes) ** 2
    if isinstance(state, DensityMatrix):
        return np.real(np.diag(state.elements)).copy()
    raise TypeError(f"expected StateVector or DensityMatrix, got {type(state).__name__}")


def hermiticity_defect(matrix) -> float:
    """Largest absolute entry of M - M^dagger; zero for exactly Hermitian M."""
    m = _as_matrix(matrix)
    return float(np.abs(m - m.conj().T).max())
