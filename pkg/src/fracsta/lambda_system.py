"""Three-level ladder-free scheme: two ground levels coupled through one
excited level.

Level order is (ground 1, excited 2, ground 3).  The bare Hamiltonian in
the rotating frame, in units of hbar = 1,

    H0 = [[0,    pump,  0     ],
          [pump, delta, stokes],
          [0,    stokes, 0    ]]

has a zero-frequency dark eigenstate (cos(theta), 0, -sin(theta)) that
carries the population.  The shortcut protocol adds the counterdiabatic
term i * dU/dt * U^T built from the same mixing angles, which cancels all
nonadiabatic coupling out of the dark state, so the fractional transfer
becomes exact at any drive strength.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import HamiltonianSample, Protocol, StateVector
from .pulses import LambdaDriveConfig, lambda_mixing, lambda_pulses


def _h0_matrix(cfg: LambdaDriveConfig, t: float) -> np.ndarray:
    omega_p, omega_s = lambda_pulses(cfg, t)
    m = np.zeros((3, 3), dtype=complex)
    m[0, 1] = m[1, 0] = omega_p
    m[1, 2] = m[2, 1] = omega_s
    m[1, 1] = cfg.delta
    return m


def _ha_matrix(cfg: LambdaDriveConfig, t: float) -> np.ndarray:
    ang = lambda_mixing(cfg, t)
    o12 = ang.dphi * math.sin(ang.theta)
    o13 = ang.dtheta
    o23 = -ang.dphi * math.cos(ang.theta)
    m = np.zeros((3, 3), dtype=complex)
    m[0, 1], m[1, 0] = 1j * o12, -1j * o12
    m[0, 2], m[2, 0] = 1j * o13, -1j * o13
    m[1, 2], m[2, 1] = 1j * o23, -1j * o23
    return m


def lambda_h0(cfg: LambdaDriveConfig, t: float) -> HamiltonianSample:
    """Bare coupling Hamiltonian at time t."""
    return HamiltonianSample(_h0_matrix(cfg, t), time=t)


def lambda_dark_state(cfg: LambdaDriveConfig, t: float) -> StateVector:
    """Zero-eigenvalue eigenstate (cos(theta), 0, -sin(theta))."""
    ang = lambda_mixing(cfg, t)
    return StateVector([math.cos(ang.theta), 0.0, -math.sin(ang.theta)])


def lambda_transformation(cfg: LambdaDriveConfig, t: float) -> np.ndarray:
    """Orthogonal matrix whose columns are the dressed states.

    Column order is (upper bright, dark, lower bright); rows are the bare
    levels.  U @ U.T is the identity for every t.
    """
    ang = lambda_mixing(cfg, t)
    st, ct = math.sin(ang.theta), math.cos(ang.theta)
    sp, cp = math.sin(ang.phi), math.cos(ang.phi)
    return np.array(
        [
            [sp * st, ct, cp * st],
            [cp, 0.0, -sp],
            [sp * ct, -st, cp * ct],
        ]
    )


def lambda_ha(cfg: LambdaDriveConfig, t: float) -> HamiltonianSample:
    """Counterdiabatic correction i * dU/dt * U^T.

    Purely imaginary antisymmetric couplings: d(phi)*sin(theta) between
    levels 1-2, d(theta) between 1-3, -d(phi)*cos(theta) between 2-3.
    """
    return HamiltonianSample(_ha_matrix(cfg, t), time=t)


@dataclass(frozen=True)
class LambdaModel:
    """Drive configuration plus the protocol choice that fixes which
    Hamiltonian the propagator sees."""

    cfg: LambdaDriveConfig
    protocol: Protocol = Protocol.F_STIRAP

    def __post_init__(self) -> None:
        if self.protocol is Protocol.BOTH:
            raise ValueError("a model runs one protocol; expand BOTH at the sweep level")

    @property
    def dim(self) -> int:
        return 3

    def matrix(self, t: float) -> np.ndarray:
        """Raw Hamiltonian matrix, the fast path for the integrator."""
        m = _h0_matrix(self.cfg, t)
        if self.protocol is Protocol.F_STA:
            m += _ha_matrix(self.cfg, t)
        return m

    def hamiltonian(self, t: float) -> HamiltonianSample:
        return HamiltonianSample(self.matrix(t), time=t)

    def initial_state(self) -> StateVector:
        return StateVector([1.0, 0.0, 0.0])

    def initial_density(self):
        return self.initial_state().density_matrix()


def lambda_hamiltonian(model: LambdaModel, t: float) -> HamiltonianSample:
    """Protocol-resolved Hamiltonian: bare couplings, plus the
    counterdiabatic term when the model runs the shortcut protocol."""
    return model.hamiltonian(t)
