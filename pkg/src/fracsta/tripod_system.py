"""Four-level scheme: three ground levels star-coupled to one excited level.

Level order is (ground 1, excited 2, ground 3, ground 4), with the pump on
the 1-2 leg and the two unload couplings on 2-3 and 2-4.  The two
zero-frequency dressed states

    D1 = (cos(theta), 0, -sin(theta)cos(eta), -sin(theta)sin(eta))
    D2 = (0, 0, sin(eta), -cos(eta))

span a degenerate dark subspace.  Only D1 connects to the initial level;
under the bare protocol the rotation of eta can leak population into D2,
while the shortcut protocol cancels that leak along with all bright-state
coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import HamiltonianSample, Protocol, StateVector
from .pulses import TripodDriveConfig, tripod_mixing, tripod_pulses

TRANSITION_INTEGRAL_ACCURACY = 1e-8


def _h0_matrix(cfg: TripodDriveConfig, t: float) -> np.ndarray:
    omega_p, omega_s, omega_q = tripod_pulses(cfg, t)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 1] = m[1, 0] = omega_p
    m[1, 2] = m[2, 1] = omega_s
    m[1, 3] = m[3, 1] = omega_q
    m[1, 1] = cfg.delta
    return m


def _ha_matrix(cfg: TripodDriveConfig, t: float) -> np.ndarray:
    ang = tripod_mixing(cfg, t)
    st, ct = math.sin(ang.theta), math.cos(ang.theta)
    se, ce = math.sin(ang.eta), math.cos(ang.eta)
    o12 = ang.dphi * st
    o13 = ang.dtheta * ce
    o14 = ang.dtheta * se
    o23 = -ang.dphi * ct * ce
    o24 = -ang.dphi * ct * se
    o34 = -ang.deta
    m = np.zeros((4, 4), dtype=complex)
    m[0, 1], m[1, 0] = 1j * o12, -1j * o12
    m[0, 2], m[2, 0] = 1j * o13, -1j * o13
    m[0, 3], m[3, 0] = 1j * o14, -1j * o14
    m[1, 2], m[2, 1] = 1j * o23, -1j * o23
    m[1, 3], m[3, 1] = 1j * o24, -1j * o24
    m[2, 3], m[3, 2] = 1j * o34, -1j * o34
    return m


def tripod_h0(cfg: TripodDriveConfig, t: float) -> HamiltonianSample:
    """Bare star-coupling Hamiltonian at time t."""
    return HamiltonianSample(_h0_matrix(cfg, t), time=t)


def tripod_dressed_states(
    cfg: TripodDriveConfig, t: float
) -> tuple[StateVector, StateVector, StateVector, StateVector]:
    """The two dark and two bright dressed states (D1, D2, B1, B2)."""
    u = tripod_transformation(cfg, t)
    return tuple(StateVector(u[:, j]) for j in range(4))


def tripod_transformation(cfg: TripodDriveConfig, t: float) -> np.ndarray:
    """Orthogonal matrix with columns (D1, D2, B1, B2) over the bare levels."""
    ang = tripod_mixing(cfg, t)
    st, ct = math.sin(ang.theta), math.cos(ang.theta)
    se, ce = math.sin(ang.eta), math.cos(ang.eta)
    sp, cp = math.sin(ang.phi), math.cos(ang.phi)
    return np.array(
        [
            [ct, 0.0, sp * st, cp * st],
            [0.0, 0.0, cp, -sp],
            [-st * ce, se, sp * ct * ce, cp * ct * ce],
            [-st * se, -ce, sp * ct * se, cp * ct * se],
        ]
    )


def tripod_ha(cfg: TripodDriveConfig, t: float) -> HamiltonianSample:
    """Counterdiabatic correction i * dU/dt * U^T for the four-level drive.

    Six imaginary antisymmetric couplings; the 3-4 entry -d(eta) is the one
    that freezes the dark-dark rotation.
    """
    return HamiltonianSample(_ha_matrix(cfg, t), time=t)


def _adaptive_simpson(f, a: float, b: float, tol: float) -> float:
    """Recursive Simpson quadrature with the usual 15x error estimate."""

    def recurse(x0, x2, f0, f1, f2, whole, tol, depth):
        x1 = 0.5 * (x0 + x2)
        lm, rm = 0.5 * (x0 + x1), 0.5 * (x1 + x2)
        flm, frm = f(lm), f(rm)
        left = (x1 - x0) / 6.0 * (f0 + 4.0 * flm + f1)
        right = (x2 - x1) / 6.0 * (f1 + 4.0 * frm + f2)
        err = left + right - whole
        if depth <= 0 or abs(err) <= 15.0 * tol:
            return left + right + err / 15.0
        return recurse(x0, x1, f0, flm, f1, left, 0.5 * tol, depth - 1) + recurse(
            x1, x2, f1, frm, f2, right, 0.5 * tol, depth - 1
        )

    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 48)


def dark_dark_transition_probability(
    cfg: TripodDriveConfig,
    t_start: float | None = None,
    t_end: float | None = None,
    tol: float = TRANSITION_INTEGRAL_ACCURACY,
) -> float:
    """Probability sin^2(integral of d(eta) * sin(theta)) of ending in D2.

    Diagnostic for the bare protocol only: it quantifies how much the
    rotating dark frame leaks between the two degenerate dark states when
    nothing compensates d(eta).  Under the shortcut protocol the leak is
    cancelled exactly, so this number does not apply there.  Equal unload
    weights (chi = pi/4) make d(eta) vanish identically.
    """
    a = -5.0 * cfg.T if t_start is None else t_start
    b = 5.0 * cfg.T if t_end is None else t_end

    def integrand(t: float) -> float:
        ang = tripod_mixing(cfg, t)
        return ang.deta * math.sin(ang.theta)

    angle = _adaptive_simpson(integrand, a, b, tol)
    return math.sin(angle) ** 2


@dataclass(frozen=True)
class TripodModel:
    """Drive configuration plus protocol choice for the four-level scheme."""

    cfg: TripodDriveConfig
    protocol: Protocol = Protocol.F_STIRAP

    def __post_init__(self) -> None:
        if self.protocol is Protocol.BOTH:
            raise ValueError("a model runs one protocol; expand BOTH at the sweep level")

    @property
    def dim(self) -> int:
        return 4

    def matrix(self, t: float) -> np.ndarray:
        """Raw Hamiltonian matrix, the fast path for the integrator."""
        m = _h0_matrix(self.cfg, t)
        if self.protocol is Protocol.F_STA:
            m += _ha_matrix(self.cfg, t)
        return m

    def hamiltonian(self, t: float) -> HamiltonianSample:
        return HamiltonianSample(self.matrix(t), time=t)

    def initial_state(self) -> StateVector:
        return StateVector([1.0, 0.0, 0.0, 0.0])

    def initial_density(self):
        return self.initial_state().density_matrix()


def tripod_hamiltonian(model: TripodModel, t: float) -> HamiltonianSample:
    """Protocol-resolved Hamiltonian for the four-level model."""
    return model.hamiltonian(t)
