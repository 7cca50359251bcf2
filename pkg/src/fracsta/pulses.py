"""Gaussian pulse pairs and the mixing angles they induce.

Both level schemes are driven by the same two-Gaussian template: an early
pulse centred at -tau and a late pulse centred at +tau, each of width T.
The late pulse is split among the target couplings with fixed weights set
by the fraction angles (alpha for the three-level scheme, beta and chi for
the four-level one), so the coupling ratios approach a constant as the
pulses die out.  That constant ratio is what freezes the dark state into a
superposition instead of completing a full transfer.

Angles are computed from ratios of the two Gaussians rather than from the
pulse values themselves.  The ratio g_late/g_early = exp(4 t tau / T^2) is
evaluated on whichever side of t = 0 keeps the exponent non-positive, so
the mixing angles and their rates stay exact and finite arbitrarily far
into the tails where the raw pulses underflow.

Units: times carry the same unit as T, frequencies its inverse, hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

HALF_RANGE = math.pi / 2  # fraction angles beyond this are accepted but flagged


def _check_drive(omega0: float, tau: float, T: float, delta: float) -> None:
    if not (omega0 > 0 and math.isfinite(omega0)):
        raise ValueError(f"omega0 must be positive and finite, got {omega0}")
    if not (tau >= 0 and math.isfinite(tau)):
        raise ValueError(f"tau must be non-negative, got {tau}")
    if not (T > 0 and math.isfinite(T)):
        raise ValueError(f"T must be positive, got {T}")
    if not math.isfinite(delta):
        raise ValueError(f"delta must be finite, got {delta}")


def _check_fraction(name: str, value: float) -> None:
    if not (0.0 <= value <= math.pi):
        raise ValueError(f"{name} must lie in [0, pi], got {value}")


@dataclass(frozen=True)
class LambdaDriveConfig:
    """Drive for the three-level scheme.

    omega0 is the peak Rabi frequency, tau the half delay between the two
    Gaussians, T their common width and reference time unit, alpha the
    fraction angle fixing the final coupling ratio, delta the constant
    one-photon detuning of the intermediate level.
    """

    omega0: float
    tau: float
    T: float = 1.0
    alpha: float = math.pi / 4
    delta: float = 0.0

    def __post_init__(self) -> None:
        _check_drive(self.omega0, self.tau, self.T, self.delta)
        _check_fraction("alpha", self.alpha)

    @property
    def dim(self) -> int:
        return 3

    @property
    def in_validated_range(self) -> bool:
        """Fraction angles above pi/2 reach the regime where the principal
        atan2 branch no longer tracks the nominal target angle."""
        return self.alpha <= HALF_RANGE


@dataclass(frozen=True)
class TripodDriveConfig:
    """Drive for the four-level scheme: beta splits population off the
    initial level, chi divides it between the two target levels."""

    omega0: float
    tau: float
    T: float = 1.0
    beta: float = math.pi / 4
    chi: float = math.pi / 4
    delta: float = 0.0

    def __post_init__(self) -> None:
        _check_drive(self.omega0, self.tau, self.T, self.delta)
        _check_fraction("beta", self.beta)
        _check_fraction("chi", self.chi)

    @property
    def dim(self) -> int:
        return 4

    @property
    def in_validated_range(self) -> bool:
        return self.beta <= HALF_RANGE and self.chi <= HALF_RANGE


@dataclass(frozen=True)
class MixingAngles:
    """Instantaneous dressed-basis angles and their time derivatives.

    theta rotates within the dark manifold, phi mixes the bright pair with
    the detuned intermediate level, eta (four-level only, zero otherwise)
    distributes the dark state over the two target couplings.  Rates are in
    inverse time units.
    """

    theta: float
    phi: float
    eta: float = 0.0
    dtheta: float = 0.0
    dphi: float = 0.0
    deta: float = 0.0


def _gaussians(t: float, tau: float, T: float) -> tuple[float, float]:
    """Early and late pulse envelopes (g_early peaks at -tau, g_late at +tau)."""
    g_early = math.exp(-((t + tau) / T) ** 2)
    g_late = math.exp(-((t - tau) / T) ** 2)
    return g_early, g_late


def lambda_pulses(cfg: LambdaDriveConfig, t: float) -> tuple[float, float]:
    """Pump and Stokes Rabi frequencies at time t.

    Pump rides the late Gaussian scaled by sin(alpha); Stokes is the early
    Gaussian plus a cos(alpha) share of the late one, so the late-time
    ratio pump/Stokes tends to tan(alpha).
    """
    g_early, g_late = _gaussians(t, cfg.tau, cfg.T)
    omega_p = cfg.omega0 * math.sin(cfg.alpha) * g_late
    omega_s = cfg.omega0 * (g_early + math.cos(cfg.alpha) * g_late)
    return omega_p, omega_s


def lambda_pulse_derivatives(cfg: LambdaDriveConfig, t: float) -> tuple[float, float]:
    """Analytic d/dt of lambda_pulses (exact Gaussian slopes)."""
    g_early, g_late = _gaussians(t, cfg.tau, cfg.T)
    dg_early = -2.0 * (t + cfg.tau) / cfg.T**2 * g_early
    dg_late = -2.0 * (t - cfg.tau) / cfg.T**2 * g_late
    return (
        cfg.omega0 * math.sin(cfg.alpha) * dg_late,
        cfg.omega0 * (dg_early + math.cos(cfg.alpha) * dg_late),
    )


def tripod_pulses(cfg: TripodDriveConfig, t: float) -> tuple[float, float, float]:
    """Pump and the two unload Rabi frequencies at time t."""
    g_early, g_late = _gaussians(t, cfg.tau, cfg.T)
    cb = math.cos(cfg.beta)
    omega_p = cfg.omega0 * math.sin(cfg.beta) * g_late
    omega_s = cfg.omega0 * (g_early + cb * math.cos(cfg.chi) * g_late)
    omega_q = cfg.omega0 * (g_early + cb * math.sin(cfg.chi) * g_late)
    return omega_p, omega_s, omega_q


def tripod_pulse_derivatives(cfg: TripodDriveConfig, t: float) -> tuple[float, float, float]:
    """Analytic d/dt of tripod_pulses."""
    g_early, g_late = _gaussians(t, cfg.tau, cfg.T)
    dg_early = -2.0 * (t + cfg.tau) / cfg.T**2 * g_early
    dg_late = -2.0 * (t - cfg.tau) / cfg.T**2 * g_late
    cb = math.cos(cfg.beta)
    return (
        cfg.omega0 * math.sin(cfg.beta) * dg_late,
        cfg.omega0 * (dg_early + cb * math.cos(cfg.chi) * dg_late),
        cfg.omega0 * (dg_early + cb * math.sin(cfg.chi) * dg_late),
    )


def _phi_pair(delta: float, omega_sq: float, power_rate: float) -> tuple[float, float]:
    """Bright-detuning angle phi = atan2(2*Omega, delta) / 2 and its rate.

    power_rate is d(Omega^2)/dt; the rate follows from differentiating the
    half-angle form, giving delta * d(Omega)/dt / (delta^2 + 4 Omega^2).
    Degenerate drive (delta = 0) pins phi at pi/4 with zero rate.
    """
    if delta == 0.0:
        return math.pi / 4, 0.0
    omega = math.sqrt(omega_sq)
    phi = 0.5 * math.atan2(2.0 * omega, delta)
    if omega == 0.0:
        return phi, 0.0
    dphi = delta * (0.5 * power_rate / omega) / (delta**2 + 4.0 * omega_sq)
    return phi, dphi


def lambda_mixing(cfg: LambdaDriveConfig, t: float) -> MixingAngles:
    """Dark/bright mixing angles for the three-level drive.

    tan(theta) = pump/Stokes reduces to sin(alpha) / (g_ratio + cos(alpha))
    with g_ratio = g_early/g_late, so theta runs from 0 at early times to
    alpha once the early pulse is gone.  The exponent of g_ratio is kept
    non-positive by evaluating the branch matching the sign of t.
    """
    s, c = math.sin(cfg.alpha), math.cos(cfg.alpha)
    k = 4.0 * cfg.tau / cfg.T**2
    x = k * t
    if x <= 0.0:
        r = math.exp(x)  # g_late / g_early, <= 1 before the crossing
        theta = math.atan2(s * r, 1.0 + c * r)
        dtheta = s * k * r / ((1.0 + c * r) ** 2 + (s * r) ** 2)
    else:
        q = math.exp(-x)  # g_early / g_late
        theta = math.atan2(s, q + c)
        dtheta = s * k * q / ((q + c) ** 2 + s**2)

    omega_p, omega_s = lambda_pulses(cfg, t)
    domega_p, domega_s = lambda_pulse_derivatives(cfg, t)
    omega_sq = omega_p**2 + omega_s**2
    phi, dphi = _phi_pair(cfg.delta, omega_sq, 2.0 * (omega_p * domega_p + omega_s * domega_s))
    return MixingAngles(theta=theta, phi=phi, dtheta=dtheta, dphi=dphi)


def tripod_mixing(cfg: TripodDriveConfig, t: float) -> MixingAngles:
    """Dressed-basis angles for the four-level drive.

    With the shared-Gaussian structure the three couplings are proportional
    to (sin(beta)*g, 1 + a*g, 1 + b*g) where g is the late/early Gaussian
    ratio and a = cos(beta)cos(chi), b = cos(beta)sin(chi).  All angles and
    rates below are algebraic in that ratio, evaluated on the side of t = 0
    where the exponent is non-positive.
    """
    s = math.sin(cfg.beta)
    a = math.cos(cfg.beta) * math.cos(cfg.chi)
    b = math.cos(cfg.beta) * math.sin(cfg.chi)
    k = 4.0 * cfg.tau / cfg.T**2
    x = k * t
    if x <= 0.0:
        r = math.exp(x)
        wp, ws, wq = s * r, 1.0 + a * r, 1.0 + b * r
        scale = r
        dtheta_num = s * k * r * (2.0 + (a + b) * r)
    else:
        q = math.exp(-x)
        wp, ws, wq = s, q + a, q + b
        scale = q
        dtheta_num = s * k * q * (2.0 * q + (a + b))
    unload = math.hypot(ws, wq)
    theta = math.atan2(wp, unload)
    eta = math.atan2(wq, ws)
    unload_sq = ws**2 + wq**2
    deta = (b - a) * k * scale / unload_sq
    dtheta = dtheta_num / ((wp**2 + unload_sq) * unload) if unload > 0.0 else 0.0

    omega_p, omega_s, omega_q = tripod_pulses(cfg, t)
    domega_p, domega_s, domega_q = tripod_pulse_derivatives(cfg, t)
    omega_sq = omega_p**2 + omega_s**2 + omega_q**2
    power_rate = 2.0 * (omega_p * domega_p + omega_s * domega_s + omega_q * domega_q)
    phi, dphi = _phi_pair(cfg.delta, omega_sq, power_rate)
    return MixingAngles(theta=theta, phi=phi, eta=eta, dtheta=dtheta, dphi=dphi, deta=deta)
