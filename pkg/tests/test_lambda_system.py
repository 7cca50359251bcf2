"""Three-level model: coupling matrix, dressed frame, correction term.

The finite-difference comparison against i dU/dt U^T is the ground truth
for the correction term; it was computed first and the analytic matrix has
to reproduce it at every sampled time.
"""

import math

import numpy as np
import pytest

from fracsta.core import Protocol
from fracsta.evolve import TimeGrid, propagate_state
from fracsta.lambda_system import (
    LambdaDriveConfig,
    LambdaModel,
    lambda_dark_state,
    lambda_h0,
    lambda_ha,
    lambda_hamiltonian,
    lambda_transformation,
)

BENCH = LambdaDriveConfig(omega0=2.0, tau=0.7, alpha=math.pi / 4, delta=0.2 * math.pi)

# U^T H0 U at t = tau for BENCH, frozen from the closed form
# (delta +- sqrt(delta^2 + 4 Omega^2)) / 2 with Omega^2 the total coupling power.
BRIGHT_UPPER = 2.544602266189168
BRIGHT_LOWER = -1.916283735471209


def test_coupling_matrix_frozen_values():
    h = lambda_h0(BENCH, 0.7).elements
    assert h[0, 1].real == pytest.approx(1.4142135623730951, abs=1e-15)
    assert h[1, 2].real == pytest.approx(1.6959304042151853, abs=1e-15)
    assert h[1, 1].real == pytest.approx(0.2 * math.pi, abs=1e-15)
    # the two ground levels never couple directly and carry no energy shift
    assert h[0, 2] == 0.0 and h[0, 0] == 0.0 and h[2, 2] == 0.0
    np.testing.assert_allclose(h, h.conj().T)


def test_transformation_diagonalizes_coupling():
    for t in (-2.0, -0.4, 0.0, 0.7, 2.5):
        h = lambda_h0(BENCH, t).elements
        u = lambda_transformation(BENCH, t)
        d = u.T @ h @ u
        off = d - np.diag(np.diag(d))
        assert np.abs(off).max() < 1e-12
        assert d[1, 1] == pytest.approx(0.0, abs=1e-12)


def test_dressed_energies_at_late_peak():
    u = lambda_transformation(BENCH, 0.7)
    d = np.real(np.diag(u.T @ lambda_h0(BENCH, 0.7).elements @ u))
    np.testing.assert_allclose(d, [BRIGHT_UPPER, 0.0, BRIGHT_LOWER], atol=1e-12)


def test_transformation_is_orthogonal():
    rng = np.random.default_rng(21)
    for _ in range(20):
        cfg = LambdaDriveConfig(
            omega0=rng.uniform(0.5, 10.0),
            tau=rng.uniform(0.2, 1.5),
            alpha=rng.uniform(0.05, math.pi / 2 - 0.05),
            delta=rng.uniform(0.0, 6.0),
        )
        t = rng.uniform(-4.0, 4.0)
        u = lambda_transformation(cfg, t)
        np.testing.assert_allclose(u @ u.T, np.eye(3), atol=1e-13)


def test_dark_state_is_annihilated():
    rng = np.random.default_rng(22)
    for _ in range(20):
        cfg = LambdaDriveConfig(
            omega0=rng.uniform(0.5, 10.0),
            tau=rng.uniform(0.2, 1.5),
            alpha=rng.uniform(0.05, math.pi / 2 - 0.05),
            delta=rng.uniform(0.0, 6.0),
        )
        t = rng.uniform(-4.0, 4.0)
        h = lambda_h0(cfg, t).elements
        dark = lambda_dark_state(cfg, t).amplitudes
        assert np.abs(h @ dark).max() < 1e-12 * max(1.0, np.abs(h).max())
        # no amplitude on the lossy intermediate level
        assert dark[1] == 0.0


def test_dark_state_reaches_target_superposition():
    dark = lambda_dark_state(BENCH, 5.0).amplitudes
    target = np.array([math.cos(BENCH.alpha), 0.0, -math.sin(BENCH.alpha)])
    np.testing.assert_allclose(dark.real, target, atol=1e-6)


def test_correction_matches_frame_derivative():
    # central difference of the dressed frame, step 1e-6 T
    rng = np.random.default_rng(23)
    h = 1e-6
    for _ in range(10):
        cfg = LambdaDriveConfig(
            omega0=rng.uniform(0.5, 8.0),
            tau=rng.uniform(0.2, 1.2),
            alpha=rng.uniform(0.1, math.pi / 2 - 0.1),
            delta=rng.uniform(0.0, 4.0),
        )
        for t in np.linspace(-3.0, 3.0, 7):
            du = (lambda_transformation(cfg, t + h) - lambda_transformation(cfg, t - h)) / (2 * h)
            fd = 1j * du @ lambda_transformation(cfg, t).T
            np.testing.assert_allclose(lambda_ha(cfg, t).elements, fd, atol=1e-5)


def test_correction_is_purely_imaginary_antisymmetric():
    m = lambda_ha(BENCH, 0.4).elements
    assert np.abs(m.real).max() == 0.0
    np.testing.assert_allclose(m, -m.T)


def test_model_protocol_dispatch():
    bare = LambdaModel(BENCH, Protocol.F_STIRAP)
    shortcut = LambdaModel(BENCH, Protocol.F_STA)
    t = 0.3
    np.testing.assert_allclose(bare.matrix(t), lambda_h0(BENCH, t).elements)
    np.testing.assert_allclose(
        shortcut.matrix(t),
        lambda_h0(BENCH, t).elements + lambda_ha(BENCH, t).elements,
    )
    assert lambda_hamiltonian(bare, t).time == t


def test_model_rejects_both():
    with pytest.raises(ValueError, match="BOTH"):
        LambdaModel(BENCH, Protocol.BOTH)


def test_initial_state_is_ground():
    np.testing.assert_allclose(
        LambdaModel(BENCH).initial_state().amplitudes, [1.0, 0.0, 0.0])


def test_shortcut_transfer_is_exact_for_random_draws():
    # the corrected drive must land on (cos^2 a, 0, sin^2 a) regardless of
    # strength, speed, or detuning, as long as the delay leaves the angle
    # settled at the window edge
    rng = np.random.default_rng(24)
    grid = TimeGrid()
    for _ in range(4):
        cfg = LambdaDriveConfig(
            omega0=rng.uniform(0.5, 8.0),
            tau=rng.uniform(0.45, 1.2),
            alpha=rng.uniform(0.1, math.pi / 2 - 0.1),
            delta=rng.uniform(0.0, 4.0),
        )
        model = LambdaModel(cfg, Protocol.F_STA)
        traj = propagate_state(model.matrix, model.initial_state(), grid)
        target = [math.cos(cfg.alpha) ** 2, 0.0, math.sin(cfg.alpha) ** 2]
        np.testing.assert_allclose(traj.final_populations, target, atol=2e-3)
        assert traj.max_intermediate_population < 1e-3
