import numpy as np
import pytest

from core.errors import ArgumentError, ModelError
from dynamics.frame import (
    PAPER_MASSES,
    PAPER_PERIODS,
    assemble_stiffness,
    build_frame,
    calibrate_stiffness,
    modal_damping,
    periods_for,
    rayleigh_coefficients,
)


def test_calibrated_periods(frame):
    np.testing.assert_allclose(frame.modal.periods, PAPER_PERIODS, rtol=1e-3)


def test_calibration_is_deterministic():
    assert calibrate_stiffness(PAPER_MASSES, PAPER_PERIODS) == calibrate_stiffness(PAPER_MASSES, PAPER_PERIODS)


def test_rayleigh_coefficients(frame):
    a0, a1 = frame.rayleigh_coefficients
    assert a0 == pytest.approx(0.4689, rel=1e-3)
    assert a1 == pytest.approx(7.839e-4, rel=1e-3)
    omega = frame.modal.frequencies
    assert modal_damping(a0, a1, omega[0]) == pytest.approx(0.025, rel=1e-9)
    assert modal_damping(a0, a1, omega[2]) == pytest.approx(0.025, rel=1e-9)
    # the middle mode is under-damped by the Rayleigh fit
    assert modal_damping(a0, a1, omega[1]) < 0.025


def test_modes_are_mass_orthonormal(frame):
    phi = frame.modal.shapes
    np.testing.assert_allclose(phi.T @ frame.mass_matrix @ phi, np.eye(3), atol=1e-10)
    assert np.all(phi[-1] > 0)


def test_stiffness_assembly():
    K = assemble_stiffness([3.0, 2.0, 1.0])
    np.testing.assert_array_equal(K, [[5.0, -2.0, 0.0], [-2.0, 3.0, -1.0], [0.0, -1.0, 1.0]])


def test_springs_share_yield_drift(frame):
    for spring in frame.springs:
        assert spring.uy == pytest.approx(0.005 * 118.0)


def test_calibration_rejects_unordered_periods():
    with pytest.raises(ArgumentError):
        calibrate_stiffness(PAPER_MASSES, (0.12, 0.188, 0.55))
    with pytest.raises(ArgumentError):
        calibrate_stiffness(PAPER_MASSES, (0.55, 0.188))


def test_mismatched_springs_rejected():
    with pytest.raises(ArgumentError):
        build_frame(PAPER_MASSES, [100.0, 100.0])


def test_rayleigh_rejects_bad_order():
    with pytest.raises(ArgumentError):
        rayleigh_coefficients(10.0, 5.0, 0.05)


def test_single_story_period():
    T = periods_for([1.0], [4 * np.pi ** 2])
    assert T[0] == pytest.approx(1.0)


def test_singular_stiffness_is_model_error():
    with pytest.raises(ModelError):
        periods_for([1.0, 1.0], [-1.0, 1.0])


def test_calibration_recovers_known_stiffnesses(frame):
    story_k = tuple(s.k0 for s in frame.springs)
    periods = periods_for(PAPER_MASSES, story_k)
    np.testing.assert_allclose(calibrate_stiffness(PAPER_MASSES, tuple(periods)), story_k, rtol=1e-3)


@pytest.mark.parametrize("m, k", [(1.0, 1.0), (2.0, 5.0)])
def test_uniform_three_story_eigenvalues(m, k):
    omega_sq = (2 * np.pi / periods_for([m] * 3, [k] * 3)) ** 2
    np.testing.assert_allclose(omega_sq, np.array([0.1981, 1.5550, 3.2470]) * k / m, rtol=5e-4)
