import numpy as np
import pytest

from centrolab import fourier
from centrolab.profile_ode import (
    ConicRigidityError,
    DomainBoundaryError,
    PhasePoint,
    critical_point,
    exponent_data,
    first_integral_constant,
    hamiltonian,
    hamiltonian_vector_field,
    integrate_flow,
    residual_first_order,
    residual_third_order,
)


# ---------------------------------------------------------------- exponents

def test_exponent_data_values():
    assert exponent_data(2).b == pytest.approx(1.0)
    assert exponent_data(1 / 3).b == pytest.approx(-1.5)


def test_exponent_data_half_is_flagged():
    data = exponent_data(0.5)
    assert data.b == pytest.approx(-2.0)
    assert data.conic_rigid


def test_exponent_data_degenerate_and_invalid():
    with pytest.raises(ConicRigidityError):
        exponent_data(1)
    with pytest.raises(ValueError):
        exponent_data(0)


# ---------------------------------------------------------------- Hamiltonian

def test_hamiltonian_direct_substitution():
    assert hamiltonian(PhasePoint(1.0, 0.0), b=1.0, c=3.0) == pytest.approx(-2.0)
    assert hamiltonian(PhasePoint(1.0, 0.0), b=1.0, c=0.0) == pytest.approx(1.0)


def test_vector_field_values():
    assert hamiltonian_vector_field(PhasePoint(1.0, 0.0), b=1.0, c=3.0) == pytest.approx((0.0, 0.0))
    assert hamiltonian_vector_field(PhasePoint(1.0, 2.0), b=1.0, c=0.0) == pytest.approx((2.0, -3.0))


def test_phase_point_requires_positive_profile():
    with pytest.raises(ValueError):
        PhasePoint(0.0, 1.0)
    with pytest.raises(ValueError):
        hamiltonian(PhasePoint, b=1.0, c=0.0) if False else PhasePoint(-1.0, 0.0)


def test_critical_points():
    cp = critical_point(b=1.0, c=3.0)
    assert cp.point.Q == pytest.approx(1.0)
    assert cp.is_minimum
    cp = critical_point(b=-1.5, c=-4.0)
    assert cp.point.Q == pytest.approx(0.25)
    assert cp.is_minimum
    assert critical_point(b=1.0, c=-1.0) is None


# ---------------------------------------------------------------- flow

def test_flow_constant_at_critical_point():
    traj = integrate_flow(PhasePoint(1.0, 0.0), b=1.0, c=3.0, duration=10.0)
    assert np.max(np.abs(traj.Q - 1.0)) < 1e-10
    assert np.max(np.abs(traj.P)) < 1e-10


def test_flow_energy_conservation_50_periods():
    # 50 linearized periods of the well at (1, 0) for b=1, c=3
    period = 2 * np.pi / np.sqrt(6.0)
    traj = integrate_flow(PhasePoint(1.1, 0.0), b=1.0, c=3.0, duration=50 * period)
    assert traj.energy_drift < 1e-10


@pytest.mark.parametrize("b", [1.0, 2.0, -0.5, -1.5])
def test_flow_energy_conservation_all_cases(b):
    # pick c per the sign of b so a bounded well exists, start near the bottom
    c = 10.0 if b > 0 else (0.1 if b > -1 else -10.0)
    cp = critical_point(b, c)
    assert cp is not None and cp.is_minimum
    start = PhasePoint(cp.point.Q * 1.1, 0.0)
    traj = integrate_flow(start, b=b, c=c, duration=100.0)
    assert traj.energy_drift < 1e-9


def test_flow_refuses_a_half():
    with pytest.raises(ConicRigidityError):
        integrate_flow(PhasePoint(1.0, 0.0), b=-2.0, c=1.0, duration=1.0)


def test_flow_domain_guard():
    # strong downhill pull: Q falls to the floor in finite time
    with pytest.raises(DomainBoundaryError) as err:
        integrate_flow(PhasePoint(0.5, -1.0), b=1.0, c=-5.0, duration=20.0)
    assert err.value.time is not None


def test_first_integral_residual_along_flow():
    b, c = 1.0, 3.0
    start = PhasePoint(1.3, 0.0)
    d = first_integral_constant(start, b, c)
    traj = integrate_flow(start, b=b, c=c, duration=30.0)
    assert residual_first_order(traj.Q, traj.P, b, c, d) < 1e-8


def test_vector_field_matches_spectral_second_derivative():
    # one closed period of a genuine orbit, then compare F'' computed
    # spectrally against the field evaluated on the samples
    from centrolab.orbits import orbit_from_energy

    orbit = orbit_from_energy(exponent_data(2.0), c=3.0, energy=-1.2)
    d2 = fourier.spectral_derivative(orbit.F, orbit.period, 2, fourier.NOISE_FLOOR)
    field = -2.0 * 3.0 / 2.0 * orbit.F ** 2.0 + 3.0
    assert np.max(np.abs(d2 - field)) < 1e-8


# ---------------------------------------------------------------- residual

def test_residual_constant_profile():
    f = np.full(513, 2.0)
    assert residual_third_order(f, 2 * np.pi, a=2.0) == pytest.approx(0.0, abs=1e-12)


def test_residual_detects_noncritical_profile():
    t = fourier.closed_grid(2 * np.pi, 2048)
    f = 1.0 + 0.1 * np.sin(t)
    assert residual_third_order(f, 2 * np.pi, a=2.0) > 0.1


def test_residual_small_on_flow_samples():
    from centrolab.orbits import orbit_from_energy

    orbit = orbit_from_energy(exponent_data(2.0), c=3.0, energy=-1.0)
    assert residual_third_order(orbit.F, orbit.period, a=2.0) < 1e-6
