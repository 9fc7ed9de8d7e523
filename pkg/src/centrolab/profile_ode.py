"""Reduced critical-curve ODE for the curvature profile.

Writing F = p**(a-1) with derived exponent b = 1/(a-1), critical curves of
the curvature-power functional satisfy

    F''' = -2 (2 + b) F**b F',

which integrates once to  F'' = -2(b+2)/(b+1) F**(b+1) + c  and is the
Hamiltonian flow of  H(Q, P) = P^2/2 + 2/(b+1) Q^(b+2) - c Q  with (Q, P) =
(F, F').  The quadratic first integral is (F')^2 = -4/(b+1) F**(b+2) + 2cF + d
with d twice the conserved energy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from . import fourier

__all__ = [
    "ConicRigidityError",
    "DomainBoundaryError",
    "ExponentData",
    "PhasePoint",
    "FirstIntegrals",
    "CriticalPoint",
    "FlowTrajectory",
    "exponent_data",
    "hamiltonian",
    "hamiltonian_vector_field",
    "potential",
    "critical_point",
    "integrate_flow",
    "residual_third_order",
    "first_integral_constant",
    "residual_first_order",
]

Q_FLOOR = 1e-12          # positivity guard for the profile value
DEFAULT_RTOL = 1e-12
DEFAULT_ATOL = 1e-14
DEFAULT_METHOD = "DOP853"


class ConicRigidityError(ValueError):
    """Raised when the requested exponent forces constant curvature."""


class DomainBoundaryError(RuntimeError):
    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


@dataclass(frozen=True)
class ExponentData:
    """Functional exponent together with the derived ODE exponent b = 1/(a-1)."""

    a: float
    b: float
    conic_rigid: bool = False

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("exponent a = 0 is invalid")
        if self.a != 1 and abs(self.b * (self.a - 1.0) - 1.0) > 1e-12:
            raise ValueError("inconsistent exponent pair: b*(a-1) must be 1")


def exponent_data(a) -> ExponentData:
    """Derived exponents for a functional exponent a.

    a = 1 has no reduced ODE (extremals are conics outright) and raises
    ConicRigidityError; a = 1/2 is returned flagged: the third-order equation
    collapses to F''' = 0, so only constants are admissible.
    """
    a_val = float(a)
    if a_val == 0.0:
        raise ValueError("exponent a = 0 is invalid")
    if a_val == 1.0:
        raise ConicRigidityError("degenerate: extremals are conics, p constant (a = 1)")
    if isinstance(a, Fraction):
        b_val = float(1 / (a - 1))
    else:
        b_val = 1.0 / (a_val - 1.0)
    return ExponentData(a=a_val, b=b_val, conic_rigid=(a_val == 0.5))


@dataclass(frozen=True)
class PhasePoint:
    Q: float
    P: float

    def __post_init__(self):
        if not (self.Q > 0.0):
            raise ValueError(f"profile value Q must be positive, got {self.Q}")


@dataclass(frozen=True)
class FirstIntegrals:
    """Constants of the once- and twice-integrated equation (d = 2 * energy)."""

    c: float
    d: float


@dataclass(frozen=True)
class CriticalPoint:
    point: PhasePoint
    is_minimum: bool


def _as_point(point) -> PhasePoint:
    if isinstance(point, PhasePoint):
        return point
    q, p = point
    return PhasePoint(float(q), float(p))


def potential(Q, b: float, c: float):
    """Potential part of the Hamiltonian: 2/(b+1) Q^(b+2) - c Q."""
    Q = np.asarray(Q, dtype=float)
    return (2.0 / (b + 1.0)) * Q ** (b + 2.0) - c * Q


def hamiltonian(point, b: float, c: float) -> float:
    if b == -1.0:
        raise ValueError("b = -1 (a = 0) is outside the admissible family")
    pt = _as_point(point)
    return 0.5 * pt.P**2 + float(potential(pt.Q, b, c))


def hamiltonian_vector_field(point, b: float, c: float) -> tuple[float, float]:
    pt = _as_point(point)
    return pt.P, -2.0 * (b + 2.0) / (b + 1.0) * pt.Q ** (b + 1.0) + c


def critical_point(b: float, c: float) -> CriticalPoint | None:
    """Rest point of the flow: 2(b+2)/(b+1) Q^(b+1) = c with Q > 0, or None.

    The rest point is a local minimum of H exactly when (b+2) Q^b > 0.
    """
    if b == -1.0:
        raise ValueError("b = -1 (a = 0) is outside the admissible family")
    base = c * (b + 1.0) / (2.0 * (b + 2.0))
    if base <= 0.0 or b == -2.0:
        return None
    q0 = base ** (1.0 / (b + 1.0))
    if not np.isfinite(q0) or q0 <= 0.0:
        return None
    return CriticalPoint(
        point=PhasePoint(float(q0), 0.0),
        is_minimum=bool((b + 2.0) * q0**b > 0.0),
    )


@dataclass(frozen=True)
class FlowTrajectory:
    b: float
    c: float
    t: np.ndarray
    Q: np.ndarray
    P: np.ndarray
    energy_drift: float
    boundary_time: float | None = None

    def __post_init__(self):
        for name in ("t", "Q", "P"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def hit_boundary(self) -> bool:
        return self.boundary_time is not None


def integrate_flow(
    start,
    b: float,
    c: float,
    duration: float,
    n_samples: int = 2048,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    method: str = DEFAULT_METHOD,
    dense: bool = False,
):
    """Integrate the profile Hamiltonian flow with a positivity guard.

    Integration halts with a recorded event time if Q reaches the domain
    floor; the returned trajectory carries the maximal energy drift over the
    sampled points.  With ``dense=True`` the scipy solution object is returned
    alongside for interpolation.
    """
    if b == -2.0:
        raise ConicRigidityError(
            "b = -2 (a = 1/2): the equation degenerates, only constant profiles exist"
        )
    if b == -1.0:
        raise ValueError("b = -1 (a = 0) is outside the admissible family")
    pt = _as_point(start)

    def rhs(t, y):
        return [y[1], -2.0 * (b + 2.0) / (b + 1.0) * y[0] ** (b + 1.0) + c]

    def floor_event(t, y):
        return y[0] - Q_FLOOR

    floor_event.terminal = True
    floor_event.direction = -1.0

    sol = solve_ivp(
        rhs,
        (0.0, float(duration)),
        [pt.Q, pt.P],
        method=method,
        rtol=rtol,
        atol=atol,
        dense_output=True,
        events=floor_event,
    )
    if not sol.success and sol.status != 1:
        raise RuntimeError(f"flow integration failed: {sol.message}")

    boundary_time = None
    t_end = float(duration)
    if sol.status == 1 and len(sol.t_events[0]):
        boundary_time = float(sol.t_events[0][0])
        t_end = boundary_time

    ts = np.linspace(0.0, t_end, n_samples + 1)
    states = sol.sol(ts)
    h0 = hamiltonian(pt, b, c)
    energies = 0.5 * states[1] ** 2 + potential(np.maximum(states[0], Q_FLOOR), b, c)
    drift = float(np.max(np.abs(energies - h0)))
    traj = FlowTrajectory(
        b=b, c=c, t=ts, Q=states[0], P=states[1],
        energy_drift=drift, boundary_time=boundary_time,
    )
    if boundary_time is not None and not dense:
        raise DomainBoundaryError(
            f"profile positivity lost at t = {boundary_time:.6g}", time=boundary_time
        )
    return (traj, sol.sol) if dense else traj


def residual_third_order(values, period: float, a, filter_rel: float = fourier.NOISE_FLOOR) -> float:
    """Sup-norm certificate |F''' + 2(2+b) F^b F'| for a closed profile array.

    This is the universal "is this profile critical" check: derivatives are
    spectral with a noise filter so that integrator round-off in sampled
    trajectories does not get amplified cubically.
    """
    data = exponent_data(a)
    values = np.asarray(values, dtype=float)
    if np.min(values) <= 0.0:
        raise ValueError("profile must be strictly positive")
    d1 = fourier.spectral_derivative(values, period, 1, filter_rel)
    d3 = fourier.spectral_derivative(values, period, 3, filter_rel)
    resid = d3 + 2.0 * (2.0 + data.b) * values**data.b * d1
    return float(np.max(np.abs(resid)))


def first_integral_constant(point, b: float, c: float) -> float:
    """d in (F')^2 = -4/(b+1) F^(b+2) + 2cF + d, fitted at the given state."""
    pt = _as_point(point)
    return float(pt.P**2 + 4.0 / (b + 1.0) * pt.Q ** (b + 2.0) - 2.0 * c * pt.Q)


def residual_first_order(Q, P, b: float, c: float, d: float) -> float:
    """Sup-norm of (F')^2 + 4/(b+1) F^(b+2) - 2cF - d along sampled states."""
    Q = np.asarray(Q, dtype=float)
    P = np.asarray(P, dtype=float)
    resid = P**2 + 4.0 / (b + 1.0) * Q ** (b + 2.0) - 2.0 * c * Q - d
    return float(np.max(np.abs(resid)))
