"""Curve reconstruction from a curvature profile.

A centroaffine curve satisfies the linear second-order equation
``coordinate'' = -p(t) * coordinate``; given a periodic profile this module
computes the transfer matrix over one period, tunes orbit energy so the
transfer rotation is a prescribed rational fraction of a full turn, and
assembles the closed curve (the fundamental matrix over one period extended
by transfer-matrix powers), including vertex and osculating-conic data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import fourier
from .geometry import CentroaffineCurve, bracket
from .orbits import (
    ProfileOrbit,
    default_integration_constant,
    orbit_from_energy,
    turning_points,
)
from .profile_ode import (
    ConicRigidityError,
    critical_point,
    exponent_data,
    potential,
    residual_third_order,
)

__all__ = [
    "ClosureError",
    "TuneRangeError",
    "Monodromy",
    "ClosedExtremalCurve",
    "VertexOsculant",
    "OsculantReport",
    "monodromy",
    "rotation_tune",
    "reconstruct",
    "vertices_and_osculants",
    "first_variation_slope",
    "winding_number",
]

TOL_CLOSE = 1e-6          # C1 closure defect for assembled curves
DET_TOL = 1e-8            # transfer-matrix unimodularity guard
HILL_RTOL = 1e-12
HILL_ATOL = 1e-14


class ClosureError(RuntimeError):
    def __init__(self, message, defect=None):
        super().__init__(message)
        self.defect = defect


class TuneRangeError(RuntimeError):
    def __init__(self, message, attained=None):
        super().__init__(message)
        self.attained = attained  # (low, high) attainable rotation fractions


class _HermiteProfile:
    """Periodic cubic Hermite interpolant of p = F**b from orbit samples.

    Orbit samples carry both F and F', so p and p' at the nodes are exact and
    the interpolant is C1 with quartic-order error.
    """

    def __init__(self, orbit: ProfileOrbit):
        b = orbit.exponent.b
        self.period = orbit.period
        self.n = len(orbit.F) - 1
        self.h = self.period / self.n
        self.p = orbit.F**b
        self.dp = b * orbit.F ** (b - 1.0) * orbit.Fp

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        u = np.mod(t, self.period) / self.h
        j = np.minimum(u.astype(int), self.n - 1)
        x = u - j
        h00 = (1.0 + 2.0 * x) * (1.0 - x) ** 2
        h10 = x * (1.0 - x) ** 2
        h01 = x * x * (3.0 - 2.0 * x)
        h11 = x * x * (x - 1.0)
        return (
            h00 * self.p[j]
            + h10 * self.h * self.dp[j]
            + h01 * self.p[j + 1]
            + h11 * self.h * self.dp[j + 1]
        )

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        u = np.mod(t, self.period) / self.h
        j = np.minimum(u.astype(int), self.n - 1)
        x = u - j
        d00 = 6.0 * x * (x - 1.0)
        d10 = (1.0 - x) * (1.0 - 3.0 * x)
        d01 = -d00
        d11 = x * (3.0 * x - 2.0)
        return (
            d00 * self.p[j] / self.h
            + d10 * self.dp[j]
            + d01 * self.p[j + 1] / self.h
            + d11 * self.dp[j + 1]
        )


@dataclass(frozen=True)
class Monodromy:
    """Transfer matrix of the reconstruction equation over one profile period.

    ``rotation_angle`` is the conjugacy angle in [0, 2*pi); ``phase_advance``
    is the full continuous rotation of a solution over the period (the
    quantity whose rational multiples of 2*pi close the curve), obtained by
    phase tracking for the integer part and the trace for the fractional
    part, making it independent of linear coordinates.
    """

    matrix: np.ndarray
    trace: float
    mtype: str
    rotation_angle: float
    phase_advance: float
    period: float
    determinant: float

    def power_defect(self, covering: int) -> float:
        m = np.linalg.matrix_power(self.matrix, covering)
        return float(np.max(np.abs(m - np.eye(2))))


def _as_profile(profile):
    if isinstance(profile, ProfileOrbit):
        return _HermiteProfile(profile), profile.period
    values, period = profile
    values = np.asarray(values, dtype=float)

    class _Interp:
        def __init__(self):
            self.eval = fourier.trig_interpolator(values, period)

        def __call__(self, t):
            return self.eval(np.mod(t, period))

    return _Interp(), float(period)


def monodromy(profile, n_track: int = 2000) -> Monodromy:
    """Integrate the two fundamental solutions over one profile period."""
    p_of_t, period = _as_profile(profile)

    def rhs(t, y):
        p = p_of_t(t)
        return [y[1], -p * y[0], y[3], -p * y[2]]

    sol = solve_ivp(
        rhs, (0.0, period), [1.0, 0.0, 0.0, 1.0],
        method="DOP853", rtol=HILL_RTOL, atol=HILL_ATOL, dense_output=True,
    )
    if not sol.success:
        raise RuntimeError(f"reconstruction-equation integration failed: {sol.message}")
    yT = sol.sol(period)
    matrix = np.array([[yT[0], yT[2]], [yT[1], yT[3]]])
    det = float(matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0])
    if abs(det - 1.0) > DET_TOL:
        raise RuntimeError(f"transfer matrix determinant {det} deviates from 1")
    tr = float(matrix[0, 0] + matrix[1, 1])

    ts = np.linspace(0.0, period, n_track)
    Y = sol.sol(ts)
    phases = np.unwrap(np.arctan2(Y[1], Y[0]))
    raw = -(phases[-1] - phases[0])  # the flow turns clockwise in (u, u')

    if abs(tr) < 2.0 - 1e-12:
        mtype = "elliptic"
        cos_t = tr / 2.0
        sin_t = np.sign(matrix[0, 1] - matrix[1, 0]) * np.sqrt(max(0.0, 1.0 - cos_t**2))
        theta_mod = float(np.mod(np.arctan2(sin_t, cos_t), 2.0 * np.pi))
    elif abs(tr) <= 2.0 + 1e-12:
        mtype = "parabolic"
        theta_mod = 0.0 if tr > 0 else np.pi
    else:
        mtype = "hyperbolic"
        theta_mod = 0.0 if tr > 0 else np.pi
    advance = 2.0 * np.pi * np.round((raw - theta_mod) / (2.0 * np.pi)) + theta_mod
    return Monodromy(
        matrix=matrix,
        trace=tr,
        mtype=mtype,
        rotation_angle=float(np.mod(advance, 2.0 * np.pi)),
        phase_advance=float(advance),
        period=period,
        determinant=det,
    )


def _circle_fraction(b: float) -> float:
    """Rotation fraction of the constant profile at the well bottom."""
    return 1.0 / np.sqrt(2.0 * (b + 2.0))


def rotation_tune(
    a,
    target,
    c: float | None = None,
    shape_range: tuple[float, float] = (1e-4, 0.995),
    n_scan: int = 15,
    n_samples: int = 2048,
) -> ProfileOrbit:
    """Orbit whose per-period transfer rotation is exactly target = j/q turns.

    The attainable fractions at a given exponent form the open interval
    between 1/sqrt(2(b+2)) (vanishing amplitude) and 1/2 (the positivity
    boundary), monotone in the level-set energy; the root-find runs in the
    energy shape parameter.  An unreachable target raises TuneRangeError
    carrying the attained interval.
    """
    target = Fraction(target)
    if not (0 < target < 1):
        raise ValueError("target rotation fraction must lie in (0, 1)")
    data = exponent_data(a)
    if data.conic_rigid or data.b < -2.0:
        raise ConicRigidityError(
            f"a = {data.a} admits only constant profiles (rigidity window)"
        )
    c_val = float(c) if c is not None else default_integration_constant(data.b)
    goal = float(target)

    cp = critical_point(data.b, c_val)
    e0 = float(potential(cp.point.Q, data.b, c_val))

    def fraction_at(shape: float) -> float:
        orbit = orbit_from_energy(data, c_val, e0 * (1.0 - shape), n_samples)
        return monodromy(orbit).phase_advance / (2.0 * np.pi)

    lo, hi = shape_range
    shapes = np.geomspace(lo, hi, n_scan)
    # the fraction is monotone between the circle limit and 1/2: bracket on a
    # coarse scan, then refine
    f_lo = fraction_at(shapes[0])
    bracket_pair = None
    f_prev, s_prev = f_lo, shapes[0]
    for s in shapes[1:]:
        f_cur = fraction_at(s)
        if (f_prev - goal) * (f_cur - goal) <= 0.0:
            bracket_pair = (s_prev, s)
            break
        f_prev, s_prev = f_cur, s
    if bracket_pair is None:
        f_hi = f_prev
        attained = (min(f_lo, f_hi), max(f_lo, f_hi))
        raise TuneRangeError(
            f"rotation fraction {target} not attainable at a={data.a}: "
            f"attained range ({attained[0]:.6f}, {attained[1]:.6f}), "
            f"vanishing-amplitude limit {_circle_fraction(data.b):.6f}",
            attained=attained,
        )
    shape = brentq(
        lambda s: fraction_at(s) - goal, bracket_pair[0], bracket_pair[1],
        xtol=1e-13, rtol=1e-13,
    )
    return orbit_from_energy(data, c_val, e0 * (1.0 - shape), n_samples)


@dataclass(frozen=True)
class VertexOsculant:
    t: float
    curvature: float
    kind: str            # "min" or "max" of the curvature
    conic: np.ndarray    # symmetric 2x2 matrix Q with x^T Q x = 1


@dataclass(frozen=True)
class OsculantReport:
    vertices: tuple
    constant_profile: bool


@dataclass(frozen=True)
class ClosedExtremalCurve:
    curve: CentroaffineCurve
    orbit: ProfileOrbit
    covering: int
    rotation_number: Fraction
    vertices: np.ndarray
    closure_defect: float

    @property
    def winding(self) -> int:
        return int(self.rotation_number * self.covering)


def reconstruct(
    profile: ProfileOrbit,
    covering: int = 1,
    initial_frame: np.ndarray | None = None,
    total_period: float | None = 2.0 * np.pi,
    samples_per_period: int | None = None,
) -> ClosedExtremalCurve:
    """Assemble the closed curve carried by ``covering`` profile periods.

    The transfer matrix power M^covering must be the identity within the
    closure tolerance.  The result is rescaled (curve -> s * curve, t ->
    t/s^2) so the full parameter length is ``total_period`` (pass None to
    skip), and the profile residual certificate is re-checked after the
    rescaling.  ``initial_frame`` is the 2x2 matrix (curve(0) | curve'(0)) as
    columns with unit bracket; the default frame osculates a circle at the
    initial vertex: curve(0) = (p0^-1/4, 0), curve'(0) = (0, p0^1/4).
    """
    if covering < 1:
        raise ValueError("covering must be a positive integer")
    if not isinstance(profile, ProfileOrbit):
        raise TypeError("reconstruct expects a ProfileOrbit")
    mono = monodromy(profile)
    defect = mono.power_defect(covering)
    if defect > TOL_CLOSE:
        raise ClosureError(
            f"transfer matrix power defect {defect:.3e} exceeds {TOL_CLOSE:.1e}; "
            "the curve does not close after the requested covering",
            defect=defect,
        )

    j_winding = mono.phase_advance * covering / (2.0 * np.pi)
    j_int = int(np.round(j_winding))
    if abs(j_winding - j_int) > 1e-6:
        raise ClosureError(
            f"total rotation {j_winding} turns is not an integer", defect=defect
        )
    rotation = Fraction(j_int, covering)

    p_of_t, period = _as_profile(profile)
    if initial_frame is None:
        p0 = float(p_of_t(0.0))
        x0 = p0 ** (-0.25)
        initial_frame = np.array([[x0, 0.0], [0.0, 1.0 / x0]])
    else:
        initial_frame = np.asarray(initial_frame, dtype=float)
        fr_det = bracket(initial_frame[:, 0], initial_frame[:, 1])
        if abs(fr_det - 1.0) > 1e-9:
            raise ValueError("initial frame must have unit bracket [curve, curve']")

    n_per = samples_per_period or max(512, 2048 // covering)

    def rhs(t, y):
        p = p_of_t(t)
        return [y[1], -p * y[0], y[3], -p * y[2]]

    sol = solve_ivp(
        rhs, (0.0, period), [1.0, 0.0, 0.0, 1.0],
        method="DOP853", rtol=HILL_RTOL, atol=HILL_ATOL, dense_output=True,
    )
    ts = np.linspace(0.0, period, n_per + 1)
    Y = sol.sol(ts)
    # fundamental matrix at each node; columns are the two basis solutions
    phi = np.moveaxis(np.array([[Y[0], Y[2]], [Y[1], Y[3]]]), -1, 0)  # (n+1, 2, 2)

    # state matrix S(t) = phi(t) @ M^k @ S0 with rows (position, velocity)
    state0 = initial_frame.T
    blocks_pts, blocks_vel = [], []
    power = np.eye(2)
    for _ in range(covering):
        states = phi[:-1] @ (power @ state0)
        blocks_pts.append(states[:, 0, :])
        blocks_vel.append(states[:, 1, :])
        power = mono.matrix @ power

    pts = np.concatenate(blocks_pts + [blocks_pts[0][:1]], axis=0)
    vel = np.concatenate(blocks_vel + [blocks_vel[0][:1]], axis=0)

    raw_period = covering * period
    end_state = power @ state0  # power is now M^covering
    c1_defect = float(np.max(np.abs(end_state - state0)))
    # curvature along the assembled curve (tiled profile samples)
    t_grid = np.linspace(0.0, raw_period, covering * n_per + 1)
    p_vals = p_of_t(np.mod(t_grid, period))
    p_vals[-1] = p_vals[0]

    wronskian = bracket(pts, vel)
    w_err = float(np.max(np.abs(wronskian - 1.0)))
    if w_err > 1e-8:
        raise RuntimeError(f"Wronskian drifted by {w_err:.3e} during reconstruction")

    if total_period is None:
        scale2 = 1.0
    else:
        scale2 = total_period / raw_period
    s = np.sqrt(scale2)
    pts_f = s * pts
    vel_f = vel / s
    p_f = p_vals / scale2**2
    acc_f = -p_f[:, None] * pts_f
    curve = CentroaffineCurve(
        period=raw_period * scale2,
        points=pts_f,
        velocities=vel_f,
        accelerations=acc_f,
    )

    orbit_f = profile.rescaled(scale2) if scale2 != 1.0 else profile
    resid = residual_third_order(orbit_f.F, orbit_f.period, orbit_f.exponent.a)
    b = orbit_f.exponent.b
    term_scale = max(
        1.0, float(np.max(np.abs(2.0 * (2.0 + b) * orbit_f.F**b * orbit_f.Fp)))
    )
    if resid > 1e-6 + 1e-4 * term_scale:
        raise RuntimeError(
            f"profile residual after rescaling: {resid:.3e} (scale {term_scale:.1e})"
        )

    # vertices: parameters where the curvature derivative vanishes; for
    # orbit-backed profiles these are the half-period points of the profile
    if not orbit_f.is_constant:
        half = orbit_f.period / 2.0
        vertices = np.arange(2 * covering) * half
    else:
        vertices = np.array([])

    return ClosedExtremalCurve(
        curve=curve,
        orbit=orbit_f,
        covering=covering,
        rotation_number=rotation,
        vertices=vertices,
        closure_defect=max(defect, c1_defect),
    )


def first_variation_slope(
    closed: ClosedExtremalCurve,
    f: np.ndarray,
    exponent: float | None = None,
    eps_pair: tuple[float, float] = (1e-3, 5e-4),
) -> float:
    """Linear coefficient of the functional along v = -(f'/2) curve + f curve'.

    ``f`` is a closed sample array of a smooth periodic function on the curve
    grid.  The deformed derivatives are formed analytically from the stored
    curve derivatives and the reconstruction equation (not by numerical
    differentiation of moved points), and the slope is extracted by a
    two-point Richardson step that cancels the quadratic term.  Vanishes (to
    integration accuracy) exactly when the curve is critical.
    """
    curve = closed.curve
    a = float(exponent if exponent is not None else closed.orbit.exponent.a)
    t = curve.grid
    pts, vel, acc = curve.points, curve.velocity(), curve.acceleration()
    prof = _HermiteProfile(closed.orbit)
    p = prof(t)
    dp = prof.derivative(t)
    gamma3 = -dp[:, None] * pts - p[:, None] * vel

    f = np.asarray(f, dtype=float)
    f1 = fourier.spectral_derivative(f, curve.period, 1)
    f2 = fourier.spectral_derivative(f, curve.period, 2)
    f3 = fourier.spectral_derivative(f, curve.period, 3)
    v1 = -0.5 * f2[:, None] * pts + 0.5 * f1[:, None] * vel + f[:, None] * acc
    v2 = -0.5 * f3[:, None] * pts + 1.5 * f1[:, None] * acc + f[:, None] * gamma3

    def value(eps: float) -> float:
        integrand = bracket(vel + eps * v1, acc + eps * v2) ** a
        return float(fourier.periodic_integral(integrand, curve.period))

    base = value(0.0)
    e1, e2 = eps_pair
    d1 = value(e1) - base
    d2 = value(e2) - base
    # eliminate the quadratic term from the pair of displacements
    return float((d1 * e2**2 - d2 * e1**2) / (e1 * e2 * (e2 - e1)))


def winding_number(curve: CentroaffineCurve) -> float:
    """Total turning of the position vector about the origin, in turns."""
    pts = curve.points
    vel = curve.velocity()
    rate = bracket(pts, vel) / np.sum(pts * pts, axis=1)
    return float(fourier.periodic_integral(rate, curve.period) / (2.0 * np.pi))


def vertices_and_osculants(closed: ClosedExtremalCurve) -> OsculantReport:
    """Vertex parameters with curvature values and osculating central conics.

    At a vertex the osculating conic is the central conic with constant
    curvature p(t0) matching position and velocity; it is the ellipse
    x^T Q x = 1 with Q built from the frame (curve(t0), curve'(t0)/sqrt(p0)).
    """
    orbit = closed.orbit
    if orbit.is_constant:
        return OsculantReport(vertices=(), constant_profile=True)
    curve_eval = fourier.trig_interpolator(closed.curve.points, closed.curve.period)
    vel_eval = fourier.trig_interpolator(closed.curve.velocity(), closed.curve.period)
    p_interp = _HermiteProfile(orbit)

    out = []
    for t0 in closed.vertices:
        p0 = float(p_interp(t0))
        pos = np.asarray(curve_eval(t0), dtype=float)
        vel = np.asarray(vel_eval(t0), dtype=float) / np.sqrt(p0)
        frame = np.column_stack([pos, vel])
        inv = np.linalg.inv(frame)
        conic = inv.T @ inv
        kind = "min" if abs(p0 - orbit.curvature_values().min()) < abs(
            p0 - orbit.curvature_values().max()
        ) else "max"
        out.append(VertexOsculant(t=float(t0), curvature=p0, kind=kind, conic=conic))
    return OsculantReport(vertices=tuple(out), constant_profile=False)
