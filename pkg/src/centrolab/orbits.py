"""Periodic profile construction and the rigidity window certificate.

Non-constant positive periodic profiles exist exactly for exponents outside
[1/2, 1]: they are the bounded level ovals of the profile Hamiltonian.  This
module locates turning points, evaluates the period by singularity-free
quadrature, solves for a prescribed period, and certifies that inside the
window the potential is strictly concave so no bounded oval can exist.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from . import fourier
from .profile_ode import (
    ConicRigidityError,
    ExponentData,
    FirstIntegrals,
    PhasePoint,
    critical_point,
    exponent_data,
    first_integral_constant,
    integrate_flow,
    potential,
    residual_third_order,
)

__all__ = [
    "NoOrbitError",
    "PeriodRangeError",
    "ProfileOrbit",
    "turning_points",
    "half_period",
    "orbit_from_energy",
    "constant_profile_orbit",
    "find_orbit_with_period",
    "rigidity_scan",
    "RigidityVerdict",
    "default_integration_constant",
]

ORBIT_RESIDUAL_TOL = 1e-6
_GL_NODES, _GL_WEIGHTS = leggauss(128)


class NoOrbitError(RuntimeError):
    """No bounded positive level component for the requested constants."""


class PeriodRangeError(RuntimeError):
    def __init__(self, message, scan=None):
        super().__init__(message)
        self.scan = scan if scan is not None else []


def default_integration_constant(b: float) -> float:
    """Constant c per the three existence cases: b>0, b in (-1,0), b in (-2,-1)."""
    if b > 0.0:
        return 10.0
    if -1.0 < b < 0.0:
        return 0.1
    if -2.0 < b < -1.0:
        return -10.0
    raise ConicRigidityError(
        f"b = {b} lies outside the existence range (exponent inside the rigidity window)"
    )


@dataclass(frozen=True)
class ProfileOrbit:
    """One period of a positive periodic profile F with its certificates.

    ``F`` and ``Fp`` (= F') are closed sample arrays over one period; ``m``
    and ``M`` are the two critical values, and the profile attains no others.
    """

    exponent: ExponentData
    constants: FirstIntegrals
    m: float
    M: float
    period: float
    F: np.ndarray
    Fp: np.ndarray

    def __post_init__(self):
        for name in ("F", "Fp"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (0.0 < self.m <= self.M):
            raise ValueError("orbit extremes must satisfy 0 < m <= M")

    @property
    def grid(self) -> np.ndarray:
        return fourier.closed_grid(self.period, len(self.F) - 1)

    @property
    def is_constant(self) -> bool:
        return self.m == self.M

    @property
    def energy(self) -> float:
        return 0.5 * self.constants.d

    def curvature_values(self) -> np.ndarray:
        """p = F**b on the orbit grid."""
        return self.F**self.exponent.b

    def rescaled(self, time_factor: float) -> "ProfileOrbit":
        """Exact symmetry F -> lam*F(t/time_factor) with lam**(b/2) = 1/time_factor.

        Rescales the period by ``time_factor`` while staying inside the
        critical family; the integration constants transform as
        c -> lam**(b+1) c and d -> lam**(b+2) d.
        """
        b = self.exponent.b
        lam = time_factor ** (-2.0 / b)
        return ProfileOrbit(
            exponent=self.exponent,
            constants=FirstIntegrals(
                c=self.constants.c * lam ** (b + 1.0),
                d=self.constants.d * lam ** (b + 2.0),
            ),
            m=self.m * lam,
            M=self.M * lam,
            period=self.period * time_factor,
            F=self.F * lam,
            Fp=self.Fp * lam / time_factor,
        )


def _well_scale(b: float, c: float) -> tuple[float, float]:
    """Scaling F -> lam*F carrying the well minimum to 1: returns (lam, c_scaled).

    Wells with b close to -1 sit at profile values many orders of magnitude
    from 1; all computations happen in the normalized well and are carried
    back by the exact symmetry (c scales by lam^(b+1), energies by lam^(b+2),
    times by lam^(-b/2)).
    """
    cp = critical_point(b, c)
    if cp is None or not cp.is_minimum:
        raise NoOrbitError(f"no potential well for b={b}, c={c}")
    lam = 1.0 / cp.point.Q
    return lam, c * lam ** (b + 1.0)


def turning_points(b: float, c: float, energy: float) -> tuple[float, float]:
    """Roots m < M of V(Q) = E bounding a positive well, by bracketed bisection."""
    lam, c_n = _well_scale(b, c)
    e_n = energy * lam ** (b + 2.0)
    e0 = float(potential(1.0, b, c_n))
    if e_n <= e0:
        raise NoOrbitError(f"energy {energy} at or below the well bottom {e0 / lam ** (b + 2.0)}")
    if e_n >= 0.0:
        raise NoOrbitError(
            f"energy {energy} >= 0: the level set leaves the positivity domain"
        )

    def f(q):
        return float(potential(q, b, c_n)) - e_n

    lo = 1.0
    while f(lo) < 0.0:
        lo *= 0.5
        if lo < 1e-300:
            raise NoOrbitError("no positive left turning point")
    m = brentq(f, lo, 1.0, xtol=1e-15)
    hi = 1.0
    while f(hi) < 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise NoOrbitError("no right turning point: level set unbounded")
    M = brentq(f, 1.0, hi, xtol=1e-15)
    return float(m) / lam, float(M) / lam


def half_period(b: float, c: float, energy: float) -> float:
    """Half period of the level oval {H = E}: quadrature of dQ / sqrt(2(E-V)).

    The substitution Q = m + (M-m) sin^2(theta) removes both inverse square
    root endpoints, leaving a smooth integrand for Gauss-Legendre nodes.
    """
    lam, c_n = _well_scale(b, c)
    e_n = energy * lam ** (b + 2.0)
    m, M = turning_points(b, c_n, e_n)  # c_n has its well at 1, lam' = 1
    theta = 0.25 * np.pi * (_GL_NODES + 1.0)
    weights = 0.25 * np.pi * _GL_WEIGHTS
    sin2 = np.sin(theta) ** 2
    cos2 = np.cos(theta) ** 2
    Q = m + (M - m) * sin2
    # E - V(Q) via the divided difference anchored at the nearer turning
    # point: products and expm1/log1p only, so tiny-amplitude wells do not
    # lose the numerator to cancellation of O(1) potential values.
    s = b + 2.0
    delta_m = (M - m) * sin2
    delta_M = (M - m) * cos2
    from_m = c_n * delta_m - (2.0 / (b + 1.0)) * m**s * np.expm1(s * np.log1p(delta_m / m))
    from_M = (2.0 / (b + 1.0)) * Q**s * np.expm1(s * np.log1p(delta_M / Q)) - c_n * delta_M
    ev = np.where(sin2 < 0.5, from_m, from_M)
    h = ev / (delta_m * delta_M)
    half = float(np.sum(np.sqrt(2.0 / h) * weights))
    return half * lam ** (b / 2.0)


def orbit_from_energy(
    exponent: ExponentData | float,
    c: float,
    energy: float,
    n_samples: int = 2048,
) -> ProfileOrbit:
    """Sample one orbit period starting at the profile minimum (F, F') = (m, 0).

    Integration happens in the normalized well (minimum at 1) and the result
    is carried back by the exact scaling symmetry, so conditioning does not
    depend on the raw profile scale.
    """
    data = exponent if isinstance(exponent, ExponentData) else exponent_data(exponent)
    if data.conic_rigid:
        raise ConicRigidityError("a = 1/2: only constant profiles exist")
    lam, c_n = _well_scale(data.b, c)
    e_n = energy * lam ** (data.b + 2.0)
    m, M = turning_points(data.b, c_n, e_n)
    period = 2.0 * half_period(data.b, c_n, e_n)
    traj, dense = integrate_flow(
        PhasePoint(m, 0.0), data.b, c_n, duration=period,
        n_samples=n_samples, dense=True,
    )
    ts = fourier.closed_grid(period, n_samples)
    states = dense(ts)
    F = states[0].copy()
    Fp = states[1].copy()
    gap = abs(F[-1] - F[0]) + abs(Fp[-1] - Fp[0])
    if gap > 1e-8 * max(1.0, M):
        raise RuntimeError(f"orbit failed to close over the quadrature period (gap {gap:.2e})")
    F[-1] = F[0]
    Fp[-1] = Fp[0]
    d = first_integral_constant(PhasePoint(m, 0.0), data.b, c_n)
    orbit = ProfileOrbit(
        exponent=data,
        constants=FirstIntegrals(c=c_n, d=d),
        m=m, M=M, period=period, F=F, Fp=Fp,
    )
    if lam != 1.0:
        orbit = orbit.rescaled(lam ** (data.b / 2.0))
    _certify(orbit)
    return orbit


def constant_profile_orbit(a, curvature: float, period: float, n_samples: int = 2048) -> ProfileOrbit:
    """Constant profile p = curvature as a degenerate orbit of nominal period."""
    data = exponent_data(a)
    F0 = float(curvature) ** (1.0 / data.b)
    c = 2.0 * (data.b + 2.0) / (data.b + 1.0) * F0 ** (data.b + 1.0)
    d = first_integral_constant(PhasePoint(F0, 0.0), data.b, c)
    n = np.full(n_samples + 1, F0)
    return ProfileOrbit(
        exponent=data,
        constants=FirstIntegrals(c=c, d=d),
        m=F0, M=F0, period=float(period),
        F=n, Fp=np.zeros(n_samples + 1),
    )


def _certify(orbit: ProfileOrbit) -> None:
    resid = residual_third_order(orbit.F, orbit.period, orbit.exponent.a)
    # deep-dipping profiles have third-derivative terms far above 1, so the
    # certificate tolerance carries their scale (1e-8 relative budget)
    b = orbit.exponent.b
    term_scale = float(np.max(np.abs(2.0 * (2.0 + b) * orbit.F**b * orbit.Fp)))
    tol = ORBIT_RESIDUAL_TOL + 1e-4 * term_scale
    if resid > tol:
        raise RuntimeError(f"orbit residual certificate failed: {resid:.3e} > {tol:.1e}")
    if abs(float(orbit.F.min()) - orbit.m) > 1e-8 or abs(float(orbit.F.max()) - orbit.M) > 1e-8:
        raise RuntimeError("orbit extremes disagree with the turning points")
    signs = np.sign(orbit.Fp[:-1])
    signs = signs[signs != 0.0]
    changes = int(np.sum(signs != np.roll(signs, 1)))  # cyclic count
    if not orbit.is_constant and changes != 2:
        raise RuntimeError(
            f"profile has {changes} critical points per period; exactly two expected"
        )


def _energy_grid(b: float, c: float, n: int = 33) -> np.ndarray:
    cp = critical_point(b, c)
    e0 = float(potential(cp.point.Q, b, c))
    shapes = 1.0 - np.geomspace(1e-6, 1.0, n, endpoint=False)
    return e0 * shapes[::-1]  # from near the bottom towards the boundary


def find_orbit_with_period(
    a,
    target_period: float,
    search_box: tuple[float, float] | None = None,
    c: float | None = None,
    n_samples: int = 2048,
) -> ProfileOrbit:
    """Orbit with a prescribed period, by a root-find in energy.

    The integration constant defaults per the existence cases and, if the
    target lies outside the period range attainable at that constant, the
    orbit is carried to the target exactly by the scaling symmetry of the
    family (which changes c).  A pinned ``c`` disables the rescue and raises
    PeriodRangeError with a diagnostic (energy, period) scan instead.
    """
    if target_period <= 0.0:
        raise ValueError("target period must be positive")
    data = exponent_data(a)
    if data.conic_rigid:
        raise ConicRigidityError("a = 1/2: only constant profiles exist")
    if data.b < -2.0:
        raise ConicRigidityError(
            f"a = {data.a} lies in the rigidity window (1/2, 1): constants only"
        )
    pinned = c is not None
    c_val = float(c) if pinned else default_integration_constant(data.b)

    def period_at(energy):
        return 2.0 * half_period(data.b, c_val, energy)

    energies = _energy_grid(data.b, c_val)
    if search_box is not None:
        lo, hi = search_box
        energies = energies[(energies >= lo) & (energies <= hi)]
        if len(energies) < 2:
            raise ValueError("search box excludes the whole energy range")
    periods = np.array([period_at(e) for e in energies])

    t_lo, t_hi = periods.min(), periods.max()
    if not (t_lo <= target_period <= t_hi):
        if pinned:
            raise PeriodRangeError(
                f"target period {target_period:.6g} outside attainable range "
                f"[{t_lo:.6g}, {t_hi:.6g}] at c = {c_val}",
                scan=list(zip(energies.tolist(), periods.tolist())),
            )
        # scaling rescue: solve at the default constant for a mid-range orbit,
        # then rescale the whole orbit (and c) to the exact target period
        mid = orbit_from_energy(data, c_val, energies[len(energies) // 2], n_samples)
        rescaled = mid.rescaled(target_period / mid.period)
        _certify(rescaled)
        return rescaled

    # monotone bracket for brentq
    order = np.argsort(periods)
    k = np.searchsorted(periods[order], target_period)
    k = min(max(k, 1), len(order) - 1)
    e_a, e_b = energies[order[k - 1]], energies[order[k]]
    if e_a > e_b:
        e_a, e_b = e_b, e_a
    energy = brentq(lambda e: period_at(e) - target_period, e_a, e_b, xtol=1e-14, rtol=1e-14)
    return orbit_from_energy(data, c_val, energy, n_samples)


@dataclass(frozen=True)
class RigidityVerdict:
    a: float
    rigid: bool
    reason: str
    cells_checked: int

    def __str__(self):
        return f"a={self.a}: {self.reason}"


def rigidity_scan(
    a,
    c_values: np.ndarray | None = None,
    energies_per_c: int = 33,
) -> RigidityVerdict:
    """Certify "constants only" for exponents in the rigidity window (1/2, 1).

    For these exponents b < -2, so V'' = 2(b+2) Q^b < 0: the potential is
    strictly concave on Q > 0 and a bounded positive level component needs a
    local minimum of V between two turning points, which concavity forbids
    (the same monotonicity that forces max F <= min F in the integrated
    equation).  The scan verifies this numerically cell by cell: every root
    pair of V = E brackets a region where V stays above E.
    """
    try:
        data = exponent_data(a)
    except ConicRigidityError:
        return RigidityVerdict(a=float(a), rigid=True,
                               reason="rigid: conic-degenerate (a = 1)", cells_checked=0)
    if data.conic_rigid:
        return RigidityVerdict(a=float(a), rigid=True,
                               reason="rigid: conic-degenerate (a = 1/2)", cells_checked=0)
    if not (0.5 < data.a < 1.0):
        raise ValueError(
            f"rigidity scan applies to the window (1/2, 1); a = {data.a} has "
            "non-constant orbits (use find_orbit_with_period)"
        )

    b = data.b
    if c_values is None:
        c_values = np.concatenate([-np.geomspace(100.0, 0.01, 8), [0.0], np.geomspace(0.01, 100.0, 8)])
    qs = np.geomspace(1e-8, 1e8, 2001)
    cells = 0
    for c_val in c_values:
        concavity = 2.0 * (b + 2.0) * qs**b
        if np.any(concavity >= 0.0):
            return RigidityVerdict(a=data.a, rigid=False,
                                   reason="concavity certificate failed", cells_checked=cells)
        cp = critical_point(b, c_val)
        if cp is not None and cp.is_minimum:
            return RigidityVerdict(a=data.a, rigid=False,
                                   reason=f"potential well found at c={c_val}", cells_checked=cells)
        v = potential(qs, b, c_val)
        finite = np.isfinite(v)
        v, qgrid = v[finite], qs[finite]
        e_lo, e_hi = np.min(v), np.max(v)
        if not np.isfinite(e_lo):
            e_lo = -1e6
        for energy in np.linspace(e_lo, e_hi, energies_per_c):
            above = v - energy
            sign_changes = np.nonzero(above[:-1] * above[1:] < 0.0)[0]
            cells += 1
            if len(sign_changes) >= 2:
                i, j = sign_changes[0], sign_changes[-1]
                interior = above[i + 1 : j + 1]
                if len(interior) and np.min(interior) < 0.0:
                    return RigidityVerdict(
                        a=data.a, rigid=False,
                        reason=f"bounded sublevel component at c={c_val}, E={energy}",
                        cells_checked=cells,
                    )
    return RigidityVerdict(a=data.a, rigid=True, reason="rigid: constants only",
                           cells_checked=cells)
