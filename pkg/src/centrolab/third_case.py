"""The exponent 1/3: closed-form profile machinery and the rigidity check.

At a = 1/3 the profile square root G = sqrt(F) obeys (G G')^2 = (c/2) G^2 +
2 G + d, which forces G = mu + eps*sin(phi) with the phase solving the scalar
equation phi - (eps/mu) cos(phi) = n t + C.  Every such profile reconstructs
to a parallel-translated multiply traversed circle; this module solves the
phase equation, builds translated-circle oracles, verifies the rigidity
statement numerically, and computes the affine isoperimetric ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import fourier
from .geometry import CentroaffineCurve, ConvexityError, bracket

__all__ = [
    "NotCriticalProfileError",
    "ThirdCaseProfile",
    "ThirdRigidityReport",
    "solve_phase",
    "third_profile",
    "circle_oracle",
    "rigidity_check_third",
    "isoperimetric_ratio",
    "rounded_quartic",
    "random_convex_curve",
    "fit_circle",
]

TWO_PI = 2.0 * np.pi
CONIC_DEVIATION_TOL = 1e-5


class NotCriticalProfileError(ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class ThirdCaseProfile:
    """Closed-form critical profile G = mu + eps*sin(phi(t)) at a = 1/3.

    ``eps`` is the raw half-oscillation (M - m)/2 < mu; the phase equation is
    solved with the normalized ratio eps/mu.  ``phi`` gains 2*pi*n over one
    period.
    """

    mu: float
    eps: float
    n: int
    C: float
    phi: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        for name in ("phi", "G"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (0.0 <= self.eps < self.mu):
            raise ValueError("need 0 <= eps < mu for a positive profile")

    @property
    def grid(self) -> np.ndarray:
        return fourier.closed_grid(TWO_PI, len(self.G) - 1)

    def curvature_values(self) -> np.ndarray:
        """p = G**-3 on the grid."""
        return self.G**-3.0


def solve_phase(eps: float, n: int, C: float, grid) -> np.ndarray:
    """Solve phi - eps*cos(phi) = n*t + C pointwise (normalized eps in [0, 1)).

    The left side is strictly increasing in phi, so each value has a unique
    solution; Newton steps are safeguarded by the bracket rhs -+ eps.
    """
    if not (0.0 <= eps < 1.0):
        raise ValueError("normalized eps must lie in [0, 1)")
    t = np.asarray(grid, dtype=float)
    rhs = n * t + C
    phi = rhs + eps * np.cos(rhs)  # one fixed-point sweep as the seed
    lo, hi = rhs - eps, rhs + eps
    for _ in range(60):
        g = phi - eps * np.cos(phi) - rhs
        step = g / (1.0 + eps * np.sin(phi))
        phi = phi - step
        clip = (phi < lo) | (phi > hi)
        if np.any(clip):
            phi = np.clip(phi, lo, hi)
        if np.max(np.abs(step)) < 1e-15:
            break
    return phi


def third_profile(eps: float, n: int, C: float = 0.0, n_samples: int = 2048) -> ThirdCaseProfile:
    """Critical profile with normalized oscillation eps and winding n.

    The scale of G is pinned by the closed-form constraint: mu = n**(-2/3).
    """
    if n < 1:
        raise ValueError("winding n must be a positive integer")
    t = fourier.closed_grid(TWO_PI, n_samples)
    phi = solve_phase(eps, n, C, t)
    mu = float(n) ** (-2.0 / 3.0)
    G = mu * (1.0 + eps * np.sin(phi))
    return ThirdCaseProfile(mu=mu, eps=mu * eps, n=n, C=C, phi=phi, G=G)


def circle_oracle(n: int, A: float, B: float, n_samples: int = 2048):
    """Parallel-translated n-fold circle in centroaffine parameterization.

    Returns the curve (with exact derivative samples) and its G = p**(-1/3)
    profile.  The circle has radius n**(-1/2) and center (A, B); the origin
    must stay inside, i.e. sqrt(A^2+B^2) < n**(-1/2).
    """
    if n < 1:
        raise ValueError("winding n must be a positive integer")
    radius = float(n) ** (-0.5)
    rho = float(np.hypot(A, B))
    if rho >= radius:
        raise ValueError(
            f"center offset {rho:.4g} >= radius {radius:.4g}: curve is not "
            "star-shaped around the origin"
        )
    amp = np.sqrt(n) * rho  # normalized oscillation of the phase equation
    t = fourier.closed_grid(TWO_PI, n_samples)
    if rho == 0.0:
        beta = n * t
        theta = 0.0
    else:
        # rotate so the translation enters the phase equation canonically:
        # beta = alpha + theta with sin(theta) = A/rho, cos(theta) = B/rho
        theta = float(np.arctan2(A / rho, B / rho))
        beta0 = theta  # alpha(0) = 0
        C = float(beta0 - amp * np.cos(beta0))
        beta = solve_phase(amp, n, C, t)
    alpha = beta - theta
    pts = np.column_stack([A + radius * np.cos(alpha), B + radius * np.sin(alpha)])
    rate = n / (1.0 + amp * np.sin(beta))  # d(alpha)/dt
    vel = radius * np.column_stack([-np.sin(alpha), np.cos(alpha)]) * rate[:, None]
    p = n * n * (1.0 + amp * np.sin(beta)) ** -3.0
    acc = -p[:, None] * pts
    curve = CentroaffineCurve(period=TWO_PI, points=pts, velocities=vel, accelerations=acc)
    G = p ** (-1.0 / 3.0)
    return curve, G


def fit_circle(points: np.ndarray):
    """Circle fit: algebraic least squares plus one geometric refinement.

    Returns (center, radius, max geometric deviation).
    """
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    design = np.column_stack([x, y, np.ones_like(x)])
    target = x * x + y * y
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    cx, cy = 0.5 * coef[0], 0.5 * coef[1]
    radius = np.sqrt(max(coef[2] + cx * cx + cy * cy, 0.0))
    # one Gauss-Newton step on the geometric distance
    for _ in range(2):
        dx, dy = x - cx, y - cy
        dist = np.hypot(dx, dy)
        resid = dist - radius
        jac = np.column_stack([-dx / dist, -dy / dist, -np.ones_like(dist)])
        step, *_ = np.linalg.lstsq(jac, -resid, rcond=None)
        cx, cy, radius = cx + step[0], cy + step[1], radius + step[2]
    dx, dy = x - cx, y - cy
    deviation = float(np.max(np.abs(np.hypot(dx, dy) - radius)))
    return np.array([cx, cy]), float(radius), deviation


@dataclass(frozen=True)
class ThirdRigidityReport:
    verdict: str            # "conic" or "not-conic"
    deviation: float
    center: np.ndarray
    radius: float
    winding: int
    mu: float
    eps: float
    C: float
    fit_c: float
    fit_d: float
    residual: float
    curve: CentroaffineCurve


def rigidity_check_third(G, period: float = TWO_PI, residual_tol: float = 1e-6) -> ThirdRigidityReport:
    """Verify that a critical a = 1/3 profile reconstructs to a translated circle.

    Fits the first-integral constants in (GG')^2 = (c/2) G^2 + 2G + d (the
    precondition that the profile is critical), extracts (mu, eps, n, C),
    rebuilds the curve through the reconstruction equation starting from the
    frame of the predicted model circle, and measures the geometric deviation
    from a freshly fitted circle.
    """
    G = np.asarray(G, dtype=float)
    if np.min(G) <= 0.0:
        raise ValueError("profile must be strictly positive")
    Gp = fourier.spectral_derivative(G, period, 1, fourier.NOISE_FLOOR)
    m, M = float(G.min()), float(G.max())
    mu = 0.5 * (M + m)
    eps_raw = 0.5 * (M - m)

    lhs = (G * Gp) ** 2
    if eps_raw < 1e-9 * mu:
        # constant profile: G = n**(-2/3) for the n-fold circle
        n = int(round(float(mu ** (-1.5))))
        c_fit = -2.0 * float(mu * n) ** 2
        d_fit = float(np.mean(lhs - 0.5 * c_fit * G**2 - 2.0 * G))
        residual = 0.0
        eps_norm = 0.0
        C = 0.0
        phi0 = 0.0
    else:
        design = np.column_stack([0.5 * G**2, np.ones_like(G)])
        coef, *_ = np.linalg.lstsq(design, lhs - 2.0 * G, rcond=None)
        c_fit, d_fit = float(coef[0]), float(coef[1])
        residual = float(np.max(np.abs(lhs - (0.5 * c_fit * G**2 + 2.0 * G + d_fit))))
        if residual > residual_tol:
            raise NotCriticalProfileError(
                f"profile does not satisfy the first-integral identity: "
                f"residual {residual:.3e} exceeds {residual_tol:.1e}",
                residual=residual,
            )
        if c_fit >= 0.0:
            raise NotCriticalProfileError(
                f"fitted constant c = {c_fit:.3g} is not negative", residual=residual
            )
        k = np.sqrt(-0.5 * c_fit)
        n = int(round(float(k / mu)))
        if n < 1 or abs(k / mu - n) > 1e-3:
            raise NotCriticalProfileError(
                f"winding k/mu = {k / mu:.6f} is not close to an integer",
                residual=residual,
            )
        eps_norm = eps_raw / mu
        s0 = np.clip((G[0] - mu) / eps_raw, -1.0, 1.0)
        phi0 = float(np.arcsin(s0)) if Gp[0] >= 0 else float(np.pi - np.arcsin(s0))
        C = float(phi0 - eps_norm * np.cos(phi0))

    # model circle: radius n**(-1/2) centered at (0, eps_norm/sqrt(n)); its
    # centroaffine frame at t = 0 sits at phase angle phi0
    radius_model = float(n) ** (-0.5)
    rho = eps_norm * radius_model
    pos0 = np.array([radius_model * np.cos(phi0), rho + radius_model * np.sin(phi0)])
    rate0 = n / (1.0 + eps_norm * np.sin(phi0))
    vel0 = np.array([-radius_model * np.sin(phi0), radius_model * np.cos(phi0)]) * rate0

    p_eval = fourier.trig_interpolator(G**-3.0, period)

    def rhs(t, y):
        p = p_eval(np.mod(t, period))
        return [y[1], -p * y[0], y[3], -p * y[2]]

    sol = solve_ivp(
        rhs, (0.0, period), [pos0[0], vel0[0], pos0[1], vel0[1]],
        method="DOP853", rtol=1e-12, atol=1e-14, dense_output=True,
    )
    ts = fourier.closed_grid(period, min(len(G) - 1, 1024))
    Y = sol.sol(ts)
    pts = np.column_stack([Y[0], Y[2]])
    vel = np.column_stack([Y[1], Y[3]])
    curve = CentroaffineCurve(
        period=period,
        points=pts,
        velocities=vel,
        accelerations=-(p_eval(np.mod(ts, period)))[:, None] * pts,
    )
    center, radius, deviation = fit_circle(pts)
    verdict = "conic" if deviation < CONIC_DEVIATION_TOL else "not-conic"
    return ThirdRigidityReport(
        verdict=verdict, deviation=deviation, center=center, radius=radius,
        winding=n, mu=mu, eps=eps_raw, C=C, fit_c=c_fit, fit_d=d_fit,
        residual=residual, curve=curve,
    )


def isoperimetric_ratio(path, path_period: float | None = None, n_samples: int = 4096) -> float:
    """Affine isoperimetric ratio L^3 / (8 pi^2 A) in (0, 1], 1 only for ellipses.

    ``path`` is a strictly convex closed curve in any parameterization: a
    callable with its period, or a closed (K+1, 2) array sampled uniformly in
    its own parameter.  Both ingredient forms ([curve, curve'] ds for the
    area, cbrt([curve', curve'']) ds for the affine length) are quadratures
    over the given parameter.
    """
    if callable(path):
        if path_period is None:
            raise ValueError("path_period is required for callable input")
        t = fourier.closed_grid(float(path_period), n_samples)
        pts = np.asarray(path(t), dtype=float)
        period = float(path_period)
    else:
        pts = np.asarray(path, dtype=float)
        fourier.check_closed(pts, 1e-9 * max(1.0, np.abs(pts).max()), "curve samples")
        period = float(path_period) if path_period is not None else TWO_PI
    vel = fourier.spectral_derivative(pts, period, 1, fourier.NOISE_FLOOR)
    acc = fourier.spectral_derivative(pts, period, 2, fourier.NOISE_FLOOR)
    convexity = bracket(vel, acc)
    bad = np.nonzero(convexity <= 0.0)[0]
    if bad.size:
        raise ConvexityError(
            f"[curve', curve''] is not positive at sample {bad[0]}", index=int(bad[0])
        )
    area = 0.5 * float(fourier.periodic_integral(bracket(pts, vel), period))
    if area <= 0.0:
        raise ValueError("curve must be positively oriented (positive area)")
    length = float(fourier.periodic_integral(np.cbrt(convexity), period))
    return length**3 / (8.0 * np.pi**2 * area)


def rounded_quartic(blend: float = 0.25, n_samples: int = 4096) -> np.ndarray:
    """Convex non-ellipse: the quartic superellipse blended toward a circle.

    The pure boundary x^4 + y^4 = 1 has four points of vanishing affine
    curvature; a small circular blend keeps the curve strictly convex while
    staying far from any ellipse.
    """
    t = fourier.closed_grid(TWO_PI, n_samples)
    shape = (np.cos(t) ** 4 + np.sin(t) ** 4 + blend) / (1.0 + blend)
    r = shape**-0.25
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def random_convex_curve(rng, n_harmonics: int = 4, wiggle: float = 0.08,
                        n_samples: int = 2048) -> np.ndarray:
    """Random smooth strictly convex curve from a truncated support function.

    h(angle) = 1 + small harmonics; the curve is h*normal + h'*tangent, convex
    whenever h + h'' > 0, which the wiggle bound guarantees.
    """
    t = fourier.closed_grid(TWO_PI, n_samples)
    h = np.ones_like(t)
    for k in range(2, 2 + n_harmonics):
        amp = wiggle / (k * k) * rng.uniform(0.2, 1.0)
        phase = rng.uniform(0, TWO_PI)
        h = h + amp * np.cos(k * t + phase)
    hp = fourier.spectral_derivative(h, TWO_PI, 1)
    normal = np.column_stack([np.cos(t), np.sin(t)])
    tangent = np.column_stack([-np.sin(t), np.cos(t)])
    return h[:, None] * normal + hp[:, None] * tangent
