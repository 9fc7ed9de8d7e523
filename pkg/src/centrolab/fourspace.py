"""Sign-certified curve constructions in the standard symplectic R^4.

Closed curves on the three-sphere tangent to the standard contact planes
(omega(curve, curve') = 0) arise as horizontal lifts of spherical curves
through the Hopf fibration; pushing them off along J curve' and conjugating
coordinates realizes every sign combination of omega(curve, curve') and
omega(curve', curve'').  Areas of spherical curves are measured in the
fibration normalization (half the solid angle), the quantity whose 2*pi
multiples admit closed lifts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import fourier

__all__ = [
    "LiftError",
    "PushOffError",
    "Curve4D",
    "SphericalCurve",
    "SignCertificate",
    "InflectionReport",
    "omega4",
    "apply_complex_structure",
    "hopf_projection",
    "latitude_circle",
    "kinked_latitude",
    "spherical_signed_area",
    "geodesic_curvature",
    "legendrian_lift",
    "arclength_reparametrize",
    "detect_inflections",
    "push_off",
    "conjugate",
    "certify_signs",
    "sign_zoo",
]

LEGENDRIAN_TOL = 1e-8
CLOSURE_TOL = 1e-8
DEFAULT_MARGIN_FLOOR = 1e-3


class LiftError(RuntimeError):
    def __init__(self, message, area_defect=None):
        super().__init__(message)
        self.area_defect = area_defect


class PushOffError(RuntimeError):
    pass


def omega4(u, v):
    """Standard symplectic pairing on coordinates (x1, y1, x2, y2)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return (
        u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
        + u[..., 2] * v[..., 3] - u[..., 3] * v[..., 2]
    )


def apply_complex_structure(u):
    """Coordinatewise multiplication by i: (x1,y1,x2,y2) -> (-y1,x1,-y2,x2)."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    out[..., 0] = -u[..., 1]
    out[..., 1] = u[..., 0]
    out[..., 2] = -u[..., 3]
    out[..., 3] = u[..., 2]
    return out


def hopf_projection(z):
    """Fibration S3 -> S2: (z1, z2) -> (2 z1 conj(z2), |z1|^2 - |z2|^2)."""
    z = np.asarray(z, dtype=float)
    x1, y1, x2, y2 = z[..., 0], z[..., 1], z[..., 2], z[..., 3]
    return np.stack(
        [
            2.0 * (x1 * x2 + y1 * y2),
            2.0 * (y1 * x2 - x1 * y2),
            x1 * x1 + y1 * y1 - x2 * x2 - y2 * y2,
        ],
        axis=-1,
    )


def _projection_jacobian(z):
    x1, y1, x2, y2 = z
    return np.array(
        [
            [2 * x2, 2 * y2, 2 * x1, 2 * y1],
            [-2 * y2, 2 * x2, 2 * y1, -2 * x1],
            [2 * x1, 2 * y1, -2 * x2, -2 * y2],
        ]
    )


@dataclass(frozen=True)
class Curve4D:
    """Closed immersed curve in R^4 on a uniform closed sample grid."""

    period: float
    points: np.ndarray
    velocities: np.ndarray | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 4:
            raise ValueError("points must be an (N+1, 4) array")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        scale = max(1.0, float(np.abs(pts).max()))
        fourier.check_closed(pts, CLOSURE_TOL * scale * 10, "curve samples")
        if self.velocities is not None:
            vel = np.ascontiguousarray(self.velocities, dtype=float)
            if vel.shape != pts.shape:
                raise ValueError("velocities must match the points array")
            vel.setflags(write=False)
            object.__setattr__(self, "velocities", vel)
        speeds = np.linalg.norm(self.velocity(), axis=1)
        if np.min(speeds) <= 1e-10 * scale:
            raise ValueError("curve is not immersed: vanishing velocity sample")

    @property
    def grid(self) -> np.ndarray:
        return fourier.closed_grid(self.period, len(self.points) - 1)

    def velocity(self) -> np.ndarray:
        if self.velocities is not None:
            return self.velocities
        return fourier.spectral_derivative(self.points, self.period, 1, fourier.NOISE_FLOOR)

    def acceleration(self) -> np.ndarray:
        if self.velocities is not None:
            return fourier.spectral_derivative(self.velocities, self.period, 1, fourier.NOISE_FLOOR)
        return fourier.spectral_derivative(self.points, self.period, 2, fourier.NOISE_FLOOR)

    def star_values(self) -> np.ndarray:
        return omega4(self.points, self.velocity())

    def convexity_values(self) -> np.ndarray:
        return omega4(self.velocity(), self.acceleration())

    def refined(self, factor: int = 4) -> "Curve4D":
        return Curve4D(
            period=self.period,
            points=fourier.resample_closed(self.points, factor * (len(self.points) - 1)),
        )


@dataclass(frozen=True)
class SphericalCurve:
    """Closed curve on the unit two-sphere (uniform closed sample grid)."""

    period: float
    points: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError("points must be an (N+1, 3) array")
        radius_err = float(np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)))
        if radius_err > 1e-9:
            raise ValueError(f"curve leaves the unit sphere by {radius_err:.2e}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        fourier.check_closed(pts, 1e-9, "spherical curve samples")

    @property
    def grid(self) -> np.ndarray:
        return fourier.closed_grid(self.period, len(self.points) - 1)

    def velocity(self) -> np.ndarray:
        return fourier.spectral_derivative(self.points, self.period, 1, fourier.NOISE_FLOOR)

    def acceleration(self) -> np.ndarray:
        return fourier.spectral_derivative(self.points, self.period, 2, fourier.NOISE_FLOOR)


def latitude_circle(colatitude: float, covers: int = 1, n_samples: int = 2048) -> SphericalCurve:
    """Circle of constant colatitude traversed ``covers`` times."""
    t = fourier.closed_grid(2.0 * np.pi, n_samples)
    phi = covers * t
    st, ct = np.sin(colatitude), np.cos(colatitude)
    pts = np.column_stack([st * np.cos(phi), st * np.sin(phi), np.full_like(phi, ct)])
    return SphericalCurve(period=2.0 * np.pi, points=pts)


def spherical_signed_area(curve: SphericalCurve) -> float:
    """Signed area in the fibration normalization: half the solid angle.

    Computed as (1/2) * integral of (1 - z) d(longitude); closed horizontal
    lifts exist exactly when this value is a multiple of 2*pi.  The curve
    must stay away from the south pole (longitude chart).
    """
    pts = curve.points
    vel = curve.velocity()
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    planar = x * x + y * y
    if np.min(planar) < 1e-12:
        raise ValueError("curve passes through a pole; area chart is singular")
    dphi = (x * vel[:, 1] - y * vel[:, 0]) / planar
    return 0.5 * float(fourier.periodic_integral((1.0 - z) * dphi, curve.period))


def geodesic_curvature(curve: SphericalCurve) -> np.ndarray:
    """Geodesic curvature samples: det(position, velocity, acceleration)/speed^3."""
    pts, vel, acc = curve.points, curve.velocity(), curve.acceleration()
    speed = np.linalg.norm(vel, axis=1)
    triple = np.einsum("ij,ij->i", np.cross(pts, vel), acc)
    return triple / speed**3


def kinked_latitude(
    colatitude: float = np.pi / 3,
    n_kinks: int = 8,
    area_multiple: int = 1,
    n_samples: int = 4096,
    loop_range: tuple[float, float] = (0.05, 1.2),
) -> SphericalCurve:
    """Latitude circle decorated with convex loops tuned to enclose 2*pi*k.

    The loops ride an epicycle around the moving base point; their geodesic
    radius is found by bisection on the enclosed fibration area.  The result
    keeps strictly positive geodesic curvature (certified numerically), so
    its lift is inflection-free.
    """
    target = 2.0 * np.pi * area_multiple
    t = fourier.closed_grid(2.0 * np.pi, n_samples)

    def build(rho: float) -> SphericalCurve:
        # base point at the tilted pole of a rolling frame; the epicycle makes
        # n_kinks positively-oriented loops per revolution
        cb, sb = np.cos(colatitude), np.sin(colatitude)
        cr, sr = np.cos(rho), np.sin(rho)
        inner = n_kinks * t
        # R_z(t) R_y(colatitude) R_z(inner) applied to (sin rho, 0, cos rho)
        vx = sr * np.cos(inner)
        vy = sr * np.sin(inner)
        vz = np.full_like(t, cr)
        wx = cb * vx + sb * vz
        wy = vy
        wz = -sb * vx + cb * vz
        pts = np.column_stack(
            [
                np.cos(t) * wx - np.sin(t) * wy,
                np.sin(t) * wx + np.cos(t) * wy,
                wz,
            ]
        )
        return SphericalCurve(period=2.0 * np.pi, points=pts)

    lo, hi = loop_range
    area_lo = spherical_signed_area(build(lo))
    area_hi = spherical_signed_area(build(hi))
    if not (min(area_lo, area_hi) <= target <= max(area_lo, area_hi)):
        raise LiftError(
            f"target area {target:.4f} outside the reachable range "
            f"[{area_lo:.4f}, {area_hi:.4f}] for {n_kinks} loops"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        area_mid = spherical_signed_area(build(mid))
        if (area_mid - target) * (area_lo - target) <= 0:
            hi = mid
        else:
            lo, area_lo = mid, area_mid
        if hi - lo < 1e-14:
            break
    curve = build(0.5 * (lo + hi))
    kg = geodesic_curvature(curve)
    if np.min(np.abs(kg)) < 1e-6 or np.min(kg) * np.max(kg) < 0:
        raise LiftError(
            f"kinked curve lost positive geodesic curvature (min |kg| = "
            f"{np.min(np.abs(kg)):.2e}); try more loops"
        )
    return curve


def legendrian_lift(
    spherical: SphericalCurve,
    area_multiple: int | None = None,
    start_phase: float = 0.0,
    area_tol: float = 1e-6,
    n_samples: int | None = None,
) -> Curve4D:
    """Horizontal lift through the fibration: a closed Legendrian curve in S3.

    Requires the signed area to be a multiple of 2*pi (the lift holonomy);
    the defect otherwise is reported in the raised LiftError.  The start
    point sits over the first sample, rotated by ``start_phase`` along the
    fiber.
    """
    area = spherical_signed_area(spherical)
    k = area_multiple if area_multiple is not None else int(round(area / (2.0 * np.pi)))
    defect = area - 2.0 * np.pi * k
    if abs(defect) > area_tol:
        raise LiftError(
            f"signed area {area:.8f} is not a multiple of 2*pi (defect "
            f"{defect:.3e}); adjust the curve (e.g. insert kinks) first",
            area_defect=defect,
        )

    pos = fourier.trig_interpolator(spherical.points, spherical.period)
    vel = fourier.trig_interpolator(
        fourier.spectral_derivative(spherical.points, spherical.period, 1, fourier.NOISE_FLOOR),
        spherical.period,
    )

    n0 = np.asarray(pos(0.0), dtype=float)
    n0 = n0 / np.linalg.norm(n0)
    theta = float(np.arccos(np.clip(n0[2], -1.0, 1.0)))
    phi = float(np.arctan2(n0[1], n0[0]))
    half = 0.5 * theta
    z0 = np.array(
        [np.cos(half), 0.0, np.sin(half) * np.cos(phi), -np.sin(half) * np.sin(phi)]
    )
    if start_phase:
        c, s = np.cos(start_phase), np.sin(start_phase)
        rot = np.array([[c, -s, 0, 0], [s, c, 0, 0], [0, 0, c, -s], [0, 0, s, c]])
        z0 = rot @ z0

    def rhs(s, z):
        jac = _projection_jacobian(z)
        fiber = apply_complex_structure(z)
        mat = np.vstack([jac, fiber])
        target = np.concatenate([np.asarray(vel(s), dtype=float), [0.0]])
        return np.linalg.solve(mat, target)

    sol = solve_ivp(
        rhs, (0.0, spherical.period), z0,
        method="DOP853", rtol=1e-11, atol=1e-13, dense_output=True,
    )
    if not sol.success:
        raise LiftError(f"lift integration failed: {sol.message}")
    n_out = n_samples or (len(spherical.points) - 1)
    ts = fourier.closed_grid(spherical.period, n_out)
    Z = sol.sol(ts).T
    gap = float(np.max(np.abs(Z[-1] - Z[0])))
    if gap > CLOSURE_TOL * 10:
        raise LiftError(
            f"lift failed to close (gap {gap:.3e}); holonomy defect or "
            "insufficient integration accuracy",
            area_defect=defect,
        )
    Z[-1] = Z[0]
    vels = np.array([rhs(s, z) for s, z in zip(ts, Z)])
    vels[-1] = vels[0]
    return Curve4D(period=spherical.period, points=Z, velocities=vels)


def arclength_reparametrize(curve: Curve4D, n_samples: int | None = None) -> Curve4D:
    """Resample by arc length; the total length becomes the new period."""
    speed = np.linalg.norm(curve.velocity(), axis=1)
    length_of_t = fourier.spectral_antiderivative(speed, curve.period)
    total = float(length_of_t[-1])
    n_out = n_samples or (len(curve.points) - 1)
    targets = fourier.closed_grid(total, n_out)[:-1]
    from scipy.interpolate import CubicSpline

    t_fine = curve.grid
    inv = CubicSpline(length_of_t, t_fine)
    s_params = inv(targets)
    pos = fourier.trig_interpolator(curve.points, curve.period)
    pts = fourier.close_up(np.asarray(pos(s_params), dtype=float))
    # the reparameterized velocity is the unit tangent, carried over exactly
    vel_interp = fourier.trig_interpolator(curve.velocity(), curve.period)
    vel = np.asarray(vel_interp(s_params), dtype=float)
    vel = fourier.close_up(vel / np.linalg.norm(vel, axis=1)[:, None])
    return Curve4D(period=total, points=pts, velocities=vel)


@dataclass(frozen=True)
class InflectionReport:
    parameters: tuple
    totally_geodesic: bool
    margin: float  # min |omega(curve', curve'')| when no inflections


def detect_inflections(curve: Curve4D, legendrian: bool = False) -> InflectionReport:
    """Roots of omega(curve', curve'') along the curve.

    For arc-length Legendrian curves the roots coincide with the vanishing of
    curve + curve'' (cross-checked); a great circle has curve + curve'' = 0
    identically and is flagged totally geodesic instead of listing roots.
    """
    if legendrian:
        star = float(np.max(np.abs(curve.star_values())))
        if star > LEGENDRIAN_TOL * 10:
            raise ValueError(f"curve is not Legendrian: max |omega(c, c')| = {star:.2e}")
    conv = curve.convexity_values()
    acc = curve.acceleration()
    tangential = curve.points + acc  # for unit-speed spherical curves
    if legendrian:
        speed = np.linalg.norm(curve.velocity(), axis=1)
        unit_speed = float(np.max(np.abs(speed - 1.0))) < 1e-6
        if unit_speed and float(np.max(np.linalg.norm(tangential, axis=1))) < 1e-6:
            return InflectionReport(parameters=(), totally_geodesic=True, margin=0.0)

    sign_changes = np.nonzero(conv[:-1] * conv[1:] < 0.0)[0]
    ts = curve.grid
    roots = []
    for i in sign_changes:
        t0, t1 = ts[i], ts[i + 1]
        c0, c1 = conv[i], conv[i + 1]
        roots.append(float(t0 - c0 * (t1 - t0) / (c1 - c0)))
    margin = float(np.min(np.abs(conv))) if not roots else 0.0
    return InflectionReport(parameters=tuple(roots), totally_geodesic=False, margin=margin)


def push_off(curve: Curve4D, eps: float, direction: int = +1) -> Curve4D:
    """Transverse curve gamma + direction * eps * J gamma', renormalized to S3.

    Requires a Legendrian input in (approximately) arc-length
    parameterization.  Direction +1 produces omega(result, result') close to
    -2*eps (negatively transverse), direction -1 the positive counterpart;
    the sign is certified and a failed margin suggests a smaller eps.
    """
    if direction not in (+1, -1):
        raise ValueError("direction must be +1 or -1")
    if eps < 0:
        raise ValueError("eps must be non-negative")
    star = float(np.max(np.abs(curve.star_values())))
    if star > LEGENDRIAN_TOL * 10:
        raise ValueError(f"push-off input must be Legendrian (got {star:.2e})")
    speed = np.linalg.norm(curve.velocity(), axis=1)
    if float(np.max(np.abs(speed - 1.0))) > 1e-6:
        raise ValueError("push-off input must be arc-length parameterized")
    raw = curve.points + direction * eps * apply_complex_structure(curve.velocity())
    norms = np.linalg.norm(raw, axis=1)
    pts = raw / norms[:, None]
    out = Curve4D(period=curve.period, points=pts)
    if eps == 0.0:
        return out
    star_new = out.star_values()
    expected = -float(direction)
    if np.min(expected * star_new) <= 0.0:
        raise PushOffError(
            f"push-off sign margin failed (min |omega(c, c')| = "
            f"{np.min(np.abs(star_new)):.2e}); try a smaller eps"
        )
    return out


def conjugate(curve: Curve4D) -> Curve4D:
    """Complex conjugation (z1, z2) -> (conj z1, conj z2): flips both y's.

    Preserves the Legendrian condition and reverses the sign of
    omega(curve', curve'').
    """
    flip = np.array([1.0, -1.0, 1.0, -1.0])
    return Curve4D(
        period=curve.period,
        points=curve.points * flip,
        velocities=None if curve.velocities is None else curve.velocities * flip,
    )


@dataclass(frozen=True)
class SignCertificate:
    sign_star: str      # "+", "-", "0", or "mixed"
    sign_conv: str
    margin_star: float
    margin_conv: float
    floor: float

    @property
    def pattern(self) -> str:
        return self.sign_star + self.sign_conv


def _classify(values: np.ndarray, floor: float, zero_tol: float) -> tuple[str, float]:
    low, high = float(values.min()), float(values.max())
    if max(abs(low), abs(high)) < zero_tol:
        return "0", max(abs(low), abs(high))
    if low > floor:
        return "+", low
    if high < -floor:
        return "-", -high
    return "mixed", 0.0


def certify_signs(curve: Curve4D, floor: float = DEFAULT_MARGIN_FLOOR,
                  zero_tol: float = LEGENDRIAN_TOL) -> SignCertificate:
    """Grid-uniform sign verdicts with margins, re-checked at 4x refinement."""
    verdicts = []
    for candidate in (curve, curve.refined(4)):
        star, m_star = _classify(candidate.star_values(), floor, zero_tol)
        conv, m_conv = _classify(candidate.convexity_values(), floor, zero_tol)
        verdicts.append((star, conv, m_star, m_conv))
    (s1, c1, ms1, mc1), (s2, c2, ms2, mc2) = verdicts
    if (s1, c1) != (s2, c2):
        raise RuntimeError(
            f"sign certificate unstable under refinement: {(s1, c1)} vs {(s2, c2)}"
        )
    return SignCertificate(
        sign_star=s1, sign_conv=c1,
        margin_star=min(ms1, ms2), margin_conv=min(mc1, mc2), floor=floor,
    )


def sign_zoo(eps: float = 0.05, colatitude: float = np.pi / 3, covers: int = 4,
             n_samples: int = 2048):
    """Four closed certified curves covering the sign patterns ++, +-, -+, --.

    Base: the inflection-free Legendrian lift of a multiply covered latitude
    circle (fibration area 2*pi).  Push-off direction controls the sign of
    omega(curve, curve'); pre-conjugation controls omega(curve', curve'').
    On a margin failure the push-off size is halved before giving up.
    """
    base_sphere = latitude_circle(colatitude, covers, n_samples)
    lift = legendrian_lift(base_sphere)
    lift = arclength_reparametrize(lift)
    flipped = conjugate(lift)

    zoo = {}
    for pattern, (source, direction) in {
        "--": (lift, +1),
        "+-": (lift, -1),
        "-+": (flipped, +1),
        "++": (flipped, -1),
    }.items():
        attempt = eps
        last_error = None
        for _ in range(3):
            try:
                pushed = push_off(source, attempt, direction)
                cert = certify_signs(pushed)
                if cert.pattern != pattern:
                    raise PushOffError(
                        f"certified pattern {cert.pattern} != requested {pattern}"
                    )
                zoo[pattern] = (pushed, cert)
                break
            except (PushOffError, RuntimeError) as err:
                last_error = err
                attempt *= 0.5
        else:
            raise PushOffError(f"could not certify pattern {pattern}: {last_error}")
    return zoo
