"""Plane-curve primitives: the area-form bracket, the constraint and curvature
functionals, centroaffine reparameterization, and curvature estimation.

A curve enters the lab as a ``CentroaffineCurve``: a closed positively
oriented plane curve sampled uniformly in the parameter that normalizes
``[curve, curve'] = 1``.  In that parameterization the curve satisfies a
Hill equation and everything else in the package is built on top of its
scalar curvature profile ``p = [curve', curve''] > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fourier

__all__ = [
    "GeometryError",
    "NotClosedError",
    "NotStarShapedError",
    "ConvexityError",
    "NormalizationError",
    "bracket",
    "CentroaffineCurve",
    "CurvatureProfile",
    "functional_a",
    "functional_b",
    "reparameterize_centroaffine",
    "estimate_curvature",
    "apply_sl2",
    "translate_renormalized",
]

TOL_NORM = 1e-7      # sup deviation of [curve, curve'] from 1
TOL_CLOSE = 1e-6     # endpoint gap for closed sample arrays
DEFAULT_SAMPLES_PER_2PI = 2048


class GeometryError(ValueError):
    pass


class NotClosedError(GeometryError):
    pass


class NotStarShapedError(GeometryError):
    def __init__(self, message, parameter=None):
        super().__init__(message)
        self.parameter = parameter


class ConvexityError(GeometryError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NormalizationError(GeometryError):
    pass


def bracket(u, v):
    """Area form of two plane vectors: ``u_x v_y - u_y v_x``.

    Accepts single vectors or arrays of shape (..., 2); bilinear and
    antisymmetric by construction.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


@dataclass(frozen=True)
class CurvatureProfile:
    """Strictly positive periodic curvature samples on a closed uniform grid."""

    values: np.ndarray
    period: float

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if not np.all(np.isfinite(values)):
            raise ConvexityError("curvature profile contains non-finite values")
        bad = np.nonzero(values <= 0.0)[0]
        if bad.size:
            raise ConvexityError(
                f"curvature profile is not positive at sample {bad[0]}", index=int(bad[0])
            )
        fourier.check_closed(values, max(TOL_CLOSE, 1e-9 * values.max()), "curvature profile")

    @property
    def grid(self) -> np.ndarray:
        return fourier.closed_grid(self.period, len(self.values) - 1)


@dataclass(frozen=True)
class CentroaffineCurve:
    """Closed plane curve in its centroaffine parameterization.

    ``points`` is an (N+1, 2) array over one full period, closing sample
    included.  Optional first and second derivative samples, when supplied by
    a construction that knows them exactly, take precedence over numerical
    differentiation.
    """

    period: float
    points: np.ndarray
    velocities: np.ndarray | None = None
    accelerations: np.ndarray | None = None

    def __post_init__(self):
        points = np.ascontiguousarray(self.points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2:
            raise GeometryError("points must be an (N+1, 2) array")
        if not np.all(np.isfinite(points)):
            raise GeometryError("curve samples must be finite")
        if self.period <= 0:
            raise GeometryError("period must be positive")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)
        for name in ("velocities", "accelerations"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.ascontiguousarray(arr, dtype=float)
                if arr.shape != points.shape:
                    raise GeometryError(f"{name} must match the points array shape")
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)
        scale = max(1.0, np.abs(points).max())
        try:
            fourier.check_closed(points, TOL_CLOSE * scale, "curve samples")
        except ValueError as exc:
            raise NotClosedError(str(exc)) from None
        normalization = bracket(self.points, self.velocity())
        err = np.abs(normalization - 1.0).max()
        if err > TOL_NORM:
            raise NormalizationError(
                f"[curve, curve'] deviates from 1 by {err:.3e} (tolerance {TOL_NORM:.1e})"
            )
        p = bracket(self.velocity(), self.acceleration())
        bad = np.nonzero(p <= 0.0)[0]
        if bad.size:
            raise ConvexityError(
                f"[curve', curve''] is not positive at sample {bad[0]}", index=int(bad[0])
            )

    @property
    def grid(self) -> np.ndarray:
        return fourier.closed_grid(self.period, len(self.points) - 1)

    @property
    def samples(self) -> np.ndarray:
        """(N+1, 3) array of (t, x, y) rows."""
        return np.column_stack([self.grid, self.points])

    def velocity(self) -> np.ndarray:
        if self.velocities is not None:
            return self.velocities
        return fourier.fd_derivative(self.points, self.period, 1)

    def acceleration(self) -> np.ndarray:
        if self.accelerations is not None:
            return self.accelerations
        if self.velocities is not None:
            return fourier.fd_derivative(self.velocities, self.period, 1)
        return fourier.fd_derivative(self.points, self.period, 2)

    def curvature(self) -> CurvatureProfile:
        return estimate_curvature(self)

    def evaluator(self):
        """Trigonometric interpolant of the curve, for off-grid evaluation."""
        return fourier.trig_interpolator(self.points, self.period)


def functional_a(curve: CentroaffineCurve) -> float:
    """Constraint functional: integral of [curve, curve'] over one period.

    Equals the period (twice the enclosed area) for a normalized curve.
    """
    values = bracket(curve.points, curve.velocity())
    return float(fourier.periodic_integral(values, curve.period))


def functional_b(curve: CentroaffineCurve, exponent: float) -> float:
    """Curvature-power functional: integral of p(t)**exponent over one period."""
    if exponent == 0:
        raise ValueError("exponent 0 makes the functional the constant period")
    p = bracket(curve.velocity(), curve.acceleration())
    bad = np.nonzero(p <= 0.0)[0]
    if bad.size:
        raise ConvexityError(
            f"curvature is not positive at sample {bad[0]}", index=int(bad[0])
        )
    return float(fourier.periodic_integral(p**float(exponent), curve.period))


def estimate_curvature(curve: CentroaffineCurve, method: str = "auto") -> CurvatureProfile:
    """Curvature profile p = [curve', curve''].

    ``auto`` uses stored derivative samples when the construction supplied
    them, otherwise fourth-order finite differences; ``fd4`` and ``spectral``
    force numerical differentiation of the position samples.
    """
    if method == "auto" and curve.velocities is not None:
        vel, acc = curve.velocity(), curve.acceleration()
    elif method == "spectral":
        vel = fourier.spectral_derivative(curve.points, curve.period, 1, fourier.NOISE_FLOOR)
        acc = fourier.spectral_derivative(curve.points, curve.period, 2, fourier.NOISE_FLOOR)
    else:
        vel = fourier.fd_derivative(curve.points, curve.period, 1)
        acc = fourier.fd_derivative(curve.points, curve.period, 2)
    p = bracket(vel, acc)
    bad = np.nonzero(p <= 0.0)[0]
    if bad.size:
        raise ConvexityError(
            f"estimated curvature is not positive at sample {bad[0]}", index=int(bad[0])
        )
    # exact closure guards round-off asymmetry between the two endpoints
    p = p.copy()
    p[-1] = p[0]
    return CurvatureProfile(values=p, period=curve.period)


def _as_path_callable(path, path_period):
    """Normalize reparameterization input to (callable, period).

    Accepts a callable s -> (x, y) together with its period, or an ordered
    closed polyline as an (K, 2) / (K+1, 2) array, which is interpolated by a
    periodic cubic spline in chord length.
    """
    if callable(path):
        if path_period is None:
            raise ValueError("path_period is required for callable input")
        return path, float(path_period)

    pts = np.asarray(path, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise GeometryError("polyline must be an (K, 2) array")
    if np.max(np.abs(pts[0] - pts[-1])) > 1e-9 * max(1.0, np.abs(pts).max()):
        pts = np.vstack([pts, pts[:1]])
    chords = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    if np.any(chords == 0.0):
        keep = np.concatenate([[True], chords > 0.0])
        pts = pts[keep]
        chords = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(chords)])
    total = s[-1]

    from scipy.interpolate import CubicSpline

    spline = CubicSpline(s, pts, bc_type="periodic", axis=0)
    return (lambda u: spline(np.mod(u, total))), total


def reparameterize_centroaffine(
    path,
    path_period: float | None = None,
    n_samples: int | None = None,
) -> CentroaffineCurve:
    """Resample a positively oriented star-shaped curve so [curve, curve'] = 1.

    The input is either a closed polyline or a callable parameterization.  The
    output period equals twice the signed area enclosed (counting multiplicity
    for multiply traversed inputs).

    Raises
    ------
    NotStarShapedError
        if [curve, d curve] changes sign along the input.
    """
    gamma, s_period = _as_path_callable(path, path_period)

    n_fine = 4 * (n_samples or DEFAULT_SAMPLES_PER_2PI)
    s_fine = fourier.closed_grid(s_period, n_fine)
    pts_fine = np.asarray(gamma(s_fine), dtype=float)
    vel_fine = fourier.spectral_derivative(pts_fine, s_period, 1)
    weight = bracket(pts_fine, vel_fine)
    if np.min(weight) <= 0.0:
        k = int(np.argmin(weight))
        raise NotStarShapedError(
            f"[curve, d curve] is not positive at parameter {s_fine[k]:.6g} "
            f"(value {weight[k]:.3e}); the input is not star-shaped and positively oriented",
            parameter=float(s_fine[k]),
        )

    period = float(fourier.periodic_integral(weight, s_period))
    t_of_s = fourier.spectral_antiderivative(weight, s_period)

    if n_samples is None:
        n_samples = max(256, int(round(DEFAULT_SAMPLES_PER_2PI * period / (2 * np.pi))))
        n_samples += n_samples % 2
    t_targets = fourier.closed_grid(period, n_samples)[:-1]

    # invert the strictly increasing map t(s) (its derivative is the positive
    # star-shape weight): spline interpolation of the fine nodes plus Newton
    from scipy.interpolate import CubicSpline

    t_spline = CubicSpline(s_fine, t_of_s)
    s_guess = np.interp(t_targets, t_of_s, s_fine)
    for _ in range(8):
        step = (t_spline(s_guess) - t_targets) / t_spline(s_guess, 1)
        s_guess = np.clip(s_guess - step, 0.0, s_period)
        if np.max(np.abs(step)) < 1e-15 * s_period:
            break

    pts = np.asarray(gamma(s_guess), dtype=float)
    pts = fourier.close_up(pts)
    vel = fourier.spectral_derivative(pts, period, 1)
    acc = fourier.spectral_derivative(pts, period, 2)
    return CentroaffineCurve(period=period, points=pts, velocities=vel, accelerations=acc)


def apply_sl2(curve: CentroaffineCurve, matrix) -> CentroaffineCurve:
    """Act pointwise by a unimodular 2x2 matrix; normalization is preserved."""
    matrix = np.asarray(matrix, dtype=float)
    det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
    if abs(det - 1.0) > 1e-12:
        raise GeometryError(f"matrix determinant {det} is not 1")
    transform = lambda arr: arr @ matrix.T
    return CentroaffineCurve(
        period=curve.period,
        points=transform(curve.points),
        velocities=None if curve.velocities is None else transform(curve.velocities),
        accelerations=None if curve.accelerations is None else transform(curve.accelerations),
    )


def translate_renormalized(curve: CentroaffineCurve, offset) -> CentroaffineCurve:
    """Translate a curve and restore the centroaffine parameterization.

    The new parameter solves dt_new/dt = [curve + offset, curve']; the phase
    is fixed so parameter 0 maps to parameter 0.  The period is unchanged
    because the enclosed area is translation invariant.
    """
    offset = np.asarray(offset, dtype=float)
    base = curve.evaluator()
    shifted = lambda s: base(s) + offset
    return reparameterize_centroaffine(
        shifted, curve.period, n_samples=len(curve.points) - 1
    )
