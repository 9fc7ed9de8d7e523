import numpy as np
import pytest

from centrolab import fourier
from centrolab.geometry import estimate_curvature, functional_a
from centrolab.third_case import (
    NotCriticalProfileError,
    circle_oracle,
    fit_circle,
    isoperimetric_ratio,
    random_convex_curve,
    rigidity_check_third,
    rounded_quartic,
    solve_phase,
    third_profile,
)

TWO_PI = 2 * np.pi


# ---------------------------------------------------------------- phase

def test_solve_phase_zero_eps():
    t = fourier.closed_grid(TWO_PI, 64)
    phi = solve_phase(0.0, 2, 0.3, t)
    assert np.max(np.abs(phi - (2 * t + 0.3))) < 1e-14


def test_solve_phase_fixed_point_oracle():
    # independent oracle: plain fixed-point iteration phi <- eps*cos(phi)
    # for t = 0, n = 1, C = 0, eps = 0.3
    phi = 0.0
    for _ in range(200):
        phi = 0.3 * np.cos(phi)
    solved = solve_phase(0.3, 1, 0.0, np.array([0.0]))[0]
    assert solved == pytest.approx(phi, abs=1e-12)
    assert solved == pytest.approx(0.28767, abs=1e-5)


def test_solve_phase_winding_identity():
    t = fourier.closed_grid(TWO_PI, 256)
    phi = solve_phase(0.5, 2, 0.7, t)
    assert phi[-1] - phi[0] == pytest.approx(2 * TWO_PI, abs=1e-12)


def test_solve_phase_monotone_and_consistent():
    t = fourier.closed_grid(TWO_PI, 1024)
    phi = solve_phase(0.9, 1, -0.4, t)
    assert np.all(np.diff(phi) > 0)
    resid = phi - 0.9 * np.cos(phi) - (t - 0.4)
    assert np.max(np.abs(resid)) < 1e-13


def test_solve_phase_rejects_large_eps():
    with pytest.raises(ValueError):
        solve_phase(1.0, 1, 0.0, np.array([0.0]))


# ---------------------------------------------------------------- profiles

def test_third_profile_structure():
    prof = third_profile(0.4, 1)
    assert prof.mu == pytest.approx(1.0)
    assert prof.eps == pytest.approx(0.4)
    assert np.min(prof.G) > 0
    assert prof.G[0] == pytest.approx(prof.G[-1], abs=1e-12)
    # G = mu + eps*sin(phi) pointwise
    assert np.max(np.abs(prof.G - (prof.mu + prof.eps * np.sin(prof.phi)))) < 1e-12


def test_third_profile_two_critical_values():
    prof = third_profile(0.35, 1)
    Gp = fourier.spectral_derivative(prof.G, TWO_PI, 1, fourier.NOISE_FLOOR)
    signs = np.sign(Gp[:-1])
    signs = signs[signs != 0]
    changes = int(np.sum(signs != np.roll(signs, 1)))
    assert changes == 2


def test_third_profile_first_integral_chain():
    # (G G')^2 = (c/2) G^2 + 2 G + d must hold, and with F = G^2 the
    # first-order form (F')^2 = 8 sqrt(F) + 2 c F + 4 d follows
    prof = third_profile(0.3, 2)
    G = prof.G
    Gp = fourier.spectral_derivative(G, TWO_PI, 1, fourier.NOISE_FLOOR)
    lhs = (G * Gp) ** 2
    design = np.column_stack([0.5 * G**2, np.ones_like(G)])
    coef, *_ = np.linalg.lstsq(design, lhs - 2 * G, rcond=None)
    c_fit, d_fit = coef
    assert c_fit < 0
    assert np.max(np.abs(lhs - (0.5 * c_fit * G**2 + 2 * G + d_fit))) < 1e-8
    F = G**2
    Fp = fourier.spectral_derivative(F, TWO_PI, 1, fourier.NOISE_FLOOR)
    resid = Fp**2 - (8 * np.sqrt(F) + 2 * c_fit * F + 4 * d_fit)
    assert np.max(np.abs(resid)) < 1e-8


# ---------------------------------------------------------------- oracle

def test_circle_oracle_unit_circle():
    curve, G = circle_oracle(1, 0.0, 0.0)
    assert np.max(np.abs(np.linalg.norm(curve.points, axis=1) - 1.0)) < 1e-12
    assert np.max(np.abs(G - 1.0)) < 1e-12
    p = estimate_curvature(curve).values
    assert np.max(np.abs(p - 1.0)) < 1e-10


def test_circle_oracle_translated_profile_matches_estimate():
    curve, G = circle_oracle(1, 0.3, 0.0)
    p_closed_form = G**-3.0
    p_est = estimate_curvature(curve, method="fd4").values
    assert np.max(np.abs(p_est - p_closed_form)) < 1e-7


def test_circle_oracle_two_fold():
    curve, G = circle_oracle(2, 0.2, 0.1)
    assert functional_a(curve) == pytest.approx(TWO_PI, abs=1e-9)
    # winding 2 around the center, radius 2**-0.5
    center = np.array([0.2, 0.1])
    radii = np.linalg.norm(curve.points - center, axis=1)
    assert np.max(np.abs(radii - 2**-0.5)) < 1e-10
    from centrolab.hill import winding_number

    assert winding_number(curve) == pytest.approx(2.0, abs=1e-8)


def test_circle_oracle_rejects_origin_outside():
    with pytest.raises(ValueError):
        circle_oracle(1, 0.8, 0.7)


# ---------------------------------------------------------------- rigidity

@pytest.mark.parametrize("eps,n", [(0.2, 1), (0.4, 1), (0.3, 2)])
def test_rigidity_synthetic_profiles(eps, n):
    prof = third_profile(eps, n, C=0.25)
    report = rigidity_check_third(prof.G)
    assert report.verdict == "conic"
    assert report.deviation < 1e-5
    assert report.winding == n
    assert report.radius == pytest.approx(n**-0.5, abs=1e-6)


def test_rigidity_oracle_roundtrip():
    curve, G = circle_oracle(1, 0.3, 0.0)
    report = rigidity_check_third(G)
    assert report.verdict == "conic"
    assert report.deviation < 1e-6
    assert report.radius == pytest.approx(1.0, abs=1e-8)


def test_rigidity_constant_profile():
    report = rigidity_check_third(np.ones(1025))
    assert report.verdict == "conic"
    assert report.winding == 1
    assert np.linalg.norm(report.center) < 1e-8


def test_rigidity_rejects_noncritical():
    t = fourier.closed_grid(TWO_PI, 1024)
    G = 1.0 + 0.2 * np.sin(t) + 0.1 * np.sin(2 * t)
    with pytest.raises(NotCriticalProfileError):
        rigidity_check_third(G)


def test_fit_circle_exact():
    t = np.linspace(0, TWO_PI, 200)
    pts = np.column_stack([3 + 2 * np.cos(t), -1 + 2 * np.sin(t)])
    center, radius, dev = fit_circle(pts)
    assert np.allclose(center, [3, -1], atol=1e-12)
    assert radius == pytest.approx(2.0, abs=1e-12)
    assert dev < 1e-12


# ---------------------------------------------------------------- isoperimetric

def test_isoperimetric_circle_and_ellipse():
    t = fourier.closed_grid(TWO_PI, 2048)
    circle = np.column_stack([np.cos(t), np.sin(t)])
    assert isoperimetric_ratio(circle) == pytest.approx(1.0, abs=1e-10)
    ellipse = np.column_stack([0.4 + 2 * np.cos(t), -0.7 + 0.5 * np.sin(t)])
    assert isoperimetric_ratio(ellipse) == pytest.approx(1.0, abs=1e-8)


def test_isoperimetric_parameterization_independent():
    # same geometric ellipse under a smooth reparameterization
    t = fourier.closed_grid(TWO_PI, 4096)
    s = t + 0.3 * np.sin(t)
    ellipse = np.column_stack([2 * np.cos(s), np.sin(s)])
    assert isoperimetric_ratio(ellipse) == pytest.approx(1.0, abs=1e-8)


def test_isoperimetric_quartic_strictly_below_one():
    ratio = isoperimetric_ratio(rounded_quartic())
    assert ratio < 1 - 1e-4
    assert ratio > 0.5


def test_isoperimetric_random_convex_bounded_by_one():
    rng = np.random.default_rng(17)
    for _ in range(50):
        pts = random_convex_curve(rng)
        assert isoperimetric_ratio(pts) <= 1 + 1e-9


def test_isoperimetric_rejects_nonconvex():
    t = fourier.closed_grid(TWO_PI, 1024)
    r = 1 + 0.5 * np.cos(3 * t)  # strongly wavy: loses convexity
    pts = np.column_stack([r * np.cos(t), r * np.sin(t)])
    with pytest.raises(Exception):
        isoperimetric_ratio(pts)
