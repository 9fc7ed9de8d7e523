import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings
from hypothesis import strategies as st

from centrolab import fourier
from centrolab.spectrum import (
    Classification,
    PoleError,
    as_exact,
    classify_circle,
    deformation_generator,
    degenerate_exponents,
    hessian_coefficient,
    hessian_fd_second_derivative,
    linearized_curvature,
    second_variation_third,
    spectrum_exponent,
    spectrum_hits,
    trivial_basis,
)

TWO_PI = 2 * np.pi


# ---------------------------------------------------------------- exactness

def test_as_exact_decimal_floats():
    assert as_exact(1.4) == Fraction(7, 5)
    assert as_exact(0.2) == Fraction(1, 5)
    assert as_exact("7/5") == Fraction(7, 5)
    assert as_exact(2) == Fraction(2)


# ---------------------------------------------------------------- spectrum

def test_spectrum_known_values():
    assert spectrum_exponent(1, 1).a == Fraction(1, 3)
    assert spectrum_exponent(3, 1).a == Fraction(7, 5)
    assert spectrum_exponent(4, 1).a == Fraction(7, 6)
    assert spectrum_exponent(5, 1).a == Fraction(23, 21)


def test_spectrum_trivial_flag():
    value = spectrum_exponent(4, 4)
    assert value.a == Fraction(1, 3)
    assert value.trivial


def test_spectrum_pole():
    with pytest.raises(PoleError):
        spectrum_exponent(2, 1)
    with pytest.raises(PoleError):
        spectrum_exponent(10, 5)


def test_spectrum_avoids_rigidity_window():
    for n in range(1, 21):
        for k in range(1, 101):
            if k == 2 * n:
                continue
            a = spectrum_exponent(k, n).a
            assert not (Fraction(1, 2) <= a <= 1)


def test_spectrum_hits_search():
    hits = spectrum_hits(1.4, k_max=20, n_max=5)
    assert any(h.k == 3 and h.n == 1 for h in hits)
    assert spectrum_hits(0.9, k_max=30, n_max=5) == []


def test_linearized_frequency_exact():
    # on-spectrum the response frequency sqrt(2(b+2)) equals k/n exactly
    from centrolab.profile_ode import exponent_data

    for (k, n) in [(3, 1), (5, 2), (7, 3)]:
        a = spectrum_exponent(k, n).a
        b = Fraction(1, 1) / (a - 1)
        freq2 = 2 * (b + 2)
        assert freq2 == Fraction(k, n) ** 2
        data = exponent_data(a)
        assert np.sqrt(2 * (data.b + 2)) == pytest.approx(k / n, abs=1e-12)


# ---------------------------------------------------------------- trivial basis

def test_trivial_basis_counts():
    assert len(trivial_basis(1, a=2)) == 3
    assert len(trivial_basis(1, a=Fraction(1, 3))) == 5
    assert len(trivial_basis(3)) == 3


def test_sin2t_deforms_circle_to_ellipse():
    # the deformation along f = sin 2t lands on the ellipse
    # (1+2e) x^2 + (1-2e) y^2 = 1 up to O(e^2)
    eps = 1e-4
    t = fourier.closed_grid(TWO_PI, 512)
    circle = np.column_stack([np.cos(t), np.sin(t)])
    tangent = np.column_stack([-np.sin(t), np.cos(t)])
    f = np.sin(2 * t)
    fp = 2 * np.cos(2 * t)
    moved = circle + eps * (-0.5 * fp[:, None] * circle + f[:, None] * tangent)
    lhs = (1 + 2 * eps) * moved[:, 0] ** 2 + (1 - 2 * eps) * moved[:, 1] ** 2
    assert np.max(np.abs(lhs - 1.0)) < 10 * eps**2


# ---------------------------------------------------------------- linearized curvature

def test_linearized_curvature_first_harmonic():
    t = fourier.closed_grid(TWO_PI, 512)
    q = linearized_curvature(np.sin(t))
    assert np.max(np.abs(q - 1.5 * np.cos(t))) < 1e-10


def test_linearized_curvature_constant():
    q = linearized_curvature(np.ones(513))
    assert np.max(np.abs(q)) < 1e-12


@pytest.mark.parametrize("k", [2, 3, 5])
def test_linearized_curvature_harmonic_k(k):
    t = fourier.closed_grid(TWO_PI, 1024)
    q = linearized_curvature(np.sin(k * t))
    coeff = 2 * k - k**3 / 2
    assert np.max(np.abs(q - coeff * np.cos(k * t))) < 1e-9


def test_on_spectrum_response_satisfies_harmonic_equation():
    # q'' = -2(b+2) q with frequency k/n exactly for on-spectrum generators
    from centrolab.profile_ode import exponent_data

    k, n = 3, 1
    a = spectrum_exponent(k, n).a
    data = exponent_data(a)
    t = fourier.closed_grid(TWO_PI * n, 2048)
    f_cos, f_sin = deformation_generator(a, k, n)
    for f in (f_cos, f_sin):
        q = linearized_curvature(f(t), TWO_PI * n)
        d2 = fourier.spectral_derivative(q, TWO_PI * n, 2, fourier.NOISE_FLOOR)
        assert np.max(np.abs(d2 + 2 * (data.b + 2) * q)) < 1e-10


# ---------------------------------------------------------------- hessian

def test_hessian_coefficient_values():
    assert hessian_coefficient(Fraction(1, 3), 2) == 0
    assert hessian_coefficient(Fraction(1, 3), 1) == 0
    assert hessian_coefficient(2, 3) == Fraction(15, 8)


def test_classify_circle_bands():
    assert classify_circle(-1).verdict == "local-min"
    assert classify_circle(0.2).verdict == "local-max"
    assert classify_circle(2).verdict == "local-min"
    assert classify_circle(1.2).verdict == "indefinite"
    deg = classify_circle(Fraction(7, 5))
    assert deg.verdict == "degenerate"
    assert deg.kernel_harmonic == 3
    deg13 = classify_circle(Fraction(1, 3))
    assert deg13.verdict == "degenerate"
    assert deg13.kernel_harmonic == 1


def test_degenerate_sequence():
    seq = degenerate_exponents(6)
    assert seq[:4] == [Fraction(1, 3), Fraction(7, 5), Fraction(7, 6), Fraction(23, 21)]
    # converges to 1 from above
    assert abs(seq[-1] - 1) < abs(seq[1] - 1)


@given(st.integers(min_value=3, max_value=60))
def test_degeneracy_matches_classification(k):
    a = Fraction(k * k - 2, k * k - 4)
    result = classify_circle(a, k_max=max(64, k + 1))
    assert result.verdict == "degenerate"
    assert result.kernel_harmonic == k


# ---------------------------------------------------------------- a = 1/3 form

def test_second_variation_first_harmonic_kernel():
    t = fourier.closed_grid(TWO_PI, 1024)
    assert abs(second_variation_third(np.sin(t))) < 1e-10
    assert abs(second_variation_third(1.3 * np.cos(t) + 0.4 * np.sin(t))) < 1e-10
    assert abs(second_variation_third(np.full_like(t, 2.2))) < 1e-12


def test_second_variation_sin3t_value():
    # direct integral: (4*9 - 5*81 + 729) * pi = 360 pi
    t = fourier.closed_grid(TWO_PI, 1024)
    assert second_variation_third(np.sin(3 * t)) == pytest.approx(360 * np.pi, rel=1e-12)


def test_second_variation_nonnegative_random():
    rng = np.random.default_rng(3)
    t = fourier.closed_grid(TWO_PI, 512)
    for _ in range(50):
        coeffs = rng.normal(size=8)
        f = sum(
            coeffs[2 * j] * np.cos((j + 1) * t) + coeffs[2 * j + 1] * np.sin((j + 1) * t)
            for j in range(4)
        )
        assert second_variation_third(f) >= -1e-10


# ---------------------------------------------------------------- generators

def test_deformation_generator_requires_on_spectrum():
    with pytest.raises(ValueError):
        deformation_generator(2, 3, 1)
    with pytest.raises(ValueError):
        deformation_generator(Fraction(1, 3), 4, 4)  # trivial direction
    with pytest.raises(PoleError):
        deformation_generator(Fraction(7, 5), 2, 1)


def test_deformation_generator_span():
    f_cos, f_sin = deformation_generator(Fraction(7, 5), 3, 1)
    t = fourier.closed_grid(TWO_PI, 256)
    assert np.allclose(f_cos(t), np.cos(3 * t))
    assert np.allclose(f_sin(t), np.sin(3 * t))


# ---------------------------------------------------------------- FD cross-check

@pytest.mark.parametrize(
    "a,k",
    [(2, 3), (0.2, 3), (-1, 1)],
)
def test_hessian_fd_cross_check(a, k):
    # the finite-difference second derivative of the constrained functional
    # along sin(kt) equals 2*pi * a * h_k * k^2 (Fourier convention: the
    # coefficient of f' = k cos(kt) is c_k = k/2, and the quadratic form is
    # 2a * 2pi * 2 * h_k |c_k|^2)
    expected = float(2 * np.pi * as_exact(a) * hessian_coefficient(a, k) * k * k)
    measured = hessian_fd_second_derivative(a, k, eps=0.01)
    assert measured == pytest.approx(expected, rel=0.02)


def test_hessian_fd_translated_circle_oracle():
    # independent closed form for k=1: moving the circle by (eps/2) changes
    # the functional to the integral of (1 + (eps/2) sin)^(1-3a) d(angle)
    a = -1.0
    eps = 0.01
    ang = np.linspace(0, TWO_PI, 40001)

    def closed_form(e):
        return np.trapezoid((1 + (e / 2) * np.sin(ang)) ** (1 - 3 * a), ang)

    oracle = (closed_form(eps) + closed_form(-eps) - 2 * closed_form(0.0)) / eps**2
    measured = hessian_fd_second_derivative(a, 1, eps=eps)
    assert measured == pytest.approx(oracle, rel=1e-3)
    assert oracle == pytest.approx(3 * np.pi, rel=1e-4)
