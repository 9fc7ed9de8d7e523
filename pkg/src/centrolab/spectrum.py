"""Deformations of multiply traversed circles: trivial directions, the
exponent spectrum admitting non-trivial infinitesimal deformations, and the
second-order (Hessian) classification per harmonic.

Everything arithmetic is exact: spectrum membership and degeneracy are
rational conditions and are decided in Fraction arithmetic, floats appear
only in quadrature-backed helpers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import fourier

__all__ = [
    "PoleError",
    "SpectrumValue",
    "Classification",
    "DeformationReport",
    "as_exact",
    "trivial_basis",
    "linearized_curvature",
    "spectrum_exponent",
    "spectrum_hits",
    "hessian_coefficient",
    "classify_circle",
    "second_variation_third",
    "deformation_generator",
    "deformation_report",
    "degenerate_exponents",
]

ONE_THIRD = Fraction(1, 3)
DEFAULT_HARMONIC_CUTOFF = 64


class PoleError(ValueError):
    """k = 2n: the denominator of the spectrum expression vanishes."""


def as_exact(a) -> Fraction:
    """Exact rational from ints, Fractions, strings, and decimal floats.

    Floats go through their shortest decimal representation, so a slider
    value like 1.4 means exactly 7/5; use Fraction directly for ratios that
    have no finite decimal form.
    """
    if isinstance(a, Fraction):
        return a
    if isinstance(a, int):
        return Fraction(a)
    if isinstance(a, float):
        return Fraction(str(a))
    return Fraction(str(a))


@dataclass(frozen=True)
class SpectrumValue:
    a: Fraction
    k: int
    n: int
    trivial: bool  # k = n: the deformation is a parallel translation (a = 1/3)


def spectrum_exponent(k: int, n: int = 1) -> SpectrumValue:
    """Exponent (k^2 - 2n^2) / (k^2 - 4n^2) admitting a non-trivial
    infinitesimal deformation of the n-fold circle at harmonic k.

    k = 2n is a pole (no such exponent); k = n gives 1/3 but the deformation
    is a translation and is flagged trivial.
    """
    k, n = int(k), int(n)
    if k < 1 or n < 1:
        raise ValueError("harmonic and covering must be positive integers")
    if k == 2 * n:
        raise PoleError(f"k = 2n = {k}: the spectrum expression has a pole")
    a = Fraction(k * k - 2 * n * n, k * k - 4 * n * n)
    return SpectrumValue(a=a, k=k, n=n, trivial=(k == n))


def spectrum_hits(a, k_max: int = 100, n_max: int = 20) -> list[SpectrumValue]:
    """All (k, n) with spectrum_exponent(k, n) == a in the scan range."""
    target = as_exact(a)
    hits = []
    for n in range(1, n_max + 1):
        for k in range(1, k_max + 1):
            if k == 2 * n:
                continue
            value = spectrum_exponent(k, n)
            if value.a == target:
                hits.append(value)
    return hits


def trivial_basis(n: int, a=None):
    """Generators of deformations that do not leave the critical family.

    The unimodular-action directions are always {1, cos 2t, sin 2t}; exactly
    at a = 1/3 translations contribute {cos t, sin t} as well.
    """
    if n < 1:
        raise ValueError("covering must be >= 1")
    basis = [
        ("1", lambda t: np.ones_like(np.asarray(t, dtype=float))),
        ("cos 2t", lambda t: np.cos(2 * np.asarray(t, dtype=float))),
        ("sin 2t", lambda t: np.sin(2 * np.asarray(t, dtype=float))),
    ]
    if a is not None and as_exact(a) == ONE_THIRD:
        basis.append(("cos t", lambda t: np.cos(np.asarray(t, dtype=float))))
        basis.append(("sin t", lambda t: np.sin(np.asarray(t, dtype=float))))
    return basis


def linearized_curvature(f: np.ndarray, period: float = 2.0 * np.pi) -> np.ndarray:
    """First-order curvature response 2 f' + f'''/2 of a circle deformation."""
    f = np.asarray(f, dtype=float)
    d1 = fourier.spectral_derivative(f, period, 1, fourier.NOISE_FLOOR)
    d3 = fourier.spectral_derivative(f, period, 3, fourier.NOISE_FLOOR)
    return 2.0 * d1 + 0.5 * d3


def hessian_coefficient(a, k: int) -> Fraction:
    """Per-harmonic second-order coefficient (k^2-4)((a-1)k^2 - 2(2a-1))/8.

    The quadratic form of the functional additionally carries the overall
    prefactor a, which is reported separately by classify_circle.
    """
    a = as_exact(a)
    k = int(k)
    return Fraction(1, 8) * (k * k - 4) * ((a - 1) * k * k - 2 * (2 * a - 1))


def degenerate_exponents(k_max: int = DEFAULT_HARMONIC_CUTOFF) -> list[Fraction]:
    """The sequence (k^2-2)/(k^2-4) for k = 1, 3, 4, ... (converges to 1)."""
    return [Fraction(k * k - 2, k * k - 4) for k in range(1, k_max + 1) if k != 2]


@dataclass(frozen=True)
class Classification:
    a: Fraction
    verdict: str               # local-min | local-max | indefinite | degenerate
    kernel_harmonic: int | None
    harmonics_checked: int

    def __str__(self):
        if self.verdict == "degenerate":
            return f"degenerate (kernel harmonic k={self.kernel_harmonic})"
        return self.verdict


def classify_circle(a, k_max: int = DEFAULT_HARMONIC_CUTOFF) -> Classification:
    """Sign pattern of a * h_k over harmonics k in {1, 3, 4, ...}.

    k = 2 is the unimodular direction and never counts.  Exact outcome:
    local minimum for a < 0 and a > 7/5, local maximum on (0, 1/3),
    degenerate exactly on the sequence (k^2-2)/(k^2-4), indefinite otherwise.
    """
    a = as_exact(a)
    if a == 0:
        raise ValueError("exponent a = 0 is invalid")
    kernel = None
    signs = set()
    checked = 0
    for k in [1] + list(range(3, k_max + 1)):
        h = hessian_coefficient(a, k)
        checked += 1
        quad = a * h
        if quad == 0:
            kernel = k
        else:
            signs.add(1 if quad > 0 else -1)
    if kernel is not None:
        return Classification(a=a, verdict="degenerate", kernel_harmonic=kernel,
                              harmonics_checked=checked)
    # the bracket (a-1)k^2 - 2(2a-1) is k-monotone, so the truncated sign
    # pattern decides the verdict; cross-check against the exact band rules
    if signs == {1}:
        verdict = "local-min"
    elif signs == {-1}:
        verdict = "local-max"
    else:
        verdict = "indefinite"
    expected = (
        "local-min" if (a < 0 or a > Fraction(7, 5))
        else "local-max" if 0 < a < ONE_THIRD
        else "indefinite"
    )
    if verdict != expected:
        raise AssertionError(
            f"sign scan ({verdict}) disagrees with the closed-form bands ({expected})"
        )
    return Classification(a=a, verdict=verdict, kernel_harmonic=None,
                          harmonics_checked=checked)


def second_variation_third(f: np.ndarray, period: float = 2.0 * np.pi) -> float:
    """The a = 1/3 second-variation integral of (4 f'^2 - 5 f''^2 + f'''^2).

    Non-negative for every smooth periodic f, zero exactly on first
    harmonics; evaluated by spectral quadrature.
    """
    f = np.asarray(f, dtype=float)
    d1 = fourier.spectral_derivative(f, period, 1, fourier.NOISE_FLOOR)
    d2 = fourier.spectral_derivative(f, period, 2, fourier.NOISE_FLOOR)
    d3 = fourier.spectral_derivative(f, period, 3, fourier.NOISE_FLOOR)
    integrand = 4.0 * d1**2 - 5.0 * d2**2 + d3**2
    return float(fourier.periodic_integral(integrand, period))


def deformation_generator(a, k: int, n: int = 1):
    """Basis pair of deformation functions at an on-spectrum exponent.

    The linearized-curvature operator maps cos(kt/n) and sin(kt/n) onto the
    resonant harmonic, so modulo its kernel (the trivial directions) the
    generator space is spanned by exactly these two functions.
    """
    a = as_exact(a)
    value = spectrum_exponent(k, n)
    if value.a != a:
        raise ValueError(
            f"a = {a} is off-spectrum for (k, n) = ({k}, {n}); expected {value.a}"
        )
    if value.trivial:
        raise ValueError(
            "k = n generates parallel translations (trivial deformations at a = 1/3)"
        )
    kappa = k / n

    def f_cos(t):
        return np.cos(kappa * np.asarray(t, dtype=float))

    def f_sin(t):
        return np.sin(kappa * np.asarray(t, dtype=float))

    return f_cos, f_sin


@dataclass(frozen=True)
class DeformationReport:
    a: Fraction
    n: int
    spectrum_hits: tuple
    hessian: dict
    classification: Classification


def deformation_report(a, n: int = 1, k_max: int = 24) -> DeformationReport:
    target = as_exact(a)
    hits = tuple(
        spectrum_exponent(k, n)
        for k in range(1, k_max + 1)
        if k != 2 * n and spectrum_exponent(k, n).a == target
    )
    hessian = {k: hessian_coefficient(target, k) for k in [1] + list(range(3, k_max + 1))}
    return DeformationReport(
        a=target,
        n=n,
        spectrum_hits=hits,
        hessian=hessian,
        classification=classify_circle(target),
    )


def deformed_circle_functional(a, f, eps: float, n_samples: int = 2048) -> float:
    """Curvature-power functional at the renormalized deformed unit circle.

    The circle moves along v = -(f'/2) circle + f circle'; the moved curve is
    reparameterized back to centroaffine form and rescaled so the constraint
    equals 2*pi exactly, which realizes the constrained functional whose
    second derivative in eps is 2 * a * (2*pi) * sum_k h_k |c_k|^2.

    Rescaling a centroaffine curve of period T to period 2*pi multiplies the
    functional by (2*pi/T)**(1-2a): the curve scales by s and the parameter by
    s**2, so the curvature scales by s**-4 and the measure by s**2.
    """
    from .geometry import functional_b, reparameterize_centroaffine

    a_val = float(as_exact(a))
    two_pi = 2.0 * np.pi

    def path(t):
        t = np.asarray(t, dtype=float)
        circle = np.column_stack([np.cos(t), np.sin(t)])
        tangent = np.column_stack([-np.sin(t), np.cos(t)])
        fv = np.asarray(f(t), dtype=float)
        dt = 1e-6
        fp = (np.asarray(f(t + dt)) - np.asarray(f(t - dt))) / (2 * dt)
        v = -0.5 * fp[:, None] * circle + fv[:, None] * tangent
        return circle + eps * v

    curve = reparameterize_centroaffine(path, two_pi, n_samples)
    scale2 = two_pi / curve.period
    return float(scale2 ** (1.0 - 2.0 * a_val)) * functional_b(curve, a_val)


def hessian_fd_second_derivative(a, k: int, eps: float = 0.01) -> float:
    """Central second difference of the constrained functional along sin(kt)."""
    f = lambda t: np.sin(k * np.asarray(t, dtype=float))
    plus = deformed_circle_functional(a, f, eps)
    minus = deformed_circle_functional(a, f, -eps)
    base = deformed_circle_functional(a, f, 0.0)
    return (plus + minus - 2.0 * base) / eps**2
