"""Verification suites: each acceptance-grade property as a runnable check.

Every suite returns a structured result with one line per check; the command-line
``verify`` command and the acceptance test module both run these, so there is
exactly one implementation of every criterion.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fourier
from .geometry import bracket, estimate_curvature, functional_a, functional_b
from .hill import monodromy, reconstruct, rotation_tune
from .orbits import (
    constant_profile_orbit,
    default_integration_constant,
    find_orbit_with_period,
    half_period,
    orbit_from_energy,
    rigidity_scan,
)
from .profile_ode import critical_point, exponent_data, potential, residual_third_order
from .spectrum import (
    as_exact,
    classify_circle,
    hessian_coefficient,
    hessian_fd_second_derivative,
    second_variation_third,
    spectrum_exponent,
)
from .third_case import (
    isoperimetric_ratio,
    random_convex_curve,
    rigidity_check_third,
    rounded_quartic,
    third_profile,
)

TWO_PI = 2.0 * np.pi

# rotation-fraction targets hitting the figure captions' winding numbers;
# the attainable fractions live between 1/sqrt(2(b+2)) and 1/2
GALLERY_TARGETS = {
    2.0: Fraction(3, 7),
    -1.0: Fraction(5, 9),
    0.2: Fraction(4, 5),
}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class SuiteResult:
    suite: str
    checks: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed, detail: str = "") -> None:
        self.checks.append(Check(name=name, passed=bool(passed), detail=detail))

    def lines(self):
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            yield f"  [{status}] {c.name}" + (f"  ({c.detail})" if c.detail else "")

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "runtime_seconds": self.runtime,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.runtime = time.perf_counter() - start
        return result

    return wrapper


@_timed
def suite_circle_invariants() -> SuiteResult:
    """n-fold circles reconstructed from constant curvature n^2."""
    result = SuiteResult("circle-invariants")
    for n in (1, 2, 3):
        orbit = constant_profile_orbit(2.0, curvature=float(n * n), period=TWO_PI)
        curve = reconstruct(orbit, covering=1).curve
        norm_dev = float(np.max(np.abs(bracket(curve.points, curve.velocity()) - 1.0)))
        result.add(f"n={n} normalization", norm_dev < 1e-7, f"dev {norm_dev:.2e}")
        area = functional_a(curve)
        result.add(f"n={n} constraint = 2*pi", abs(area - TWO_PI) < 1e-8,
                   f"err {abs(area - TWO_PI):.2e}")
        for a in (1.0 / 3.0, 2.0):
            value = functional_b(curve, a)
            expected = TWO_PI * float(n) ** (2 * a)
            rel = abs(value - expected) / expected
            result.add(f"n={n} functional a={a:.4g}", rel < 1e-7, f"rel {rel:.2e}")
    return result


@_timed
def suite_rigidity() -> SuiteResult:
    """Constants-only window versus existence outside it."""
    result = SuiteResult("rigidity")
    for a in (0.6, 0.75, 0.9):
        verdict = rigidity_scan(a)
        result.add(f"a={a} window", verdict.rigid and verdict.reason == "rigid: constants only",
                   verdict.reason)
    for a in (-1.0, 0.2, 2.0):
        data = exponent_data(a)
        c = default_integration_constant(data.b)
        well = critical_point(data.b, c)
        bottom = float(potential(well.point.Q, data.b, c))
        target = 2.0 * half_period(data.b, c, bottom * 0.8)
        orbit = find_orbit_with_period(a, target)
        resid = residual_third_order(orbit.F, orbit.period, a)
        result.add(
            f"a={a} non-constant orbit",
            (not orbit.is_constant) and resid < 1e-6,
            f"residual {resid:.2e}",
        )
    return result


@_timed
def suite_spectrum() -> SuiteResult:
    result = SuiteResult("spectrum")
    expected = {
        (1, 1): Fraction(1, 3),
        (3, 1): Fraction(7, 5),
        (4, 1): Fraction(7, 6),
        (5, 1): Fraction(23, 21),
    }
    for (k, n), value in expected.items():
        got = spectrum_exponent(k, n).a
        result.add(f"exponent (k={k}, n={n}) = {value}", got == value, str(got))
    in_window = [
        (k, n)
        for n in range(1, 21)
        for k in range(1, 101)
        if k != 2 * n and Fraction(1, 2) <= spectrum_exponent(k, n).a <= 1
    ]
    result.add("no spectrum value in [1/2, 1] (k<=100, n<=20)", not in_window,
               f"violations: {in_window[:3]}")
    data = exponent_data(Fraction(7, 5))
    freq = float(np.sqrt(2.0 * (data.b + 2.0)))
    result.add("frequency at a=7/5 equals 3", abs(freq - 3.0) < 1e-12,
               f"err {abs(freq - 3.0):.2e}")
    return result


@_timed
def suite_hessian() -> SuiteResult:
    result = SuiteResult("hessian")
    expected = {
        -1: "local-min",
        0.2: "local-max",
        2: "local-min",
        1.2: "indefinite",
    }
    for a, verdict in expected.items():
        got = classify_circle(a)
        result.add(f"a={a} -> {verdict}", got.verdict == verdict, got.verdict)
    deg = classify_circle(Fraction(7, 5))
    result.add("a=7/5 degenerate with kernel k=3",
               deg.verdict == "degenerate" and deg.kernel_harmonic == 3, str(deg))
    a, k = 2, 3
    predicted = float(2 * np.pi * as_exact(a) * hessian_coefficient(a, k) * k * k)
    measured = hessian_fd_second_derivative(a, k, eps=0.01)
    same_sign = measured * predicted > 0
    rel = abs(measured - predicted) / abs(predicted)
    result.add("finite-difference Hessian along sin 3t at a=2",
               same_sign and rel < 0.02,
               f"measured {measured:.4f} vs {predicted:.4f} (rel {rel:.3%})")
    return result


@_timed
def suite_third_rigidity() -> SuiteResult:
    result = SuiteResult("third-rigidity")
    for eps, n in ((0.2, 1), (0.4, 1), (0.3, 2)):
        profile = third_profile(eps, n, C=0.15)
        report = rigidity_check_third(profile.G)
        result.add(
            f"profile (eps={eps}, n={n}) reconstructs to a circle",
            report.verdict == "conic" and report.deviation < 1e-5 and report.winding == n,
            f"deviation {report.deviation:.2e}, winding {report.winding}",
        )
    rng = np.random.default_rng(123)
    t = fourier.closed_grid(TWO_PI, 1024)
    worst = -np.inf
    for _ in range(50):
        coeffs = rng.normal(size=10)
        f = sum(
            coeffs[2 * j] * np.cos((j + 1) * t) + coeffs[2 * j + 1] * np.sin((j + 1) * t)
            for j in range(5)
        )
        value = second_variation_third(f)
        worst = max(worst, -value)
    result.add("second variation nonnegative on 50 random deformations",
               worst < 1e-10, f"max negativity {worst:.2e}")
    kernel = max(
        abs(second_variation_third(np.sin(t))),
        abs(second_variation_third(1.7 * np.cos(t) - 0.3 * np.sin(t))),
    )
    result.add("second variation vanishes on first harmonics", kernel < 1e-10,
               f"max {kernel:.2e}")
    return result


@_timed
def suite_isoperimetric(seed: int = 0) -> SuiteResult:
    result = SuiteResult("isoperimetric")
    rng = np.random.default_rng(seed)
    t = fourier.closed_grid(TWO_PI, 4096)
    for i in range(3):
        axes = rng.uniform(0.5, 3.0, size=2)
        angle = rng.uniform(0, np.pi)
        center = rng.uniform(-1, 1, size=2)
        ca, sa = np.cos(angle), np.sin(angle)
        x = axes[0] * np.cos(t)
        y = axes[1] * np.sin(t)
        pts = np.column_stack([center[0] + ca * x - sa * y, center[1] + sa * x + ca * y])
        ratio = isoperimetric_ratio(pts)
        result.add(f"random ellipse {i + 1} ratio = 1", abs(ratio - 1.0) < 1e-8,
                   f"err {abs(ratio - 1):.2e}")
    ratio = isoperimetric_ratio(rounded_quartic())
    result.add("rounded quartic strictly below 1", ratio < 1 - 1e-4, f"ratio {ratio:.6f}")
    return result


@_timed
def suite_monodromy(seed: int = 0) -> SuiteResult:
    result = SuiteResult("monodromy")
    rng = np.random.default_rng(seed)
    worst_det = 0.0
    for _ in range(20):
        a = float(rng.choice([2.0, 3.0, -1.0, -2.0, 0.2, 0.3]))
        data = exponent_data(a)
        c = default_integration_constant(data.b)
        well = critical_point(data.b, c)
        bottom = float(potential(well.point.Q, data.b, c))
        orbit = orbit_from_energy(data, c, bottom * (1 - rng.uniform(0.05, 0.8)))
        worst_det = max(worst_det, abs(monodromy(orbit).determinant - 1.0))
    result.add("transfer-matrix determinant = 1 on 20 random profiles",
               worst_det < 1e-9, f"worst |det-1| = {worst_det:.2e}")
    for a, target in GALLERY_TARGETS.items():
        orbit = rotation_tune(a, target)
        closed = reconstruct(orbit, covering=target.denominator)
        result.add(
            f"gallery a={a}: winding {target.numerator} over {target.denominator} periods",
            closed.closure_defect < 1e-6 and closed.winding == target.numerator,
            f"closure defect {closed.closure_defect:.2e}",
        )
    return result


@_timed
def suite_symmetry() -> SuiteResult:
    from .exponent_orbit import (
        BRANCHES,
        INFINITY,
        ThreeTermEquation,
        compose_branches,
        orbit_of_a,
        s3_table,
        three_term_residual,
        transform_solution,
        variable_change,
    )

    result = SuiteResult("symmetry")
    got1 = orbit_of_a(1)
    result.add("orbit of a=1 is {1, 1/2, 0}",
               got1 == {Fraction(1), Fraction(1, 2), Fraction(0)}, str(got1))
    got13 = orbit_of_a(Fraction(1, 3))
    result.add("orbit of a=1/3 is {1/3, 2/3, inf}",
               got13 == {Fraction(1, 3), Fraction(2, 3), INFINITY}, str(got13))

    data = exponent_data(2.0)
    orbit = orbit_from_energy(data, 3.0, -1.0)
    eq = ThreeTermEquation(u=-4.0 / (data.b + 1.0), v=2.0 * orbit.constants.c,
                           w=orbit.constants.d, q=data.b + 2.0)
    worst = 0.0
    for branch in BRANCHES:
        new_eq, tau, G, dG = transform_solution(eq, branch, orbit.grid, orbit.F,
                                                dF_dt=orbit.Fp)
        worst = max(worst, three_term_residual(G, dG, new_eq))
    result.add("transported solutions satisfy the induced equations",
               worst < 1e-7, f"worst residual {worst:.2e}")

    table = s3_table()
    law_ok = all(
        variable_change(table[(f, g)], Fraction(5, 7)).q_new
        == variable_change(g, variable_change(f, Fraction(5, 7)).q_new).q_new
        for f in BRANCHES
        for g in BRANCHES
    )
    ident_ok = all(table[("q", b)] == b and table[(b, "q")] == b for b in BRANCHES)
    inverse_ok = all(any(table[(b, o)] == "q" for o in BRANCHES) for b in BRANCHES)
    result.add("branch composition realizes the 6-element group exactly",
               law_ok and ident_ok and inverse_ok, "")
    return result


@_timed
def suite_zoo() -> SuiteResult:
    from .fourspace import (
        arclength_reparametrize,
        latitude_circle,
        legendrian_lift,
        push_off,
        sign_zoo,
    )

    result = SuiteResult("zoo")
    zoo = sign_zoo()
    for pattern in ("++", "+-", "-+", "--"):
        curve, cert = zoo[pattern]
        gap = float(np.max(np.abs(curve.points[0] - curve.points[-1])))
        result.add(
            f"pattern {pattern} certified",
            cert.pattern == pattern
            and cert.margin_star > 1e-3
            and cert.margin_conv > 1e-3
            and gap < 1e-8,
            f"margins ({cert.margin_star:.2e}, {cert.margin_conv:.2e})",
        )
    lift = legendrian_lift(latitude_circle(np.pi / 3, covers=4))
    resid = float(np.max(np.abs(lift.star_values())))
    result.add("Legendrian residual of the lift", resid < 1e-8, f"{resid:.2e}")
    unit = arclength_reparametrize(lift)
    eps = 2.5e-3
    ratio = push_off(unit, eps, +1).star_values() / eps
    err = float(np.max(np.abs(ratio + 2.0))) / 2.0
    result.add("push-off leading coefficient -> -2 (within 5%)", err < 0.05,
               f"rel err {err:.3%} at eps={eps}")
    return result


SUITES = {
    "circle-invariants": suite_circle_invariants,
    "rigidity": suite_rigidity,
    "spectrum": suite_spectrum,
    "hessian": suite_hessian,
    "third-rigidity": suite_third_rigidity,
    "isoperimetric": suite_isoperimetric,
    "monodromy": suite_monodromy,
    "symmetry": suite_symmetry,
    "zoo": suite_zoo,
}


def run_suite(name: str) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    return SUITES[name]()


def run_all():
    return [run_suite(name) for name in SUITES]
