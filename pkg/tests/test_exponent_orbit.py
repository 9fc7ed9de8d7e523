import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given
from hypothesis import strategies as st

from centrolab.exponent_orbit import (
    BRANCHES,
    BranchUnavailableError,
    INFINITY,
    ThreeTermEquation,
    compose_branches,
    orbit_of_a,
    orbit_of_q,
    s3_table,
    solve_three_term,
    three_term_residual,
    transform_solution,
    variable_change,
)


# ---------------------------------------------------------------- orbits

def test_orbit_of_q_collapsed_cases():
    assert orbit_of_q(2) == {Fraction(2), Fraction(1, 2), Fraction(-1)}
    assert orbit_of_q(0) == {Fraction(0), Fraction(1), INFINITY}


def test_orbit_of_q_generic():
    assert orbit_of_q(3) == {
        Fraction(3), Fraction(1, 3), Fraction(-2),
        Fraction(-1, 2), Fraction(3, 2), Fraction(2, 3),
    }


def test_orbit_of_a_special_values():
    assert orbit_of_a(1) == {Fraction(1), Fraction(1, 2), Fraction(0)}
    assert orbit_of_a(Fraction(1, 3)) == {Fraction(1, 3), Fraction(2, 3), INFINITY}


def test_orbit_of_a_generic():
    assert orbit_of_a(2) == {
        Fraction(2), Fraction(-1), Fraction(3, 5),
        Fraction(2, 5), Fraction(3, 4), Fraction(1, 4),
    }


def test_orbit_of_a_rejects_zero():
    with pytest.raises(ValueError):
        orbit_of_a(0)


@given(st.fractions(min_value=-20, max_value=20))
def test_orbit_is_closed_under_the_action(q):
    orbit = orbit_of_q(q)
    for member in orbit:
        assert orbit_of_q(member) == orbit if member is not INFINITY else True


def cross_ratio(z, order):
    a, b, c, d = order
    num = (a - c) * (b - d)
    den = (a - d) * (b - c)
    return num / den


@given(st.fractions(min_value=-30, max_value=30))
def test_orbit_matches_cross_ratio_permutations(lam):
    # the orbit of q equals the set of cross-ratios of four points under
    # permutation, realized on (0, 1, lam, infinity) by the standard values
    if lam in (0, 1):
        return
    from itertools import permutations

    values = {lam, 1 - lam, 1 / lam, 1 / (1 - lam), lam / (lam - 1), (lam - 1) / lam}
    assert orbit_of_q(lam) == values


# ---------------------------------------------------------------- group law

def test_identity_and_inverses():
    table = s3_table()
    for branch in BRANCHES:
        assert table[("q", branch)] == branch
        assert table[(branch, "q")] == branch
        assert any(table[(branch, other)] == "q" for other in BRANCHES)


def test_group_law_on_exponents():
    # composing branch actions equals the action of the composed branch
    q = Fraction(5, 7)
    for f in BRANCHES:
        for g in BRANCHES:
            h = compose_branches(f, g)
            step = variable_change(f, q).q_new
            two = variable_change(g, step).q_new
            assert two == variable_change(h, q).q_new


def test_s3_structure():
    table = s3_table()
    # six elements, three transpositions (order 2), two 3-cycles
    order2 = [b for b in BRANCHES if b != "q" and table[(b, b)] == "q"]
    assert len(order2) == 3
    cycles = [b for b in BRANCHES if b != "q" and table[(b, b)] != "q"]
    assert len(cycles) == 2


# ---------------------------------------------------------------- worked case

def test_worked_branch_on_unit_coefficients():
    eq = ThreeTermEquation(u=1.0, v=1.0, w=1.0, q=3.0)
    change = variable_change("q/(q-1)", Fraction(3))
    assert change.q_new == Fraction(3, 2)
    u2, v2, w2 = change.apply_coefficients(1, 1, 1, Fraction(3))
    assert (u2, v2, w2) == (4, 4, 4)


def test_branch_unavailable_at_poles():
    with pytest.raises(BranchUnavailableError):
        variable_change("q/(q-1)", Fraction(1))
    with pytest.raises(BranchUnavailableError):
        variable_change("1/q", Fraction(0))


# ---------------------------------------------------------------- transport

def profile_equation_and_samples(a=2.0, c=3.0, energy=-1.0):
    """Three-term data from a genuine profile orbit: u = -4/(b+1), q = b+2."""
    from centrolab.orbits import orbit_from_energy
    from centrolab.profile_ode import exponent_data

    data = exponent_data(a)
    orbit = orbit_from_energy(data, c, energy)
    eq = ThreeTermEquation(
        u=-4.0 / (data.b + 1.0), v=2.0 * orbit.constants.c,
        w=orbit.constants.d, q=data.b + 2.0,
    )
    return eq, orbit.grid, orbit.F, orbit.Fp


def test_identity_branch_is_identity():
    eq, t, F, Fp = profile_equation_and_samples()
    new_eq, tau, G, dG = transform_solution(eq, "q", t, F, dF_dt=Fp)
    assert new_eq == eq
    assert np.allclose(G, F)
    assert np.allclose(tau, t - t[0])


def test_source_solution_satisfies_equation():
    eq, t, F, Fp = profile_equation_and_samples()
    assert three_term_residual(F, Fp, eq) < 1e-9


@pytest.mark.parametrize("branch", [b for b in BRANCHES if b != "q"])
def test_transported_solution_satisfies_new_equation(branch):
    eq, t, F, Fp = profile_equation_and_samples()
    new_eq, tau, G, dG = transform_solution(eq, branch, t, F, dF_dt=Fp)
    source = three_term_residual(F, Fp, eq)
    transported = three_term_residual(G, dG, new_eq)
    assert transported < 1e-7
    assert transported < 10 * max(source, 1e-9)


def test_transport_monotone_time():
    eq, t, F, Fp = profile_equation_and_samples()
    _, tau, _, _ = transform_solution(eq, "1/q", t, F, dF_dt=Fp)
    assert np.all(np.diff(tau) > 0)


def test_solve_three_term_self_consistent():
    from scipy.optimize import brentq

    eq = ThreeTermEquation(u=-2.0, v=6.0, w=-3.0, q=3.0)  # b=1-like well
    # start at a genuine turning point: (F')^2 = 0 requires F0 to be a root
    rhs = lambda f: eq.u * f**eq.q + eq.v * f + eq.w
    F0 = brentq(rhs, 0.5, 1.0, xtol=1e-15)
    ts, F = solve_three_term(eq, F0=F0, duration=2.0)
    dF = np.gradient(F, ts)
    resid = np.abs(dF**2 - (eq.u * F**eq.q + eq.v * F + eq.w))
    # gradient is low-order; just confirm the right magnitude of agreement
    assert np.median(resid) < 1e-3
