"""The six-element symmetry of the three-term first-order equation.

Changes of variables F = G**mu, d(tau)/dt = G**lambda preserving the shape of
(dF/dt)^2 = u F**q + v F + w form a copy of the permutation group on three
letters; the exponent q moves exactly like a cross-ratio under permutations
of four points.  Pulling back along q = (2a-1)/(a-1) gives the induced orbit
of the functional exponent a.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import fourier

__all__ = [
    "INFINITY",
    "BranchUnavailableError",
    "ThreeTermEquation",
    "VariableChange",
    "BRANCHES",
    "variable_change",
    "orbit_of_q",
    "orbit_of_a",
    "a_to_q",
    "q_to_a",
    "transform_solution",
    "three_term_residual",
    "compose_branches",
    "s3_table",
    "solve_three_term",
]


class _Infinity:
    """Projective infinity marker for poles of the exponent maps."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, _Infinity) or other == float("inf")

    def __hash__(self):
        return hash(float("inf"))


INFINITY = _Infinity()


class BranchUnavailableError(ValueError):
    pass


@dataclass(frozen=True)
class ThreeTermEquation:
    u: float
    v: float
    w: float
    q: float

    def __iter__(self):
        return iter((self.u, self.v, self.w, self.q))


@dataclass(frozen=True)
class VariableChange:
    branch: str
    mu: Fraction | float
    lam: Fraction | float
    q_new: Fraction | float
    # coefficient transport: (u', v', w') = factor * permutation of (u, v, w)

    def apply_coefficients(self, u, v, w, q):
        factor, perm = _COEFF_RULES[self.branch](q)
        triple = {"u": u, "v": v, "w": w}
        return tuple(factor * triple[name] for name in perm)


# Moebius action of each branch on the exponent q, as integer matrices
# [[a, b], [c, d]] acting by q -> (a q + b) / (c q + d).  These six classes
# form the cross-ratio (anharmonic) group inside PGL(2).
_MOEBIUS = {
    "q": ((1, 0), (0, 1)),
    "1-q": ((-1, 1), (0, 1)),
    "q/(q-1)": ((1, 0), (1, -1)),
    "1/(1-q)": ((0, 1), (-1, 1)),
    "(q-1)/q": ((1, -1), (1, 0)),
    "1/q": ((0, 1), (1, 0)),
}

BRANCHES = tuple(_MOEBIUS)

# exponents of the substitution: mu (dependent power) and lambda (time power)
_CHANGE_RULES = {
    "q": lambda q: (1, 0),
    "1-q": lambda q: (-1, Fraction(3, 2)),
    "q/(q-1)": lambda q: (_inv(1 - q), _half(1 - _inv(1 - q))),
    "1/(1-q)": lambda q: (_inv(q - 1), 1 - _half(_inv(q - 1))),
    "(q-1)/q": lambda q: (-_inv(q), _half(1 + 2 * _inv(q))),
    "1/q": lambda q: (_inv(q), 1 - _inv(q)),
}

# coefficient transport: factor(q) and the permutation of (u, v, w)
_COEFF_RULES = {
    "q": lambda q: (1, ("u", "v", "w")),
    "1-q": lambda q: (1, ("u", "w", "v")),
    "q/(q-1)": lambda q: ((q - 1) ** 2, ("w", "v", "u")),
    "1/(1-q)": lambda q: ((q - 1) ** 2, ("w", "u", "v")),
    "(q-1)/q": lambda q: (q**2, ("v", "w", "u")),
    "1/q": lambda q: (q**2, ("v", "u", "w")),
}


def _inv(x):
    if x == 0:
        raise BranchUnavailableError("division by zero in the substitution exponents")
    if isinstance(x, Fraction):
        return 1 / x
    return 1.0 / x


def _half(x):
    if isinstance(x, Fraction):
        return x / 2
    return 0.5 * x


def _moebius_apply(mat, value):
    (a, b), (c, d) = mat
    if value is INFINITY:
        num, den = a, c
    else:
        num, den = a * value + b, c * value + d
    if den == 0:
        return INFINITY
    if value is INFINITY:
        return Fraction(a, c) if c else INFINITY
    return num / den if not isinstance(value, Fraction) else Fraction(num, den)


def variable_change(branch: str, q) -> VariableChange:
    """The substitution data (mu, lambda, new exponent) for one branch at q."""
    if branch not in _MOEBIUS:
        raise ValueError(f"unknown branch {branch!r}; choose from {BRANCHES}")
    try:
        mu, lam = _CHANGE_RULES[branch](q)
    except ZeroDivisionError:
        raise BranchUnavailableError(
            f"branch {branch!r} is undefined at q = {q}"
        ) from None
    return VariableChange(
        branch=branch, mu=mu, lam=lam, q_new=_moebius_apply(_MOEBIUS[branch], q)
    )


def orbit_of_q(q) -> set:
    """Orbit of the exponent under the six changes; size 1, 2, 3 or 6."""
    if isinstance(q, int):
        q = Fraction(q)
    out = set()
    for branch in BRANCHES:
        out.add(_moebius_apply(_MOEBIUS[branch], q))
    return out


def a_to_q(a):
    """q = (2a - 1)/(a - 1); infinity at a = 1."""
    if a is INFINITY:
        return Fraction(2)
    if a == 1:
        return INFINITY
    if isinstance(a, (Fraction, int)):
        return Fraction(2 * a - 1, a - 1)
    return (2.0 * a - 1.0) / (a - 1.0)


def q_to_a(q):
    """Inverse map a = (q - 1)/(q - 2); infinity at q = 2."""
    if q is INFINITY:
        return Fraction(1)
    if q == 2:
        return INFINITY
    if isinstance(q, (Fraction, int)):
        return Fraction(q - 1, q - 2)
    return (q - 1.0) / (q - 2.0)


def orbit_of_a(a) -> set:
    """Orbit of the functional exponent under the conjugated action.

    Uses exact rational arithmetic for rational input; poles are reported
    with the INFINITY marker.
    """
    if a == 0:
        raise ValueError("exponent a = 0 is invalid")
    if isinstance(a, int):
        a = Fraction(a)
    return {q_to_a(val) for val in orbit_of_q(a_to_q(a))}


def compose_branches(first: str, then: str) -> str:
    """Branch realizing 'apply first, then the other'; the group law."""
    (a1, b1), (c1, d1) = _MOEBIUS[first]
    (a2, b2), (c2, d2) = _MOEBIUS[then]
    # matrix product: then o first
    mat = (
        (a2 * a1 + b2 * c1, a2 * b1 + b2 * d1),
        (c2 * a1 + d2 * c1, c2 * b1 + d2 * d1),
    )
    for branch, ref in _MOEBIUS.items():
        for sign in (1, -1):
            if (
                mat[0][0] == sign * ref[0][0]
                and mat[0][1] == sign * ref[0][1]
                and mat[1][0] == sign * ref[1][0]
                and mat[1][1] == sign * ref[1][1]
            ):
                return branch
    raise AssertionError("composition left the six-element group")


def s3_table() -> dict:
    """Full composition table {(first, then): result}."""
    return {
        (f, g): compose_branches(f, g) for f in BRANCHES for g in BRANCHES
    }


def three_term_residual(G, dG_dtau, eq: ThreeTermEquation) -> float:
    """Sup-norm of (dG/dtau)^2 - (u G^q + v G + w) on the samples."""
    G = np.asarray(G, dtype=float)
    d = np.asarray(dG_dtau, dtype=float)
    rhs = float(eq.u) * G ** float(eq.q) + float(eq.v) * G + float(eq.w)
    return float(np.max(np.abs(d * d - rhs)))


def transform_solution(eq: ThreeTermEquation, branch: str, t, F, dF_dt=None):
    """Carry a sampled solution through one symmetry branch.

    Returns (new equation, tau samples, G samples, dG/dtau samples).  The new
    time is the quadrature of G**lambda over t (monotone since G > 0); the
    derivative is transported by the chain rule, so no interpolation error
    enters the residual of the transformed equation.  ``F`` must cover one
    full period on a uniform closed grid unless ``dF_dt`` is supplied.
    """
    t = np.asarray(t, dtype=float)
    F = np.asarray(F, dtype=float)
    if np.min(F) <= 0.0:
        raise ValueError("solution samples must be positive")
    change = variable_change(branch, eq.q)
    mu = float(change.mu)
    lam = float(change.lam)
    G = F ** (1.0 / mu)

    if dF_dt is None:
        period = t[-1] - t[0]
        dF_dt = fourier.spectral_derivative(F, period, 1, fourier.NOISE_FLOOR)
    else:
        dF_dt = np.asarray(dF_dt, dtype=float)
    # G = F^(1/mu): dG/dt = (1/mu) F^(1/mu - 1) dF/dt; dtau/dt = G^lambda
    dG_dt = (1.0 / mu) * F ** (1.0 / mu - 1.0) * dF_dt
    rate = G**lam
    if np.min(rate) <= 0.0:
        raise BranchUnavailableError("time-change rate G**lambda is not positive")
    dG_dtau = dG_dt / rate
    # monotone new time by trapezoidal quadrature on the sample grid
    tau = np.concatenate([[0.0], np.cumsum(0.5 * (rate[1:] + rate[:-1]) * np.diff(t))])

    q_val = eq.q if isinstance(eq.q, Fraction) else eq.q
    factor, perm = _COEFF_RULES[branch](q_val)
    triple = {"u": eq.u, "v": eq.v, "w": eq.w}
    u2, v2, w2 = (float(factor) * float(triple[name]) for name in perm)
    new_eq = ThreeTermEquation(u=u2, v=v2, w=w2, q=float(change.q_new))
    return new_eq, tau, G, dG_dtau


def solve_three_term(eq: ThreeTermEquation, F0: float, duration: float, n_samples: int = 2048):
    """Sample a positive solution of the three-term equation.

    Integrates the differentiated form F'' = (u q F^(q-1) + v)/2 from the
    turning point F(0) = F0 (where the right side of the first-order form
    vanishes), which avoids the square-root branch ambiguity.
    """
    from scipy.integrate import solve_ivp

    u, v, w, q = (float(x) for x in eq)

    def rhs(t, y):
        return [y[1], 0.5 * (u * q * y[0] ** (q - 1.0) + v)]

    sol = solve_ivp(
        rhs, (0.0, duration), [F0, 0.0],
        method="DOP853", rtol=1e-12, atol=1e-14, dense_output=True,
    )
    ts = np.linspace(0.0, duration, n_samples + 1)
    Y = sol.sol(ts)
    if np.min(Y[0]) <= 0.0:
        raise ValueError("solution left the positive domain")
    return ts, Y[0]
