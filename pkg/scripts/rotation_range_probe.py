#!/usr/bin/env python3
"""Map the attainable per-period rotation fractions against the exponent.

For each exponent the fractions sweep the open interval between the
vanishing-amplitude value 1/sqrt(2(b+2)) and 1/2 at the positivity boundary;
this experiment samples the sweep numerically and prints which winding
numbers are reachable with small coverings, the empirical counterpart of the
open question about minimal rotation numbers.

Usage: python scripts/rotation_range_probe.py [a1 a2 ...]
"""

import sys

import numpy as np

from centrolab.hill import monodromy
from centrolab.orbits import default_integration_constant, orbit_from_energy
from centrolab.profile_ode import critical_point, exponent_data, potential


def probe(a: float, shapes=(1e-4, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99)):
    data = exponent_data(a)
    c = default_integration_constant(data.b)
    well = critical_point(data.b, c)
    bottom = float(potential(well.point.Q, data.b, c))
    circle = 1.0 / np.sqrt(2.0 * (data.b + 2.0))
    print(f"a = {a:g}  (b = {data.b:.4f}, circle fraction {circle:.6f})")
    fractions = []
    for s in shapes:
        orbit = orbit_from_energy(data, c, bottom * (1.0 - s), n_samples=1024)
        frac = monodromy(orbit).phase_advance / (2.0 * np.pi)
        fractions.append(frac)
        print(f"  shape {s:<8g} fraction {frac:.6f}  (F in [{orbit.m:.4g}, {orbit.M:.4g}])")
    lo, hi = min(fractions + [circle]), max(fractions + [circle])
    print(f"  attainable interval ~ ({lo:.6f}, {hi:.6f})")
    from math import gcd

    reachable = [
        f"{j}/{q}"
        for q in range(2, 16)
        for j in range(1, q)
        if gcd(j, q) == 1 and lo < j / q < hi
    ]
    print(f"  reachable small fractions: {', '.join(reachable) or 'none'}\n")


def main(argv):
    exponents = [float(x) for x in argv] or [2.0, 2.5, 3.0, -1.0, -2.0, 0.2, 1.2]
    for a in exponents:
        probe(a)


if __name__ == "__main__":
    main(sys.argv[1:])
