#!/usr/bin/env python3
"""Stretch experiment: hunt for rounded-(k-1)-gon extremals near the
degenerate exponents (k^2-2)/(k^2-4).

At those exponents the circle acquires a kernel harmonic k, and tuning the
rotation fraction to 1/k just off the degenerate exponent continues the
bifurcating branch.  The script renders a few members of the family; nothing
here is an acceptance target (the conjecture is open), it is a reproducible
recipe for looking.

Usage: python scripts/rounded_polygon_experiment.py [k] [offset]
"""

import os
import sys
from fractions import Fraction

from centrolab.hill import TuneRangeError, reconstruct, rotation_tune
from centrolab.svg import curve_svg


def run(k: int = 3, offset: float = 0.02, out_dir: str = "experiments"):
    a_star = (k * k - 2) / (k * k - 4)
    os.makedirs(out_dir, exist_ok=True)
    print(f"degenerate exponent for k={k}: a* = {a_star:.6f}")
    for sign in (+1, -1):
        a = a_star + sign * offset
        try:
            orbit = rotation_tune(a, Fraction(1, k))
        except TuneRangeError as err:
            print(f"  a = {a:.6f}: fraction 1/{k} unreachable ({err.attained})")
            continue
        closed = reconstruct(orbit, covering=k)
        path = os.path.join(out_dir, f"rounded_{k - 1}gon_a{a:.4f}.svg")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(curve_svg(closed.curve.points,
                               title=f"a={a:.5f}, rotation 1/{k}"))
        spread = closed.orbit.M - closed.orbit.m
        print(f"  a = {a:.6f}: winding {closed.winding}, covering {closed.covering}, "
              f"profile spread {spread:.4f} -> {path}")


if __name__ == "__main__":
    k = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    offset = float(sys.argv[2]) if len(sys.argv) > 2 else 0.02
    run(k, offset)
