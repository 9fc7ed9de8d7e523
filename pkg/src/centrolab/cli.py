"""Command-line front door.

Exit codes: 0 success, 2 verification failure, 3 solver failure, 4 bad input.
A small key=value config file can preset defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import curve_io, svg, verify
from .exponent_orbit import orbit_of_a, orbit_of_q, s3_table
from .fourspace import LiftError, PushOffError, sign_zoo
from .hill import ClosureError, TuneRangeError, reconstruct, rotation_tune
from .orbits import NoOrbitError, PeriodRangeError
from .profile_ode import ConicRigidityError, exponent_data
from .spectrum import as_exact, classify_circle, degenerate_exponents, spectrum_hits
from .third_case import rigidity_check_third, third_profile

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_SOLVER = 3
EXIT_INPUT = 4

SOLVER_ERRORS = (
    TuneRangeError,
    ClosureError,
    PeriodRangeError,
    NoOrbitError,
    LiftError,
    PushOffError,
    RuntimeError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def read_config(path: str) -> dict:
    """Tiny key=value config format; '#' starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.rstrip()}")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key] = val
    return values


def _attainable_interval(a: float) -> tuple[float, float]:
    data = exponent_data(a)
    circle = 1.0 / np.sqrt(2.0 * (data.b + 2.0))
    return (min(circle, 0.5), max(circle, 0.5))


def pick_covering(a: float, winding: int, margin: float = 0.02) -> Fraction:
    """Smallest covering q with winding/q strictly inside the attainable range."""
    from math import gcd

    lo, hi = _attainable_interval(a)
    pad = margin * (hi - lo)
    for q in range(winding + 1, 64 * winding):
        if gcd(winding, q) != 1:
            continue
        frac = winding / q
        if lo + pad < frac < hi - pad:
            return Fraction(winding, q)
    raise TuneRangeError(
        f"no covering found for winding {winding} at a={a}: attainable rotation "
        f"fractions lie in ({lo:.6f}, {hi:.6f})",
        attained=(lo, hi),
    )


def _solve_closed_curve(a: float, rot: Fraction, c=None, samples: int = 2048):
    orbit = rotation_tune(a, rot, c=c, n_samples=samples)
    return reconstruct(orbit, covering=rot.denominator)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def cmd_solve(args) -> int:
    rot = Fraction(args.rot)
    closed = _solve_closed_curve(args.a, rot, c=args.c, samples=args.samples)
    _emit(curve_io.dump_json(curve_io.closed_curve_to_dict(closed)), args.output)
    return EXIT_OK


def cmd_gallery(args) -> int:
    if 0.5 <= args.a <= 1.0:
        print("rigidity window: constants only (no non-circular extremal curves "
              f"exist for a = {args.a})", file=sys.stderr)
        return EXIT_INPUT
    rot = Fraction(args.rot) if args.rot else pick_covering(args.a, args.winding)
    closed = _solve_closed_curve(args.a, rot, c=args.c, samples=args.samples)
    os.makedirs(args.out, exist_ok=True)
    stem = f"gallery_a{args.a:g}_rot{rot.numerator}_{rot.denominator}"
    base = os.path.join(args.out, stem)
    curve_io.dump_json(curve_io.closed_curve_to_dict(closed), base + ".json")
    curve_io.write_curve_csv(closed.curve, base + ".csv")

    vertices = conics = None
    if args.overlays:
        data = curve_io.overlay_data(closed)
        if not data["constant_profile"]:
            vertices = np.asarray(data["vertices"])
            conics = [np.asarray(ring) for ring in data["conics"]]
    drawing = svg.curve_svg(
        closed.curve.points, vertices=vertices, conics=conics,
        title=f"a={args.a:g}, rotation {rot}",
    )
    with open(base + ".svg", "w", encoding="utf-8") as fh:
        fh.write(drawing)
    print(f"wrote {base}.json / .csv / .svg (winding {closed.winding}, "
          f"covering {closed.covering}, closure defect {closed.closure_defect:.2e})")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    exact = as_exact(args.a)
    hits = spectrum_hits(exact, k_max=args.kmax, n_max=args.nmax)
    payload = {
        "a": str(exact),
        "hit": bool(hits),
        "hits": [{"k": h.k, "n": h.n, "trivial": h.trivial} for h in hits],
        "degenerate_sequence": [str(v) for v in degenerate_exponents(args.kmax)[:12]],
    }
    if hits:
        payload.update({"k": hits[0].k, "n": hits[0].n})
    _emit(curve_io.dump_json(payload), args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    result = classify_circle(as_exact(args.a))
    payload = {
        "a": str(result.a),
        "classification": result.verdict,
        "kernel_harmonic": result.kernel_harmonic,
    }
    _emit(curve_io.dump_json(payload), args.output)
    return EXIT_OK


def cmd_third(args) -> int:
    profile = third_profile(args.eps, args.n, C=args.C, n_samples=args.samples)
    report = rigidity_check_third(profile.G)
    payload = curve_io.third_profile_to_dict(profile)
    payload.update(
        {
            "verdict": report.verdict,
            "deviation": report.deviation,
            "center": report.center.tolist(),
            "radius": report.radius,
            "curve": curve_io.curve_to_dict(report.curve),
        }
    )
    _emit(curve_io.dump_json(payload), args.output)
    return EXIT_OK


def cmd_symmetry(args) -> int:
    if args.q is not None:
        orbit = orbit_of_q(Fraction(args.q))
        payload = {"q": str(Fraction(args.q)), "orbit": sorted(str(v) for v in orbit)}
    else:
        orbit = orbit_of_a(as_exact(args.a))
        payload = {"a": str(as_exact(args.a)), "orbit": sorted(str(v) for v in orbit)}
    if args.table:
        payload["composition_table"] = {
            f"{f} ; {g}": h for (f, g), h in sorted(s3_table().items())
        }
    _emit(curve_io.dump_json(payload), args.output)
    return EXIT_OK


def cmd_zoo(args) -> int:
    zoo = sign_zoo()
    payload = {
        pattern: curve_io.curve4d_to_dict(curve, cert)
        for pattern, (curve, cert) in zoo.items()
    }
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for pattern, data in payload.items():
            name = pattern.replace("+", "p").replace("-", "m")
            curve_io.dump_json(data, os.path.join(args.out, f"zoo_{name}.json"))
        print(f"wrote 4 certified curves to {args.out}")
    else:
        print(curve_io.dump_json(payload))
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite in (None, "all") else [args.suite]
    if any(name not in verify.SUITES for name in names):
        print(f"unknown suite {args.suite!r}; available: {', '.join(verify.SUITES)}",
              file=sys.stderr)
        return EXIT_INPUT
    results = []
    for name in names:
        result = verify.run_suite(name)
        results.append(result)
        print(f"{'PASS' if result.passed else 'FAIL'} {name} "
              f"({result.runtime:.2f}s)")
        for line in result.lines():
            print(line)
    if args.output:
        curve_io.dump_json([r.to_dict() for r in results], args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_serve(args) -> int:
    from .server import serve

    serve(port=args.port, host=args.host)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="centrolab",
                     description="extremal-curve laboratory for curvature-power functionals")
    parser.add_argument("--config", help="key=value config file presetting defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=fn)
        return p

    p = add("solve", cmd_solve, help="tune an orbit and emit the closed curve JSON")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--rot", required=True, help="rotation fraction j/q (winding j, covering q)")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--samples", type=int, default=2048)
    p.add_argument("-o", "--output", default=None)

    p = add("gallery", cmd_gallery, help="solve and write JSON, CSV and SVG renderings")
    p.add_argument("--a", type=float, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--rot", default=None, help="exact rotation fraction j/q")
    group.add_argument("--winding", type=int, default=None,
                       help="target winding; the covering is chosen automatically")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--samples", type=int, default=2048)
    p.add_argument("--overlays", action="store_true",
                   help="draw vertices and osculating conics")
    p.add_argument("--out", default="gallery")

    p = add("spectrum", cmd_spectrum, help="deformation-spectrum membership of an exponent")
    p.add_argument("--a", required=True)
    p.add_argument("--kmax", type=int, default=100)
    p.add_argument("--nmax", type=int, default=20)
    p.add_argument("-o", "--output", default=None)

    p = add("classify", cmd_classify, help="second-order classification of the circle")
    p.add_argument("--a", required=True)
    p.add_argument("-o", "--output", default=None)

    p = add("third", cmd_third, help="a = 1/3 profile, rigidity check and curve")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--C", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=2048)
    p.add_argument("-o", "--output", default=None)

    p = add("symmetry", cmd_symmetry, help="exponent orbits of the three-term symmetry")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--a", default=None)
    group.add_argument("--q", default=None)
    p.add_argument("--table", action="store_true", help="include the composition table")
    p.add_argument("-o", "--output", default=None)

    p = add("zoo", cmd_zoo, help="four sign-certified curves in R^4")
    p.add_argument("--out", default=None)

    p = add("verify", cmd_verify, help="run verification suites")
    p.add_argument("suite", nargs="?", default="all")
    p.add_argument("-o", "--output", default=None, help="write a JSON report")

    p = add("serve", cmd_serve, help="serve the JSON API for the explorer UI")
    p.add_argument("--port", type=int, default=8439)
    p.add_argument("--host", default="127.0.0.1")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        presets = read_config(args.config)
        for key, value in presets.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and getattr(args, attr) in (None,):
                kind = type(parser.get_default(attr)) if parser.get_default(attr) else str
                setattr(args, attr, kind(value))
    try:
        return args.func(args)
    except ConicRigidityError as err:
        print(f"rigidity window: constants only ({err})", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError) as err:
        print(f"bad input: {err}", file=sys.stderr)
        return EXIT_INPUT
    except SOLVER_ERRORS as err:
        print(f"solver failure: {err}", file=sys.stderr)
        if isinstance(err, TuneRangeError) and err.attained:
            lo, hi = err.attained
            print(f"attainable rotation fractions: ({lo:.6f}, {hi:.6f})", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
