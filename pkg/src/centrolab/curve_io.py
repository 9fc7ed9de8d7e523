"""Exchange formats: JSON schemas and the CSV curve table.

Round-trips preserve values to full double precision (json floats use the
shortest exact decimal representation); byte-identical output for identical
inputs is guaranteed by sorted keys and plain repr formatting.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

from .exponent_orbit import INFINITY, ThreeTermEquation
from .fourspace import Curve4D, SignCertificate
from .geometry import CentroaffineCurve
from .hill import ClosedExtremalCurve
from .orbits import ProfileOrbit
from .profile_ode import FlowTrajectory

__all__ = [
    "dump_json",
    "curve_to_dict",
    "curve_from_dict",
    "orbit_to_dict",
    "trajectory_to_dict",
    "closed_curve_to_dict",
    "overlay_data",
    "curve4d_to_dict",
    "certificate_to_dict",
    "equation_to_dict",
    "equation_from_dict",
    "third_profile_to_dict",
    "write_curve_csv",
    "read_curve_csv",
]


def dump_json(payload, path=None) -> str:
    text = json.dumps(payload, sort_keys=True, indent=1)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    return text


def curve_to_dict(curve: CentroaffineCurve) -> dict:
    samples = np.column_stack([curve.grid, curve.points])
    return {"period": float(curve.period), "samples": samples.tolist()}


def curve_from_dict(data: dict) -> CentroaffineCurve:
    samples = np.asarray(data["samples"], dtype=float)
    period = float(data["period"])
    pts = samples[:, 1:3]
    return CentroaffineCurve(period=period, points=pts)


def orbit_to_dict(orbit: ProfileOrbit) -> dict:
    return {
        "a": orbit.exponent.a,
        "b": orbit.exponent.b,
        "c": orbit.constants.c,
        "d": orbit.constants.d,
        "m": orbit.m,
        "M": orbit.M,
        "period": orbit.period,
        "F": orbit.F.tolist(),
        "Fp": orbit.Fp.tolist(),
    }


def trajectory_to_dict(traj: FlowTrajectory) -> dict:
    points = np.column_stack([traj.t, traj.Q, traj.P])
    return {
        "b": traj.b,
        "c": traj.c,
        "points": points.tolist(),
        "energy_drift": traj.energy_drift,
    }


def closed_curve_to_dict(closed: ClosedExtremalCurve) -> dict:
    data = curve_to_dict(closed.curve)
    data.update(
        {
            "covering": closed.covering,
            "rotation_number": f"{closed.rotation_number.numerator}/{closed.rotation_number.denominator}",
            "winding": closed.winding,
            "vertices": [float(v) for v in closed.vertices],
            "closure_defect": closed.closure_defect,
            "orbit": orbit_to_dict(closed.orbit),
        }
    )
    return data


def overlay_data(closed: ClosedExtremalCurve, conic_samples: int = 257) -> dict:
    """Vertex positions and sampled osculating-conic rings for renderers."""
    from .hill import vertices_and_osculants

    report = vertices_and_osculants(closed)
    if report.constant_profile:
        return {"constant_profile": True, "vertices": [], "conics": []}
    evaluate = closed.curve.evaluator()
    vertices = [np.asarray(evaluate(v.t), dtype=float).tolist() for v in report.vertices]
    theta = np.linspace(0.0, 2.0 * np.pi, conic_samples)
    ring_base = np.column_stack([np.cos(theta), np.sin(theta)])
    conics = []
    for v in report.vertices[:2]:  # one ghost per critical value
        chol = np.linalg.cholesky(np.linalg.inv(v.conic))
        conics.append((ring_base @ chol.T).tolist())
    return {"constant_profile": False, "vertices": vertices, "conics": conics}


def certificate_to_dict(cert: SignCertificate) -> dict:
    return {
        "sign_star": cert.sign_star,
        "sign_conv": cert.sign_conv,
        "margin_star": cert.margin_star,
        "margin_conv": cert.margin_conv,
        "floor": cert.floor,
    }


def curve4d_to_dict(curve: Curve4D, certificate: SignCertificate | None = None) -> dict:
    samples = np.column_stack([curve.grid, curve.points])
    data = {"period": float(curve.period), "samples": samples.tolist()}
    if certificate is not None:
        data["certificate"] = certificate_to_dict(certificate)
    return data


def _number_or_inf(value):
    if value is INFINITY or value == float("inf"):
        return "inf"
    if isinstance(value, Fraction):
        return float(value)
    return float(value)


def equation_to_dict(eq: ThreeTermEquation) -> dict:
    return {
        "u": _number_or_inf(eq.u),
        "v": _number_or_inf(eq.v),
        "w": _number_or_inf(eq.w),
        "q": _number_or_inf(eq.q),
    }


def equation_from_dict(data: dict) -> ThreeTermEquation:
    def parse(x):
        if x == "inf":
            return INFINITY
        return float(x)

    return ThreeTermEquation(
        u=parse(data["u"]), v=parse(data["v"]), w=parse(data["w"]), q=parse(data["q"])
    )


def third_profile_to_dict(profile) -> dict:
    return {
        "mu": profile.mu,
        "eps": profile.eps,
        "n": profile.n,
        "C": profile.C,
        "G": profile.G.tolist(),
        "phi": profile.phi.tolist(),
    }


def write_curve_csv(curve: CentroaffineCurve, path=None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["t", "x", "y"])
    for t, (x, y) in zip(curve.grid, curve.points):
        writer.writerow([repr(float(t)), repr(float(x)), repr(float(y))])
    text = buffer.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def read_curve_csv(source) -> CentroaffineCurve:
    if hasattr(source, "read"):
        rows = list(csv.reader(source))
    else:
        with open(source, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    if rows[0] != ["t", "x", "y"]:
        raise ValueError("expected a curve table with header t,x,y")
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    # the stored grid is closed, so the final parameter equals the period
    period = float(data[-1, 0])
    return CentroaffineCurve(period=period, points=data[:, 1:3])
