"""Read-only JSON-over-HTTP bridge backing the browser explorer.

All handlers call pure library functions; long solves run under a semaphore
sized by the LAB_THREADS environment variable.  Malformed requests get a 400
with a schema hint, solver refusals a 422 with diagnostics.
"""

from __future__ import annotations

import json
import os
import threading
from fractions import Fraction
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

import numpy as np

from . import curve_io
from .fourspace import LiftError, PushOffError, sign_zoo
from .hill import ClosureError, TuneRangeError, reconstruct, rotation_tune
from .orbits import NoOrbitError, PeriodRangeError
from .profile_ode import ConicRigidityError, exponent_data
from .spectrum import as_exact, classify_circle, degenerate_exponents, spectrum_hits
from .third_case import NotCriticalProfileError, rigidity_check_third, third_profile

__all__ = ["serve", "make_server", "LabHandler"]

_SOLVE_SCHEMA = '{"a": number, "rot": "j/q", "c": optional number, "samples": optional int}'
_THIRD_SCHEMA = '{"eps": number in [0,1), "n": positive int, "C": optional number}'


def _worker_limit() -> int:
    try:
        return max(1, int(os.environ.get("LAB_THREADS", "4")))
    except ValueError:
        return 4


_SOLVE_GATE = threading.BoundedSemaphore(_worker_limit())
_ZOO_CACHE = {}
_ZOO_LOCK = threading.Lock()


class BadRequest(ValueError):
    pass


def _rotation_interval(a: float) -> tuple[float, float]:
    data = exponent_data(a)
    circle = 1.0 / np.sqrt(2.0 * (data.b + 2.0))
    return (min(circle, 0.5), max(circle, 0.5))


def handle_spectrum(params: dict) -> dict:
    if "a" not in params:
        raise BadRequest("missing query parameter a")
    exact = as_exact(params["a"])
    hits = spectrum_hits(exact)
    payload = {
        "a": str(exact),
        "hit": bool(hits),
        "hits": [{"k": h.k, "n": h.n, "trivial": h.trivial} for h in hits],
    }
    if hits:
        payload.update({"k": hits[0].k, "n": hits[0].n})
    return payload


def handle_classify(params: dict) -> dict:
    if "a" not in params:
        raise BadRequest("missing query parameter a")
    result = classify_circle(as_exact(params["a"]))
    return {
        "a": str(result.a),
        "a_float": float(result.a),
        "classification": result.verdict,
        "kernel_harmonic": result.kernel_harmonic,
    }


def handle_spectrum_strip(params: dict) -> dict:
    kmax = int(params.get("kmax", 12))
    points = []
    for k in [1] + list(range(3, kmax + 1)):
        a = Fraction(k * k - 2, k * k - 4)
        points.append({"k": k, "a": str(a), "a_float": float(a)})
    return {
        "degenerate": points,
        "bands": [
            {"range": [None, 0.0], "classification": "local-min"},
            {"range": [0.0, 1.0 / 3.0], "classification": "local-max"},
            {"range": [1.0 / 3.0, 1.4], "classification": "indefinite"},
            {"range": [1.4, None], "classification": "local-min"},
        ],
        "rigidity_window": [0.5, 1.0],
    }


def handle_rotation_range(params: dict) -> dict:
    if "a" not in params:
        raise BadRequest("missing query parameter a")
    a = float(params["a"])
    lo, hi = _rotation_interval(a)
    return {"a": a, "low": lo, "high": hi}


def handle_solve(body: dict) -> dict:
    try:
        a = float(body["a"])
        rot = Fraction(str(body["rot"]))
        c = float(body["c"]) if body.get("c") is not None else None
        samples = int(body.get("samples", 2048))
    except (KeyError, TypeError, ValueError) as err:
        raise BadRequest(f"malformed solve request ({err}); expected {_SOLVE_SCHEMA}")
    if not 256 <= samples <= 16384:
        raise BadRequest("samples must lie in [256, 16384]")
    with _SOLVE_GATE:
        orbit = rotation_tune(a, rot, c=c, n_samples=samples)
        closed = reconstruct(orbit, covering=rot.denominator)
    payload = curve_io.closed_curve_to_dict(closed)
    payload["overlays"] = curve_io.overlay_data(closed)
    return payload


def handle_third(body: dict) -> dict:
    try:
        eps = float(body["eps"])
        n = int(body["n"])
        C = float(body.get("C", 0.0))
    except (KeyError, TypeError, ValueError) as err:
        raise BadRequest(f"malformed request ({err}); expected {_THIRD_SCHEMA}")
    with _SOLVE_GATE:
        profile = third_profile(eps, n, C=C)
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
    return payload


def handle_zoo(params: dict) -> dict:
    with _ZOO_LOCK:
        if "zoo" not in _ZOO_CACHE:
            _ZOO_CACHE["zoo"] = {
                pattern: curve_io.curve4d_to_dict(curve, cert)
                for pattern, (curve, cert) in sign_zoo().items()
            }
    return _ZOO_CACHE["zoo"]


GET_ROUTES = {
    "/spectrum": handle_spectrum,
    "/classify": handle_classify,
    "/spectrum-strip": handle_spectrum_strip,
    "/rotation-range": handle_rotation_range,
    "/zoo": handle_zoo,
}

POST_ROUTES = {
    "/solve": handle_solve,
    "/third": handle_third,
}

_SOLVER_ERRORS = (
    TuneRangeError,
    ClosureError,
    PeriodRangeError,
    NoOrbitError,
    ConicRigidityError,
    NotCriticalProfileError,
    LiftError,
    PushOffError,
    RuntimeError,
)


class LabHandler(BaseHTTPRequestHandler):
    server_version = "centrolab/0.1"

    def log_message(self, fmt, *args):  # quiet by default
        if os.environ.get("LAB_HTTP_LOG"):
            super().log_message(fmt, *args)

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def _dispatch(self, handler, argument):
        try:
            payload = handler(argument)
        except BadRequest as err:
            self._send(400, {"error": str(err)})
        except _SOLVER_ERRORS as err:
            detail = {"error": str(err)}
            if isinstance(err, TuneRangeError) and err.attained:
                detail["attained_range"] = list(err.attained)
            self._send(422, detail)
        except (ValueError, ZeroDivisionError) as err:
            self._send(400, {"error": str(err)})
        else:
            self._send(200, payload)

    def do_GET(self):
        url = urlparse(self.path)
        handler = GET_ROUTES.get(url.path)
        if handler is None:
            self._send(404, {"error": f"unknown endpoint {url.path}",
                             "endpoints": sorted(GET_ROUTES) + sorted(POST_ROUTES)})
            return
        params = {k: v[-1] for k, v in parse_qs(url.query).items()}
        self._dispatch(handler, params)

    def do_POST(self):
        url = urlparse(self.path)
        handler = POST_ROUTES.get(url.path)
        if handler is None:
            self._send(404, {"error": f"unknown endpoint {url.path}"})
            return
        length = int(self.headers.get("Content-Length", "0"))
        raw = self.rfile.read(length) if length else b""
        try:
            body = json.loads(raw.decode("utf-8")) if raw else {}
            if not isinstance(body, dict):
                raise ValueError("request body must be a JSON object")
        except (ValueError, UnicodeDecodeError) as err:
            self._send(400, {"error": f"invalid JSON body: {err}"})
            return
        self._dispatch(handler, body)


def make_server(port: int = 8439, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), LabHandler)


def serve(port: int = 8439, host: str = "127.0.0.1") -> None:
    srv = make_server(port=port, host=host)
    print(f"centrolab API listening on http://{host}:{port} "
          f"(workers: {_worker_limit()})")
    try:
        srv.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        srv.server_close()
