#!/usr/bin/env python3
"""Reproduce the extremal-curve gallery: one figure per (exponent, winding).

Writes JSON + CSV + SVG per entry via the same pipeline as the ``gallery``
command.  The default entries mirror the winding numbers 3, 4, 5 on the
positive side and 5, 5, 4 on the negative/small-exponent side.
"""

import sys

from centrolab.cli import main as cli_main

DEFAULT_ENTRIES = [
    (2.0, 3),
    (2.5, 4),
    (3.0, 5),
    (-2.0, 6),
    (-1.0, 5),
    (0.2, 4),
]


def run(out_dir: str = "gallery"):
    failures = 0
    for a, winding in DEFAULT_ENTRIES:
        code = cli_main([
            "gallery", "--a", str(a), "--winding", str(winding),
            "--out", out_dir, "--overlays",
        ])
        if code != 0:
            print(f"entry (a={a}, winding={winding}) failed with exit code {code}")
            failures += 1
    return failures


if __name__ == "__main__":
    sys.exit(run(sys.argv[1] if len(sys.argv) > 1 else "gallery"))
