#!/usr/bin/env python3
"""Wigner fields: the first three oscillator eigenstates, two coherent
states, and the one-particle density of the interpolation family across its
transition (the pinch-off at the origin)."""

import argparse
import math
from pathlib import Path

from psesk.cli import main as cli


def run(out: Path) -> None:
    for n in (0, 1, 2):
        cli(["wigner", "--ho-slater", str(n), "--gnuplot", "--out", str(out / f"eig{n}")])
    cli(["wigner", "--coherent", "3", "--gnuplot", "--out", str(out / "coherent_real")])
    cli(["wigner", "--coherent", "0,3", "--gnuplot", "--out", str(out / "coherent_imag")])
    phi = 2.0 * math.pi / 3.0
    t_crit = (2.0 / math.pi) * math.atan(math.sqrt(2.0))
    for tag, t in [("t000", 0.0), ("t030", 0.3), ("tcrit", t_crit), ("t100", 1.0)]:
        cli(["wigner", "--interpolated", f"{t},{phi}", "--gnuplot",
             "--out", str(out / f"interp_{tag}")])


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/wigner", type=Path)
    run(parser.parse_args().out)
