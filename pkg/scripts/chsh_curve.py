"""Correlation E(theta, phi) from the simulated Bell circuit, and the CHSH value."""

import argparse
import csv
import math
import sys
from dataclasses import dataclass

from heisenqi import protocols as pr


@dataclass
class CurveConfig:
    theta: float = 0.0
    steps: int = 24


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta", type=float, default=CurveConfig.theta)
    ap.add_argument("--steps", type=int, default=CurveConfig.steps)
    args = ap.parse_args(argv)
    cfg = CurveConfig(args.theta, args.steps)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["phi", "E", "cos(theta-phi)"])
    for k in range(cfg.steps + 1):
        phi = 2 * math.pi * k / cfg.steps
        w.writerow([f"{phi:.6f}", f"{pr.bell_experiment_run(cfg.theta, phi).E:.12f}", f"{math.cos(cfg.theta - phi):.12f}"])
    s = pr.chsh_value()
    print(f"# S = {s:.12f}  (local bound 2, quantum maximum {2 * math.sqrt(2):.12f})", file=sys.stderr)


if __name__ == "__main__":
    main()
