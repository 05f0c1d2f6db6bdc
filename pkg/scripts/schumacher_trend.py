"""Typical-subspace dimension and weight as the block length grows."""

import argparse
import csv
import sys
from dataclasses import dataclass, field

import numpy as np

from heisenqi import protocols as pr


@dataclass
class TrendConfig:
    p: float = 0.9
    epsilon: float = 0.1
    blocks: list[int] = field(default_factory=lambda: [5, 10, 20, 30, 40, 50, 60])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=TrendConfig.p)
    ap.add_argument("--epsilon", type=float, default=TrendConfig.epsilon)
    ap.add_argument("--blocks", type=lambda s: [int(x) for x in s.split(",")], default=None)
    args = ap.parse_args(argv)
    cfg = TrendConfig(args.p, args.epsilon, args.blocks or TrendConfig().blocks)
    rho = np.diag([cfg.p, 1 - cfg.p])
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["N", "S", "typical_dimension", "log2_dim_per_copy", "typical_weight"])
    for s in pr.schumacher_trend(rho, cfg.blocks, cfg.epsilon):
        w.writerow([s.N, f"{s.S:.6f}", s.typical_dimension, f"{s.rate:.6f}", f"{s.typical_weight:.6f}"])


if __name__ == "__main__":
    main()
