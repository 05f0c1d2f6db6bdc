"""Sample Bell-diagonal states and compare octohedron membership with every criterion."""

import argparse
from collections import Counter
from dataclasses import dataclass

from heisenqi import entanglement as ent


@dataclass
class SampleConfig:
    samples: int = 5000
    seed: int = 0
    tol: float = 1e-9


def run(cfg: SampleConfig) -> Counter:
    import numpy as np

    rng = np.random.default_rng(cfg.seed)
    tally = Counter()
    for _ in range(cfg.samples):
        c = ent.random_tetrahedron_point(rng)
        rho = ent.bell_diagonal_state(c)
        octo = ent.tetra_membership(c, cfg.tol).in_octohedron
        tally["octohedron" if octo else "outside"] += 1
        tally[f"ppt_agrees={octo == ent.ppt_verdict(rho, tol=cfg.tol).separable}"] += 1
        tally[f"reduction_agrees={octo == ent.reduction_verdict(rho, tol=cfg.tol).separable}"] += 1
        if not octo:
            tally[f"geometric_detects={ent.geometric_report(ent.two_qubit_form(rho), cfg.tol).verdict.entangled}"] += 1
            tally[f"majorization_detects={ent.majorization_verdict(rho, tol=cfg.tol).entangled}"] += 1
    return tally


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=SampleConfig.samples)
    ap.add_argument("--seed", type=int, default=SampleConfig.seed)
    args = ap.parse_args(argv)
    for k, v in sorted(run(SampleConfig(args.samples, args.seed)).items()):
        print(f"{k}: {v}")


if __name__ == "__main__":
    main()
