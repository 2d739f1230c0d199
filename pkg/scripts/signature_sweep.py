"""Deviation of the Krein Schur complement under equivalent signatures J_alpha.

Sweeps the size of the J-unitary generator: larger generators give worse
conditioned alpha, and the deviation grows with cond(alpha).
"""
import argparse

import numpy as np

from kreinschur.generators import random_krein_selfadjoint, random_krein_space, random_subspace
from kreinschur.krein import random_signature
from kreinschur.krein_schur import (
    is_weakly_complementable_krein,
    krein_schur_complement,
    krein_schur_complement_alt,
)
from kreinschur.numkernel import opnorm


def sweep(scales, instances: int, seed: int):
    rows = []
    for scale in scales:
        worst, cond, rejected = 0.0, 0.0, 0
        for i in range(instances):
            rng = np.random.default_rng([seed, i])
            n = int(rng.integers(2, 9))
            space = random_krein_space(rng, n)
            W = random_krein_selfadjoint(rng, space)
            S = random_subspace(rng, n)
            if not is_weakly_complementable_krein(W, S, space):
                continue
            X = krein_schur_complement(W, S, space)
            alt = random_signature(space, seed=[seed, i], scale=scale)
            cond = max(cond, np.linalg.cond(alt.alpha))
            try:
                Xa = krein_schur_complement_alt(W, S, space, alt)
            except ValueError:
                # J_alpha W fails the metric selfadjointness check at eq_rel
                rejected += 1
                continue
            worst = max(worst, opnorm(Xa - X) / opnorm(W))
        rows.append((scale, cond, worst, rejected))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scales", type=float, nargs="+", default=[0.1, 0.5, 1.0, 2.0, 4.0])
    args = ap.parse_args()
    print(f"{'scale':>6} {'max cond(alpha)':>16} {'max rel dev':>12} {'rejected':>9}")
    for scale, cond, dev, rejected in sweep(args.scales, args.instances, args.seed):
        print(f"{scale:6.2f} {cond:16.3e} {dev:12.3e} {rejected:9d}")


if __name__ == "__main__":
    main()
