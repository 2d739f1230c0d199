"""Print the small worked examples from the fixture corpus."""
from pathlib import Path

import numpy as np

from kreinschur import krein_schur as ks
from kreinschur.completion import IncompleteBlock, minimal_completion, nu_minus
from kreinschur.io import load_problem

FIX = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
np.set_printoptions(precision=6, suppress=True)


def load(name, need_operator=True):
    return load_problem((FIX / f"{name}.json").read_text(), need_operator)


def main():
    p = load("krein_running")
    print("W =\n", p.operator.real)
    print("W_/[S] =\n", ks.krein_schur_complement(p.operator, p.subspace, p.space).real)
    print("W_[S] =\n", ks.krein_compression(p.operator, p.subspace, p.space).real)
    for name in ("complete_psd", "complete_indefinite", "complete_zero_w12"):
        q = load(name, need_operator=False)
        P = IncompleteBlock(q.subspace, q.w11, q.w12, q.space)
        w22, W = minimal_completion(P)
        print(f"{name}: w22_min = {w22.real.ravel()}, nu_minus = {nu_minus(W, q.space.J)}\n", W.real)


if __name__ == "__main__":
    main()
