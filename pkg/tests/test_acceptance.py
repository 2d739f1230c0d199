"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Instances are drawn with ``default_rng([criterion, i])`` so every run sees the
same corpus.  Dimensions are uniform on 1..8 unless a criterion needs more.
"""
import time

import numpy as np
import pytest

from kreinschur import errors
from kreinschur.completion import (
    IncompleteBlock,
    assemble_completion,
    minimal_completion,
    nu_minus,
    validate_completion,
)
from kreinschur.generators import (
    complex_normal,
    hermitian_with_singular_block,
    random_incomplete_block,
    random_indefinite_with_neutral,
    random_krein_selfadjoint,
    random_krein_space,
    random_psd,
    random_regular_subspace,
    random_semidefinite,
    random_sign_congruence,
    random_subspace,
)
from kreinschur.hilbert import (
    Subspace,
    classical_shorted,
    is_weakly_complementable,
    orthonormalize,
    projection_formula_E,
    schur_complement,
    signed_split,
)
from kreinschur.io import load_problem
from kreinschur.krein import KreinSpace, is_regular_subspace
from kreinschur.krein_schur import (
    is_complementable_krein,
    is_weakly_complementable_krein,
    krein_compression,
    krein_schur_complement,
    krein_schur_regular,
    mary_schur,
    mmp_schur,
)
from kreinschur.numkernel import hermitize, opnorm, order_slack
from kreinschur.oracle import (
    verify_inf_over_projections,
    verify_order_set_max,
    verify_signature_independence,
    verify_supinf_minmax,
)

from conftest import ACCEPTANCE

MAX_DIM = 8
FIXTURES = __import__("pathlib").Path(__file__).parent / "fixtures"


def record(number: int, ok: bool, summary: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {summary}"
    ACCEPTANCE[number] = line
    print(line)
    assert ok, line


def rng_for(criterion: int, i: int) -> np.random.Generator:
    return np.random.default_rng([criterion, i])


def dim(rng, low: int = 1) -> int:
    return int(rng.integers(low, MAX_DIM + 1))


def weakly_complementable_suite(count: int = 200):
    """Random sign-congruence ``B`` with random ``S``, kept when weakly complementable."""
    out, i = [], 0
    while len(out) < count:
        rng = rng_for(2, i)
        i += 1
        n = dim(rng)
        B = random_sign_congruence(rng, n)
        S = random_subspace(rng, n)
        if is_weakly_complementable(B, S):
            out.append((B, S))
    return out, i


@pytest.fixture(scope="module")
def suite2():
    return weakly_complementable_suite()


def test_criterion_01_classical_shorted_operator():
    start = time.perf_counter()
    worst = 0.0
    for i in range(200):
        rng = rng_for(1, i)
        n = dim(rng)
        B = random_psd(rng, n, rank=int(rng.integers(0, n + 1)))
        S = random_subspace(rng, n)
        dev = opnorm(schur_complement(B, S) - classical_shorted(B, S))
        worst = max(worst, dev / max(opnorm(B), 1e-300))
    elapsed = time.perf_counter() - start
    record(1, worst <= 1e-8 and elapsed < 5.0,
           f"200 PSD instances, max rel deviation {worst:.2e}, {elapsed:.2f}s")


def test_criterion_02_nested_quotients(suite2):
    instances, drawn = suite2
    worst = 0.0
    for B, S in instances:
        X = schur_complement(B, S)
        split = signed_split(B, S)
        a = schur_complement(schur_complement(B, split.plus), split.minus)
        b = schur_complement(schur_complement(B, split.minus), split.plus)
        worst = max(worst, max(opnorm(a - X), opnorm(b - X)) / max(opnorm(B), 1e-300))
    band = 0.0
    for i in range(200):
        rng = rng_for(20, i)
        n = dim(rng, 2)
        k = int(rng.integers(1, n))
        B, S = hermitian_with_singular_block(rng, n, k, nullity=int(rng.integers(1, k + 1)))
        X = schur_complement(B, S)
        for zero_to in ("plus", "minus"):
            sp = signed_split(B, S, zero_to=zero_to)
            for first, second in ((sp.plus, sp.minus), (sp.minus, sp.plus)):
                Y = schur_complement(schur_complement(B, first), second)
                band = max(band, opnorm(Y - X) / opnorm(B))
    record(2, worst <= 1e-8 and band <= 1e-8,
           f"200 WC instances ({drawn} drawn) nested dev {worst:.2e}; "
           f"200 singular-block instances zero-band dev {band:.2e}")


def test_criterion_03_projection_formula(suite2):
    instances, _ = suite2
    worst = 0.0
    for B, S in instances:
        E = projection_formula_E(B, S).E
        n = B.shape[0]
        dev = opnorm((np.eye(n) - E) @ B - schur_complement(B, S))
        worst = max(worst, dev / max(opnorm(B), 1e-300))
    record(3, worst <= 1e-10, f"{len(instances)} instances, max rel deviation {worst:.2e}")


def nonnegative_instance(rng):
    """``(B, S)`` with ``S`` B-nonnegative: PSD ``B`` or ``S`` inside a nonnegative spectral part."""
    n = dim(rng)
    if rng.random() < 0.5:
        return random_psd(rng, n, rank=int(rng.integers(0, n + 1))), random_subspace(rng, n)
    B = random_sign_congruence(rng, n)
    lam, U = np.linalg.eigh(B)
    keep = U[:, lam >= -1e-12 * max(np.abs(lam).max(), 1.0)]
    if keep.shape[1] == 0:
        return B, Subspace.zero(n)
    k = int(rng.integers(0, keep.shape[1] + 1))
    if k == 0:
        return B, Subspace.zero(n)
    return B, orthonormalize(keep @ complex_normal(rng, (keep.shape[1], k)), ambient_dim=n)


def test_criterion_04_variational_suites():
    start = time.perf_counter()
    stats = {"inf_over_projections": [], "supinf_minmax": [], "order_set_max": []}
    attained = 0
    ok = True
    for i in range(100):
        rng = rng_for(4, i)
        B, S = nonnegative_instance(rng)
        seed = 4000 + i
        for rep in (verify_inf_over_projections(B, S, 100, seed),
                    verify_order_set_max(B, S, 100, seed)):
            stats[rep.name].append(rep)
            ok &= rep.verdict
            attained += rep.attainment_residual is not None
        while True:
            n = dim(rng)
            Bi, Si = random_sign_congruence(rng, n), random_subspace(rng, n)
            if is_weakly_complementable(Bi, Si):
                break
        rep = verify_supinf_minmax(Bi, Si, 100, seed)
        stats[rep.name].append(rep)
        ok &= rep.verdict
    elapsed = time.perf_counter() - start
    parts = []
    for name, reps in stats.items():
        slack = min(r.worst_slack for r in reps)
        res = max((r.attainment_residual or 0.0) for r in reps)
        parts.append(f"{name} slack {slack:.1e} att {res:.1e}")
    record(4, ok and elapsed < 60.0, "100x100 each; " + "; ".join(parts) + f"; {elapsed:.1f}s")


def subspace_with_neutral(rng, space: KreinSpace) -> Subspace:
    """Random ``S`` containing a J-neutral vector, so ``S`` is usually not regular."""
    n = space.dim
    lam, U = np.linalg.eigh(space.J)
    x = U[:, 0] + U[:, -1] * np.exp(2j * np.pi * rng.random())
    extra = int(rng.integers(0, n - 1))
    return orthonormalize(np.column_stack([x, complex_normal(rng, (n, extra))]), ambient_dim=n)


def test_criterion_05_signature_independence():
    worst, mismatches, kept, drawn, singular = 0.0, 0, 0, 0, 0
    ok = True
    while kept < 100:
        rng = rng_for(5, drawn)
        drawn += 1
        n = dim(rng)
        space = random_krein_space(rng, n)
        W = random_krein_selfadjoint(rng, space, rank=int(rng.integers(0, n + 1)))
        neutral = n >= 2 and rng.random() < 0.4
        S = subspace_with_neutral(rng, space) if neutral else random_subspace(rng, n)
        if not is_weakly_complementable_krein(W, S, space):
            continue
        kept += 1
        singular += not is_regular_subspace(S, space)
        rep = verify_signature_independence(W, S, space, trials=20, seed=drawn)
        ok &= rep.verdict
        worst = max(worst, rep.max_deviation)
        mismatches += rep.details["predicate_mismatches"]
    record(5, ok and worst <= 1e-6 and mismatches == 0,
           f"100 spaces x 20 signatures ({drawn} drawn, {singular} S not regular), max rel deviation {worst:.2e}, "
           f"predicate mismatches {mismatches}")


def test_criterion_06_regular_routes():
    worst, mary_runs, mmp_runs, kept, drawn = 0.0, 0, 0, 0, 0
    while kept < 200:
        rng = rng_for(6, drawn)
        drawn += 1
        n = dim(rng)
        space = random_krein_space(rng, n)
        W = random_krein_selfadjoint(rng, space, rank=int(rng.integers(0, n + 1)))
        S = random_regular_subspace(rng, space)
        if not is_weakly_complementable_krein(W, S, space):
            continue
        kept += 1
        ref = max(opnorm(W), 1e-300)
        X = krein_schur_complement(W, S, space)
        results = [krein_schur_regular(W, S, space)]
        try:
            results.append(mary_schur(W, S, space))
            mary_runs += 1
        except (errors.RangeNotRegular, errors.NullspaceNotRegular):
            pass
        if is_complementable_krein(W, S, space):
            results.append(mmp_schur(W, S, space))
            mmp_runs += 1
        for Y in results:
            worst = max(worst, opnorm(Y - X) / ref)
    p = load_problem((FIXTURES / "krein_running.json").read_text())
    ex = krein_schur_regular(p.operator, p.subspace, p.space)
    ex_dev = float(np.abs(ex - np.diag([0.0, -1.0])).max())
    record(6, worst <= 1e-8 and ex_dev <= 1e-12,
           f"200 regular instances (mary {mary_runs}, mmp {mmp_runs}), max rel deviation "
           f"{worst:.2e}; 2x2 example off by {ex_dev:.1e}")


def non_psd_z(rng, J2, margin: float = 1e-2):
    """``z = J2 H`` with ``H`` Hermitian having a negative eigenvalue well past ``margin``."""
    m = J2.shape[0]
    G = complex_normal(rng, (m, m))
    H = G.conj().T @ G
    v = complex_normal(rng, m)
    v /= np.linalg.norm(v)
    t = np.vdot(v, H @ v).real + margin + rng.uniform(0.0, 1.0)
    H = hermitize(H - t * np.outer(v, v.conj()))
    assert np.linalg.eigvalsh(H).min() < -1e-6
    return J2 @ H


def solvable_blocks(criterion: int, count: int):
    out, i = [], 0
    while len(out) < count:
        rng = rng_for(criterion, i)
        i += 1
        space = random_krein_space(rng, dim(rng, 2))
        out.append((rng, random_incomplete_block(rng, space)))
    return out


def test_criterion_07_completion():
    eq, psd_ok, strict_ok, checked = True, True, True, 0
    for rng, P in solvable_blocks(7, 200):
        J2 = P.frame.J2
        w22, W = minimal_completion(P)
        base = nu_minus(P.w11, P.frame.J1)
        eq &= nu_minus(W, P.space.J) == base
        for _ in range(3):
            G = complex_normal(rng, (J2.shape[0],) * 2)
            z = J2 @ (G.conj().T @ G)
            psd_ok &= validate_completion(P, w22 + z)
            psd_ok &= nu_minus(assemble_completion(P, w22 + z), P.space.J) == base
            bad = assemble_completion(P, w22 + non_psd_z(rng, J2))
            strict_ok &= nu_minus(bad, P.space.J) > base
            checked += 1
    hand = []
    for name, want, nu in (("complete_psd", [[1, 2], [2, 4]], 0),
                           ("complete_indefinite", [[-1, 1], [-1, 1]], 1)):
        p = load_problem((FIXTURES / f"{name}.json").read_text(), need_operator=False)
        P = IncompleteBlock(p.subspace, p.w11, p.w12, p.space)
        _, W = minimal_completion(P)
        hand.append(np.abs(W - np.array(want)).max() <= 1e-12 and nu_minus(W, p.space.J) == nu)
    record(7, eq and psd_ok and strict_ok and all(hand),
           f"200 instances: nu_minus equal {eq}, {checked} PSD-z kept {psd_ok}, "
           f"{checked} non-PSD-z increased {strict_ok}; hand examples {hand}")


def test_criterion_08_compression_invariance():
    worst, positive = 0.0, 0.0
    for rng, P in solvable_blocks(8, 50):
        J, J2 = P.space.J, P.frame.J2
        w22, W = minimal_completion(P)
        C0 = krein_compression(W, P.S, P.space)
        ref = max(opnorm(W), 1.0)
        for _ in range(10):
            G = complex_normal(rng, (J2.shape[0],) * 2)
            Wz = assemble_completion(P, w22 + J2 @ (G.conj().T @ G))
            C = krein_compression(Wz, P.S, P.space)
            worst = max(worst, opnorm(C - C0) / ref)
            slack = order_slack(np.zeros_like(Wz), hermitize(J @ (Wz - C)))
            positive = min(positive, slack / max(opnorm(Wz), 1e-300))
    record(8, worst <= 1e-8 and positive >= -1e-8,
           f"50 x 10 completions, compression spread {worst:.2e}, worst Krein slack {positive:.1e}")


def test_criterion_09_semidefinite_characterization():
    semi = 0
    for i in range(100):
        rng = rng_for(9, i)
        n = dim(rng)
        B = random_semidefinite(rng, n)
        semi += sum(is_weakly_complementable(B, random_subspace(rng, n)) for _ in range(20))
    neutral = 0
    for i in range(100):
        rng = rng_for(90, i)
        n = dim(rng, 2)
        B, x0 = random_indefinite_with_neutral(rng, n)
        S = orthonormalize(x0.reshape(-1, 1), ambient_dim=n)
        neutral += not is_weakly_complementable(B, S)
    record(9, semi == 2000 and neutral == 100,
           f"semidefinite WC {semi}/2000, neutral x0 rejected {neutral}/100")


def test_criterion_10_cli_contract(capsys):
    from test_cli import CASES, GOLDEN, INPUT_ERRORS, run

    golden_ok, codes = 0, {0: 0, 1: 0, 2: 0}
    for name, args, code in CASES:
        got, out, _ = run(args, capsys)
        golden_ok += got == code and out == (GOLDEN / f"{name}.json").read_text()
        codes[got] += 1
    for args in INPUT_ERRORS:
        got, out, _ = run(args, capsys)
        golden_ok += got == 2 and out == ""
        codes[got] += 1
    total = len(CASES) + len(INPUT_ERRORS)
    with capsys.disabled():
        record(10, golden_ok == total and all(codes.values()),
               f"{golden_ok}/{total} cases matched; exit codes seen {codes}")
