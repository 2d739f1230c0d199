"""Randomized checks of the extremal characterizations of the Schur complement.

Suprema and infima over projection families are checked in two halves:
one-sided bounds on sampled projections, and exact attainment at the
constructed optimizers.  Every function returns a :class:`Report`; nothing
here asserts.

Slacks and residuals in a report are relative to the norm of the operator
under test.  Trial ``i`` draws from ``np.random.default_rng([seed, i])`` so
trials can run in any order with the same aggregate result.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import NotNonnegative, NotWeaklyComplementable
from .hilbert import (
    Subspace,
    b_selfadjoint_projection,
    complement_basis,
    is_complementable,
    schur_complement,
    signed_split,
    three_term_decomposition,
)
from .krein import KreinSpace, random_signature
from .krein_schur import (
    is_complementable_krein,
    is_weakly_complementable_alt,
    is_weakly_complementable_krein,
    krein_projection_element,
    krein_schur_complement,
    krein_schur_complement_alt,
)
from .numkernel import DEFAULT_TOL, Tolerances, _require_hermitian, as_matrix, hermitize, opnorm, order_slack

__all__ = [
    "Report",
    "SCALES",
    "projection_with_nullspace",
    "sample_projection_with_nullspace",
    "verify_inf_over_projections",
    "verify_supinf_minmax",
    "verify_order_set_max",
    "verify_order_set_min",
    "verify_three_term",
    "verify_krein_identities",
    "verify_signature_independence",
]

SCALES = (0.1, 1.0, 10.0)


@dataclass
class Report:
    name: str
    trials: int
    worst_slack: float = 0.0
    attainment_residual: float | None = None
    max_deviation: float | None = None
    verdict: bool = True
    witness: np.ndarray | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "name": self.name,
            "trials": self.trials,
            "worst_slack": self.worst_slack,
            "attainment_residual": self.attainment_residual,
            "max_deviation": self.max_deviation,
            "verdict": "PASS" if self.verdict else "FAIL",
            "details": self.details,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


class _Tracker:
    """Keeps the worst (smallest) slack and the matrix that produced it."""

    def __init__(self):
        self.worst = np.inf
        self.witness = None

    def add(self, slack: float, witness) -> None:
        if slack < self.worst:
            self.worst, self.witness = slack, witness

    @property
    def value(self) -> float:
        return 0.0 if self.worst == np.inf else float(self.worst)


def _rel(x: float, ref: float) -> float:
    return x / ref if ref > 0 else x


def _rng(seed, i: int) -> np.random.Generator:
    return np.random.default_rng([0 if seed is None else int(seed), i])


def projection_with_nullspace(S: Subspace, e) -> np.ndarray:
    """``Q = [[0, e], [0, I]]`` in the frame ``S ⊕ S^⊥``; ``e`` is ``k x (n-k)``."""
    V = S.basis
    W = complement_basis(V)
    e = np.asarray(e, dtype=np.complex128).reshape(V.shape[1], W.shape[1])
    return V @ e @ W.conj().T + W @ W.conj().T


def sample_projection_with_nullspace(S: Subspace, seed=None, scale: float = 1.0) -> np.ndarray:
    """Random projection with nullspace ``S``; entries of ``e`` have modulus ``<= scale``."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    k = S.dim
    m = S.ambient_dim - k
    e = rng.uniform(-1, 1, (k, m)) + 1j * rng.uniform(-1, 1, (k, m))
    return projection_with_nullspace(S, scale * e / np.sqrt(2))


def _h(X: np.ndarray) -> np.ndarray:
    return X.conj().T


def _require_nonnegative(B: np.ndarray, S: Subspace, tol: Tolerances) -> None:
    if signed_split(B, S, tol).minus.dim:
        raise NotNonnegative("the subspace is not B-nonnegative")


def verify_inf_over_projections(B, S: Subspace, trials: int = 100, seed=0,
                                tol: Tolerances = DEFAULT_TOL) -> Report:
    """``B_{/S} <= Q* B Q`` for sampled ``Q`` with ``N(Q) = S``, equality at ``I - Q_B``.

    ``Q_B`` is the B-selfadjoint projection onto ``S`` (complementable case).

    Raises
    ------
    NotNonnegative, NotWeaklyComplementable
    """
    B = _require_hermitian(B, tol)
    _require_nonnegative(B, S, tol)
    X = schur_complement(B, S, tol)
    ref = opnorm(B)
    track = _Tracker()
    for i in range(trials):
        Q = sample_projection_with_nullspace(S, _rng(seed, i), SCALES[i % len(SCALES)])
        track.add(_rel(order_slack(X, _h(Q) @ B @ Q), ref), Q)
    report = Report("inf_over_projections", trials, worst_slack=track.value, witness=track.witness)
    if is_complementable(B, S, tol):
        Q0 = np.eye(B.shape[0]) - b_selfadjoint_projection(B, S, tol).Q
        report.attainment_residual = _rel(
            max(opnorm(_h(Q0) @ B @ Q0 - X), opnorm(B @ Q0 - X)), ref)
    report.verdict = _verdict(report, tol)
    return report


def _verdict(report: Report, tol: Tolerances, dev_tol: float | None = None) -> bool:
    ok = report.worst_slack >= -tol.order_rel
    if report.attainment_residual is not None:
        ok &= report.attainment_residual <= tol.eq_rel
    if report.max_deviation is not None:
        ok &= report.max_deviation <= (tol.eq_rel if dev_tol is None else dev_tol)
    return bool(ok)


def verify_supinf_minmax(B, S: Subspace, trials: int = 100, seed=0,
                         tol: Tolerances = DEFAULT_TOL, inner: int = 2) -> Report:
    """Nested bounds for ``S = S+ ⊕_B S-``.

    For ``Q-`` with nullspace ``S-`` and ``Q+`` with nullspace ``S+``:
    ``Q-* B_{/S+} Q- <= Q-* Q+* B Q+ Q-`` and ``Q-* B_{/S+} Q- <= B_{/S}``;
    the reverse nesting gives ``Q+* B_{/S-} Q+ >= Q+* Q-* B Q- Q+`` and
    ``Q+* B_{/S-} Q+ >= B_{/S}``.  When ``B`` is complementable the
    projections ``I - Q±`` from the projection sum attain both extrema.

    Raises
    ------
    NotWeaklyComplementable
    """
    B = _require_hermitian(B, tol)
    split = signed_split(B, S, tol)
    X = schur_complement(B, S, tol)
    Xp = schur_complement(B, split.plus, tol)
    Xm = schur_complement(B, split.minus, tol)
    ref = opnorm(B)
    track = _Tracker()
    for i in range(trials):
        rng = _rng(seed, i)
        s = SCALES[i % len(SCALES)]
        Qm = sample_projection_with_nullspace(split.minus, rng, s)
        Qp = sample_projection_with_nullspace(split.plus, rng, s)
        low = _h(Qm) @ Xp @ Qm
        high = _h(Qp) @ Xm @ Qp
        track.add(_rel(order_slack(low, X), ref), Qm)
        track.add(_rel(order_slack(X, high), ref), Qp)
        for _ in range(inner):
            Rp = sample_projection_with_nullspace(split.plus, rng, SCALES[int(rng.integers(len(SCALES)))])
            Rm = sample_projection_with_nullspace(split.minus, rng, SCALES[int(rng.integers(len(SCALES)))])
            track.add(_rel(order_slack(low, _h(Qm) @ _h(Rp) @ B @ Rp @ Qm), ref), Rp @ Qm)
            track.add(_rel(order_slack(_h(Qp) @ _h(Rm) @ B @ Rm @ Qp, high), ref), Rm @ Qp)
    report = Report("supinf_minmax", trials, worst_slack=track.value, witness=track.witness,
                    details={"dim_plus": split.plus.dim, "dim_minus": split.minus.dim})
    if is_complementable(B, S, tol):
        ps = b_selfadjoint_projection(B, S, tol, split=split)
        n = B.shape[0]
        Ep, Em = np.eye(n) - ps.Q_plus, np.eye(n) - ps.Q_minus
        res = max(
            opnorm(_h(Ep) @ B @ Ep - Xp),
            opnorm(_h(Em) @ B @ Em - Xm),
            opnorm(_h(Em) @ _h(Ep) @ B @ Ep @ Em - X),
            opnorm(_h(Ep) @ _h(Em) @ B @ Em @ Ep - X),
            opnorm(ps.Q - ps.Q_plus - ps.Q_minus),
        )
        report.attainment_residual = _rel(res, ref)
    report.verdict = _verdict(report, tol)
    return report


def verify_order_set_max(B, S: Subspace, trials: int = 100, seed=0,
                         tol: Tolerances = DEFAULT_TOL, name: str = "order_set_max") -> Report:
    """``B_{/S}`` is the largest ``X <= B`` with ``R(X) ⊆ S^⊥`` (``S`` B-nonnegative).

    The worst slack covers membership (``B - B_{/S} >= 0``) and dominance
    over sampled members; the attainment residual is ``||P_S B_{/S}||``.

    Raises
    ------
    NotNonnegative, NotWeaklyComplementable
    """
    B = _require_hermitian(B, tol)
    _require_nonnegative(B, S, tol)
    X = schur_complement(B, S, tol)
    ref = opnorm(B)
    W = complement_basis(S.basis)
    m = W.shape[1]
    xc = hermitize(_h(W) @ X @ W)
    track = _Tracker()
    track.add(_rel(order_slack(X, B), ref), X)
    accepted = 0
    for i in range(trials):
        rng = _rng(seed, i)
        s = SCALES[i % len(SCALES)] * max(ref, 1.0)
        G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        member = X - s * W @ (_h(G) @ G) / (2 * m or 1) @ _h(W)
        track.add(_rel(order_slack(member, X), ref), member)
        H = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        cand = W @ (xc + s * 0.1 * hermitize(H) - 0.05 * s * np.eye(m)) @ _h(W)
        if order_slack(cand, B) >= 0:
            accepted += 1
            track.add(_rel(order_slack(cand, X), ref), cand)
    report = Report(name, trials, worst_slack=track.value, witness=track.witness,
                    attainment_residual=_rel(opnorm(S.projector @ X), ref),
                    details={"random_members": accepted})
    report.verdict = _verdict(report, tol)
    return report


def verify_order_set_min(B, S: Subspace, trials: int = 100, seed=0,
                         tol: Tolerances = DEFAULT_TOL) -> Report:
    """``B_{/S}`` is the smallest ``X >= B`` with ``R(X) ⊆ S^⊥`` (``S`` B-nonpositive).

    Runs :func:`verify_order_set_max` on ``-B``; this uses ``(-B)_{/S} = -B_{/S}``.
    """
    B = _require_hermitian(B, tol)
    return verify_order_set_max(-B, S, trials, seed, tol, name="order_set_min")


def verify_three_term(B, S: Subspace, tol: Tolerances = DEFAULT_TOL) -> Report:
    """``B_{/S} = B1 + (B2)_{/S+} - (B3)_{/S-}`` for the three-term decomposition."""
    B = _require_hermitian(B, tol)
    split = signed_split(B, S, tol)
    B1, B2, B3 = three_term_decomposition(B, S, tol, split=split)
    X = schur_complement(B, S, tol)
    ref = opnorm(B)
    dev = max(
        opnorm(B1 + B2 - B3 - B),
        opnorm(B1 + schur_complement(B2, split.plus, tol) - schur_complement(B3, split.minus, tol) - X),
    )
    worst = min(order_slack(np.zeros_like(B2), B2), order_slack(np.zeros_like(B3), B3)) if B.size else 0.0
    null_res = max(opnorm(B1 @ S.basis), opnorm(B2 @ split.minus.basis), opnorm(B3 @ split.plus.basis))
    report = Report("three_term", 0, worst_slack=_rel(worst, ref),
                    attainment_residual=_rel(null_res, ref), max_deviation=_rel(dev, ref))
    report.verdict = _verdict(report, tol)
    return report


def verify_krein_identities(W, S: Subspace, space: KreinSpace, trials: int = 100, seed=0,
                            tol: Tolerances = DEFAULT_TOL) -> Report:
    """Krein-space forms of the variational results, computed with ``E^# W E``.

    Slacks are smallest eigenvalues of ``J (upper - lower)``.  Checked:
    ``E-^# W_{/[S+]} E- <= E-^# E+^# W E+ E-`` and ``E-^# W_{/[S+]} E- <= W_{/[S]}``
    on samples; for a W-nonnegative ``S`` also ``W_{/[S]} <= E^# W E`` and
    membership ``W_{/[S]} <= W``, ``R(W_{/[S]}) ⊆ S^[⊥]``; nested quotients
    ``(W_{/[S±]})_{/[S∓]}`` as a deviation; and ``W(I - Q) = W_{/[S]}`` with
    ``WQ = Q^# W`` when complementable.

    Raises
    ------
    NotWeaklyComplementable
    """
    W = as_matrix(W)
    J = space.J
    if not is_weakly_complementable_krein(W, S, space, tol):
        raise NotWeaklyComplementable("JW is not weakly complementable")
    X = krein_schur_complement(W, S, space, tol)
    split = signed_split(hermitize(J @ W), S, tol)
    Xp = krein_schur_complement(W, split.plus, space, tol)
    Xm = krein_schur_complement(W, split.minus, space, tol)
    ref = opnorm(W)
    sharp = lambda E: J @ _h(E) @ J

    def kslack(lower, upper) -> float:
        return _rel(order_slack(np.zeros_like(W), hermitize(J @ (upper - lower))), ref)

    track = _Tracker()
    nonneg = split.minus.dim == 0
    if nonneg:
        track.add(kslack(X, W), X)
    for i in range(trials):
        rng = _rng(seed, i)
        s = SCALES[i % len(SCALES)]
        Em = sample_projection_with_nullspace(split.minus, rng, s)
        Ep = sample_projection_with_nullspace(split.plus, rng, s)
        low = sharp(Em) @ Xp @ Em
        track.add(kslack(low, sharp(Em) @ sharp(Ep) @ W @ Ep @ Em), Ep @ Em)
        track.add(kslack(low, X), Em)
        if nonneg:
            E = sample_projection_with_nullspace(S, rng, s)
            track.add(kslack(X, sharp(E) @ W @ E), E)
    dev = max(
        opnorm(krein_schur_complement(Xp, split.minus, space, tol) - X),
        opnorm(krein_schur_complement(Xm, split.plus, space, tol) - X),
    )
    res = opnorm(_h(S.basis) @ J @ X) if nonneg else 0.0
    if is_complementable_krein(W, S, space, tol):
        Q = krein_projection_element(W, S, space, tol)
        res = max(res, opnorm(W @ (np.eye(space.dim) - Q) - X), opnorm(W @ Q - sharp(Q) @ W))
    report = Report("krein_identities", trials, worst_slack=track.value, witness=track.witness,
                    attainment_residual=_rel(res, ref), max_deviation=_rel(dev, ref),
                    details={"dim_plus": split.plus.dim, "dim_minus": split.minus.dim})
    report.verdict = _verdict(report, tol)
    return report


def verify_signature_independence(W, S: Subspace, space: KreinSpace, trials: int = 20, seed=0,
                                  tol: Tolerances = DEFAULT_TOL, scale: float = 0.5,
                                  dev_tol: float = 1e-6) -> Report:
    """Same predicate verdict and same Schur complement for sampled ``J_alpha``.

    The ``J_alpha`` route runs entirely in ``<alpha^{-1} x, y>``.  For
    Krein-nonnegative ``W`` the worst slack also tracks ``J W_{/[S]} >= 0``.

    Raises
    ------
    NotWeaklyComplementable
    """
    W = as_matrix(W)
    verdict = is_weakly_complementable_krein(W, S, space, tol)
    if not verdict:
        raise NotWeaklyComplementable("JW is not weakly complementable")
    X = krein_schur_complement(W, S, space, tol)
    ref = opnorm(W)
    positive = W.size == 0 or order_slack(np.zeros_like(W), hermitize(space.J @ W)) >= -tol.order_rel * ref
    worst_dev, mismatches = 0.0, 0
    track = _Tracker()
    witness = None
    for i in range(trials):
        alt = random_signature(space, seed=[0 if seed is None else int(seed), i], scale=scale)
        if is_weakly_complementable_alt(W, S, space, alt, tol) != verdict:
            mismatches += 1
            witness = alt.J_alpha
            continue
        Xa = krein_schur_complement_alt(W, S, space, alt, tol)
        dev = _rel(opnorm(Xa - X), ref)
        if dev > worst_dev:
            worst_dev, witness = dev, alt.J_alpha
        if positive:
            track.add(_rel(order_slack(np.zeros_like(W), hermitize(space.J @ Xa)), ref), Xa)
    report = Report("signature_independence", trials, worst_slack=track.value,
                    max_deviation=worst_dev, witness=witness,
                    details={"predicate_mismatches": mismatches, "krein_positive": bool(positive)})
    report.verdict = _verdict(report, tol, dev_tol) and mismatches == 0
    return report
