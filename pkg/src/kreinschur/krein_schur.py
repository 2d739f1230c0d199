"""Schur complement of a Krein-selfadjoint operator.

``W_{/[S]} = J (JW)_{/S}``.  Besides the defining route there are four
independent constructions that must agree with it: the frame formula for a
regular ``S``, the Krein Moore-Penrose formula, the projection ``W(I - Q)``
and the polar-factorization identity ``D (I - P_M) D^#``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    NotComplementable,
    NotInRange,
    NotKreinSelfadjoint,
    NotRegular,
    NotWeaklyComplementable,
    NullspaceNotRegular,
    RangeNotRegular,
)
from .hilbert import (
    Subspace,
    b_selfadjoint_projection,
    is_complementable,
    is_weakly_complementable,
    is_weakly_complementable_metric,
    schur_complement,
    schur_complement_metric,
    signed_split,
)
from .krein import (
    AltSignature,
    KreinSpace,
    PolarFactorization,
    is_krein_selfadjoint,
    krein_orthonormal_basis,
    orthogonal_companion,
    polar_factorization,
)
from .numkernel import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    column_space,
    hermitize,
    numerical_rank,
    opnorm,
    pseudo_inverse,
    reduced_solution,
)

__all__ = [
    "RegularFrame",
    "regular_frame",
    "krein_blocks",
    "is_weakly_complementable_krein",
    "is_complementable_krein",
    "krein_schur_complement",
    "krein_compression",
    "krein_schur_regular",
    "krein_projection_element",
    "krein_moore_penrose",
    "mary_schur",
    "mmp_schur",
    "mmp_schur_direct",
    "krein_schur_complement_alt",
    "is_weakly_complementable_alt",
    "krein_signed_split",
]


class RegularFrame(NamedTuple):
    """``X = [V, Wb]`` with ``X* J X = diag(J1, J2)``; ``X^{-1} = diag(J1, J2) X* J``."""

    V: np.ndarray
    J1: np.ndarray
    Wb: np.ndarray
    J2: np.ndarray

    @property
    def X(self) -> np.ndarray:
        return np.hstack([self.V, self.Wb])

    @property
    def Jd(self) -> np.ndarray:
        k, m = self.J1.shape[0], self.J2.shape[0]
        Jd = np.zeros((k + m, k + m), dtype=np.complex128)
        Jd[:k, :k] = self.J1
        Jd[k:, k:] = self.J2
        return Jd

    def inverse(self, J: np.ndarray) -> np.ndarray:
        return self.Jd @ self.X.conj().T @ J

    @property
    def scale(self) -> float:
        """``||X||^2``; the frame blocks of ``W`` are bounded by ``||X||^2 ||W||``."""
        return max(opnorm(self.X) ** 2, 1.0)


def regular_frame(S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> RegularFrame:
    """J-orthonormal bases of ``S`` and ``S^[⊥]``.

    Raises
    ------
    NotRegular
    """
    V, J1 = krein_orthonormal_basis(S, space, tol)
    Wb, J2 = krein_orthonormal_basis(orthogonal_companion(S, space), space, tol)
    return RegularFrame(V, J1, Wb, J2)


def _selfadjoint(W, space: KreinSpace, tol: Tolerances) -> np.ndarray:
    W = as_matrix(W)
    if not is_krein_selfadjoint(W, space, tol):
        raise NotKreinSelfadjoint("W is not selfadjoint for the Krein metric")
    return W


def krein_blocks(W, frame: RegularFrame, space: KreinSpace):
    """Frame blocks ``(w11, w12, w21, w22)`` of ``X^{-1} W X``."""
    JW = space.J @ as_matrix(W)
    V, Wb, J1, J2 = frame.V, frame.Wb, frame.J1, frame.J2
    JW = hermitize(JW)
    w11 = J1 @ hermitize(V.conj().T @ JW @ V)
    w12 = J1 @ V.conj().T @ JW @ Wb
    w22 = J2 @ hermitize(Wb.conj().T @ JW @ Wb)
    w21 = J2 @ w12.conj().T @ J1
    return w11, w12, w21, w22


def _from_lower_block(block: np.ndarray, frame: RegularFrame, J: np.ndarray) -> np.ndarray:
    # X diag(0, block) X^{-1}
    return frame.Wb @ block @ frame.J2 @ frame.Wb.conj().T @ J


def is_weakly_complementable_krein(W, S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> bool:
    W = _selfadjoint(W, space, tol)
    return is_weakly_complementable(space.J @ W, S, tol)


def is_complementable_krein(W, S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> bool:
    W = _selfadjoint(W, space, tol)
    return is_complementable(space.J @ W, S, tol)


def krein_schur_complement(W, S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``J (JW)_{/S}``.

    Raises
    ------
    NotKreinSelfadjoint, NotWeaklyComplementable
    """
    W = _selfadjoint(W, space, tol)
    return space.J @ schur_complement(space.J @ W, S, tol)


def krein_compression(W, S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``W_[S] = W - W_{/[S]}``."""
    W = as_matrix(W)
    return W - krein_schur_complement(W, S, space, tol)


def krein_schur_regular(W, S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Frame formula ``w22 - y^# y`` for a regular ``S``.

    ``w11 = d d^#`` is the polar factorization of the ``S`` block in
    ``(C^k, J1)`` and ``y`` is the reduced solution of ``w12 = d x``.

    Raises
    ------
    NotRegular, NotWeaklyComplementable
    """
    W = _selfadjoint(W, space, tol)
    frame = regular_frame(S, space, tol)
    w11, w12, _, w22 = krein_blocks(W, frame, space)
    ref = frame.scale * opnorm(W)
    k = w11.shape[0]
    if k == 0:
        return W.copy()
    pf = polar_factorization(w11, KreinSpace(k, frame.J1), tol, scale=ref)
    try:
        y = reduced_solution(w12, pf.D, tol, scale=ref)
    except NotInRange:
        raise NotWeaklyComplementable("R(w12) is not contained in R(d)") from None
    block = w22 - frame.J2 @ y.conj().T @ pf.K_signature @ y
    return _from_lower_block(block, frame, space.J)


def krein_projection_element(W, S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """A projection ``Q`` onto ``S`` with ``W Q = Q^# W``.

    Raises
    ------
    NotComplementable
    """
    W = _selfadjoint(W, space, tol)
    return b_selfadjoint_projection(space.J @ W, S, tol).Q


def _krein_projector(R: np.ndarray, J1: np.ndarray) -> np.ndarray:
    # J1-selfadjoint projection onto R(R); R(R) must be regular
    return R @ np.linalg.solve(R.conj().T @ J1 @ R, R.conj().T @ J1)


def krein_moore_penrose(w11, J1, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Generalized inverse ``X`` of a ``J1``-selfadjoint ``w11`` with
    ``w11 X w11 = w11``, ``X w11 X = X`` and both products ``J1``-selfadjoint
    projections.

    Exists iff ``R(w11)`` and ``N(w11)`` are regular in ``(C^k, J1)``.

    Raises
    ------
    RangeNotRegular, NullspaceNotRegular
    """
    w11, J1 = as_matrix(w11), as_matrix(J1)
    k = w11.shape[0]
    if k == 0:
        return w11.copy()
    ref = opnorm(w11) if scale is None else scale
    R = column_space(w11, tol, scale=ref)
    r = R.shape[1]
    # orthonormal null-space basis from the complement of the row space
    _, _, Vh = np.linalg.svd(w11)
    N = Vh[r:].conj().T
    if r and numerical_rank(hermitize(R.conj().T @ J1 @ R), tol, scale=1.0) < r:
        raise RangeNotRegular("R(w11) is degenerate in the metric of J1")
    if N.shape[1] and numerical_rank(hermitize(N.conj().T @ J1 @ N), tol, scale=1.0) < N.shape[1]:
        raise NullspaceNotRegular("N(w11) is degenerate in the metric of J1")
    eye = np.eye(k, dtype=np.complex128)
    P_range = _krein_projector(R, J1) if r else np.zeros_like(eye)
    P_null = _krein_projector(N, J1) if N.shape[1] else np.zeros_like(eye)
    return (eye - P_null) @ pseudo_inverse(w11, tol, scale=ref) @ P_range


def mary_schur(W, S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``w22 - w12^# w11^† w12`` with the Krein Moore-Penrose inverse of ``w11``.

    Raises
    ------
    NotRegular, RangeNotRegular, NullspaceNotRegular, NotWeaklyComplementable
    """
    W = _selfadjoint(W, space, tol)
    frame = regular_frame(S, space, tol)
    w11, w12, w21, w22 = krein_blocks(W, frame, space)
    if w11.shape[0] == 0:
        return W.copy()
    ref = frame.scale * opnorm(W)
    X = krein_moore_penrose(w11, frame.J1, tol, scale=ref)
    if not np.allclose(w11 @ X @ w12, w12, rtol=0, atol=tol.range_rel * max(ref, 1e-300)):
        raise NotWeaklyComplementable("R(w12) is not contained in R(w11)")
    return _from_lower_block(w22 - w21 @ X @ w12, frame, space.J)


def mmp_schur(W, S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL,
              factorization: PolarFactorization | None = None) -> np.ndarray:
    """``D (D^# - T)`` with ``T = D^# Q`` for ``W = D D^#`` and ``Q`` from
    :func:`krein_projection_element`.

    Raises
    ------
    NotComplementable
    """
    W = _selfadjoint(W, space, tol)
    Q = krein_projection_element(W, S, space, tol)
    pf = polar_factorization(W, space, tol) if factorization is None else factorization
    Dsh = pf.adjoint(space.J)
    return pf.D @ (Dsh - Dsh @ Q)


def mmp_schur_direct(W, S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL,
                     factorization: PolarFactorization | None = None) -> np.ndarray:
    """``D (I - P) D^#`` with ``P`` the K-selfadjoint projection onto ``M = D^#(S)``.

    Raises
    ------
    NotComplementable, NotRegular
    """
    W = _selfadjoint(W, space, tol)
    if not is_complementable_krein(W, S, space, tol):
        raise NotComplementable("R(b) is not contained in R(a) for JW")
    pf = polar_factorization(W, space, tol) if factorization is None else factorization
    Dsh = pf.adjoint(space.J)
    r = pf.rank
    M = column_space(Dsh @ S.basis, tol, scale=opnorm(Dsh)) if S.dim else np.zeros((r, 0))
    eye = np.eye(r, dtype=np.complex128)
    if M.shape[1] == 0:
        P = np.zeros_like(eye)
    else:
        G = hermitize(M.conj().T @ pf.K_signature @ M)
        if numerical_rank(G, tol, scale=1.0) < M.shape[1]:
            raise NotRegular("D^#(S) is degenerate in the auxiliary space")
        P = _krein_projector(M, pf.K_signature)
    return pf.D @ (eye - P) @ Dsh


def krein_schur_complement_alt(W, S: Subspace, space: KreinSpace, alt: AltSignature,
                               tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``J_a (J_a W)_{/S}`` with the quotient taken in ``<alpha^{-1} x, y>``."""
    W = _selfadjoint(W, space, tol)
    return alt.J_alpha @ schur_complement_metric(alt.J_alpha @ W, S, alt.gram, tol)


def is_weakly_complementable_alt(W, S: Subspace, space: KreinSpace, alt: AltSignature,
                                 tol: Tolerances = DEFAULT_TOL) -> bool:
    W = _selfadjoint(W, space, tol)
    return is_weakly_complementable_metric(alt.J_alpha @ W, S, alt.gram, tol)


def krein_signed_split(W, S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL):
    """Signed split of ``S`` for the form ``[W., .]``."""
    W = _selfadjoint(W, space, tol)
    return signed_split(space.J @ W, S, tol)
