"""Completions of ``[[w11, w12], [w12^#, *]]`` that keep the number of negative squares.

All blocks are frame blocks for the J-orthonormal bases of a regular ``S``
and its companion ``S^[⊥]`` (see :func:`kreinschur.krein_schur.regular_frame`).
A completion ``w22`` exists iff ``R(w12) ⊆ R(d)`` where ``w11 = d d^#``; the
solutions are ``w22 = y^# y + z`` with ``y = d^† w12`` and ``z`` Krein-positive.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InertiaMismatch, NoCompletion, NotKreinSelfadjoint, ShapeMismatch
from .hilbert import Subspace
from .krein import KreinSpace, PolarFactorization, polar_factorization
from .krein_schur import RegularFrame, regular_frame
from .numkernel import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    hermitize,
    inertia,
    opnorm,
    order_slack,
    pseudo_inverse,
    range_inclusion,
)

__all__ = [
    "IncompleteBlock",
    "completion_exists",
    "minimal_completion",
    "assemble_completion",
    "validate_completion",
    "sample_solution_set",
    "nu_minus",
]


@dataclass(frozen=True, eq=False)
class IncompleteBlock:
    S: Subspace
    w11: np.ndarray
    w12: np.ndarray
    space: KreinSpace
    tol: Tolerances = DEFAULT_TOL
    frame: RegularFrame = field(init=False, repr=False)

    def __post_init__(self):
        frame = regular_frame(self.S, self.space, self.tol)
        k, m = frame.J1.shape[0], frame.J2.shape[0]
        w11, w12 = as_matrix(self.w11), as_matrix(self.w12)
        if k == 0:
            w11 = np.zeros((0, 0), dtype=np.complex128)
            w12 = np.zeros((0, m), dtype=np.complex128)
        if w11.shape != (k, k):
            raise ShapeMismatch(f"w11 must be {k}x{k}, got {w11.shape}")
        if w12.shape != (k, m):
            raise ShapeMismatch(f"w12 must be {k}x{m}, got {w12.shape}")
        JW = frame.J1 @ w11
        if np.linalg.norm(JW - JW.conj().T) > self.tol.eq_rel * np.linalg.norm(w11):
            raise NotKreinSelfadjoint("w11 is not selfadjoint for J1")
        object.__setattr__(self, "w11", w11)
        object.__setattr__(self, "w12", w12)
        object.__setattr__(self, "frame", frame)

    @property
    def scale(self) -> float:
        return max(opnorm(self.w11), opnorm(self.w12))

    @property
    def w21(self) -> np.ndarray:
        """``w12^# = J2 w12* J1``."""
        return self.frame.J2 @ self.w12.conj().T @ self.frame.J1

    def factor_w11(self) -> PolarFactorization:
        k = self.w11.shape[0]
        return polar_factorization(self.w11, KreinSpace(k, self.frame.J1), self.tol, scale=self.scale)


def nu_minus(W, J, tol: Tolerances = DEFAULT_TOL) -> int:
    """Negative squares of ``[W., .]``: the negative inertia of ``J W``."""
    return inertia(hermitize(as_matrix(J) @ as_matrix(W)), tol).n_minus


def completion_exists(P: IncompleteBlock, tol: Tolerances | None = None) -> bool:
    tol = P.tol if tol is None else tol
    pf = P.factor_w11()
    return range_inclusion(P.w12, pf.D, tol, scale=P.scale)


def _minimal_block(P: IncompleteBlock, tol: Tolerances) -> np.ndarray:
    pf = P.factor_w11()
    if not range_inclusion(P.w12, pf.D, tol, scale=P.scale):
        raise NoCompletion("R(w12) is not contained in R(d)")
    y = pseudo_inverse(pf.D, tol) @ P.w12
    return P.frame.J2 @ y.conj().T @ pf.K_signature @ y


def assemble_completion(P: IncompleteBlock, w22) -> np.ndarray:
    """Ambient operator ``X [[w11, w12], [w12^#, w22]] X^{-1}``."""
    w22 = as_matrix(w22)
    m = P.frame.J2.shape[0]
    if m == 0:
        w22 = np.zeros((0, 0), dtype=np.complex128)
    if w22.shape != (m, m):
        raise ShapeMismatch(f"w22 must be {m}x{m}, got {w22.shape}")
    M = np.block([[P.w11, P.w12], [P.w21, w22]])
    return P.frame.X @ M @ P.frame.inverse(P.space.J)


def minimal_completion(P: IncompleteBlock, tol: Tolerances | None = None):
    """Return ``(w22_min, W)`` with ``w22_min = y^# y`` (Krein-order minimum).

    Raises
    ------
    NoCompletion
    """
    tol = P.tol if tol is None else tol
    w22 = _minimal_block(P, tol)
    return w22, assemble_completion(P, w22)


def validate_completion(P: IncompleteBlock, w22, tol: Tolerances | None = None) -> bool:
    """``w22 - w22_min`` Krein-selfadjoint and Krein-positive.

    Accepted completions are also checked to keep ``nu_minus``.

    Raises
    ------
    NoCompletion
    InertiaMismatch
        If an accepted completion changes the number of negative squares.
    """
    tol = P.tol if tol is None else tol
    w22 = as_matrix(w22)
    w22_min = _minimal_block(P, tol)
    if w22.shape != w22_min.shape:
        raise ShapeMismatch(f"w22 must have shape {w22_min.shape}, got {w22.shape}")
    J2 = P.frame.J2
    Jz = J2 @ (w22 - w22_min)
    ref = max(P.scale, opnorm(w22))
    if np.linalg.norm(Jz - Jz.conj().T) > tol.eq_rel * max(np.linalg.norm(w22), ref):
        return False
    if Jz.size and order_slack(np.zeros_like(Jz), hermitize(Jz)) < -tol.order_rel * ref:
        return False
    W = assemble_completion(P, w22)
    got, want = nu_minus(W, P.space.J, tol), nu_minus(P.w11, P.frame.J1, tol)
    if got != want:
        raise InertiaMismatch(f"completion has {got} negative squares, w11 has {want}")
    return True


def sample_solution_set(P: IncompleteBlock, seed=None, count: int = 1, scale: float = 1.0) -> list[np.ndarray]:
    """``count`` completions ``w22 = w22_min + J2 G*G`` with Gaussian ``G``."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    w22_min = _minimal_block(P, P.tol)
    m = w22_min.shape[0]
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        G = scale * (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
        out.append(assemble_completion(P, w22_min + P.frame.J2 @ (G.conj().T @ G)))
    return out
