"""Krein-space structure on ``C^n``.

A Krein space here is ``C^n`` with a signature operator ``J`` (Hermitian,
``J^2 = I``).  The indefinite metric is ``[x, y] = <Jx, y>`` and the Krein
adjoint of ``T`` is ``J T* J``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotKreinSelfadjoint, NotRegular, ShapeMismatch
from .hilbert import Subspace, complement_basis, orthonormalize, whitening
from .numkernel import (
    DEFAULT_TOL,
    Tolerances,
    _descending,
    _require_hermitian,
    as_matrix,
    fix_phase,
    hermitize,
    modulus_and_sign,
    numerical_rank,
    opnorm,
    psd_sqrt,
)

__all__ = [
    "KreinSpace",
    "AltSignature",
    "PolarFactorization",
    "krein_adjoint",
    "is_krein_selfadjoint",
    "gram",
    "is_regular_subspace",
    "krein_orthonormal_basis",
    "orthogonal_companion",
    "j_unitary_from_generator",
    "random_j_unitary",
    "signature_from_j_unitary",
    "random_signature",
    "polar_factorization",
    "tilde_alpha",
    "metric_modulus_sqrt",
]


@dataclass(frozen=True, eq=False)
class KreinSpace:
    dim: int
    J: np.ndarray

    def __post_init__(self):
        J = as_matrix(self.J)
        if J.shape != (self.dim, self.dim):
            raise ShapeMismatch(f"J must be {self.dim}x{self.dim}, got {J.shape}")
        if np.linalg.norm(J - J.conj().T) > 1e-8 * max(1.0, np.linalg.norm(J)):
            raise ValueError("J is not Hermitian")
        if np.linalg.norm(J @ J - np.eye(self.dim)) > 1e-8 * max(1.0, np.sqrt(self.dim)):
            raise ValueError("J is not an involution")
        object.__setattr__(self, "J", hermitize(J))

    @classmethod
    def from_signs(cls, signs) -> "KreinSpace":
        s = np.asarray(signs, dtype=float)
        return cls(len(s), np.diag(s).astype(np.complex128))

    @classmethod
    def hilbert(cls, n: int) -> "KreinSpace":
        return cls(n, np.eye(n, dtype=np.complex128))

    def metric(self, x, y) -> complex:
        """``[x, y] = <Jx, y> = y* J x``."""
        return complex(np.vdot(np.asarray(y), self.J @ np.asarray(x)))

    def __repr__(self):
        return f"KreinSpace(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class AltSignature:
    """Another signature operator ``J_alpha`` of the same Krein metric.

    ``alpha = J_alpha J`` is positive definite and the Hilbert inner product
    induced by ``J_alpha`` is ``<x, y>_alpha = <alpha^{-1} x, y>``.
    """

    J_alpha: np.ndarray
    alpha: np.ndarray

    @property
    def gram(self) -> np.ndarray:
        """Gram matrix ``alpha^{-1}`` of ``<., .>_alpha``."""
        return hermitize(np.linalg.inv(self.alpha))


@dataclass(frozen=True, eq=False)
class PolarFactorization:
    """``W = D D^#`` with ``D: (C^r, K_signature) -> (C^n, J)`` injective."""

    D: np.ndarray
    K_signature: np.ndarray

    @property
    def rank(self) -> int:
        return self.D.shape[1]

    def adjoint(self, J: np.ndarray) -> np.ndarray:
        """``D^# = K_signature D* J``."""
        return self.K_signature @ self.D.conj().T @ J

    def reconstruct(self, J: np.ndarray) -> np.ndarray:
        return self.D @ self.adjoint(J)


def _check(T: np.ndarray, space: KreinSpace) -> np.ndarray:
    T = as_matrix(T)
    if T.shape != (space.dim, space.dim):
        raise ShapeMismatch(f"expected a {space.dim}x{space.dim} operator, got {T.shape}")
    return T


def krein_adjoint(T, space: KreinSpace) -> np.ndarray:
    T = _check(T, space)
    return space.J @ T.conj().T @ space.J


def is_krein_selfadjoint(W, space: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``JW`` Hermitian within ``eq_rel * ||W||_F``."""
    W = _check(W, space)
    JW = space.J @ W
    return bool(np.linalg.norm(JW - JW.conj().T) <= tol.eq_rel * np.linalg.norm(W))


def gram(S: Subspace, space: KreinSpace) -> np.ndarray:
    """``V* J V`` for the orthonormal basis ``V`` of ``S``."""
    V = S.basis
    return hermitize(V.conj().T @ space.J @ V)


def is_regular_subspace(S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Gram matrix of an orthonormal basis invertible.

    The rank cutoff is taken relative to ``||J|| = 1``: a Gram entry of size
    ``1e-14`` marks an almost neutral subspace even when it is the only entry.
    """
    if S.ambient_dim != space.dim:
        raise ShapeMismatch("subspace and Krein space dimensions differ")
    if S.dim == 0:
        return True
    return numerical_rank(gram(S, space), tol, scale=1.0) == S.dim


def krein_orthonormal_basis(S: Subspace, space: KreinSpace, tol: Tolerances = DEFAULT_TOL):
    """Return ``(V, J1)`` with ``R(V) = S`` and ``V* J V = J1 = diag(±1)``.

    Positive directions come first.

    Raises
    ------
    NotRegular
    """
    if not is_regular_subspace(S, space, tol):
        raise NotRegular("the Gram matrix of the subspace is singular")
    if S.dim == 0:
        return np.zeros((space.dim, 0), dtype=np.complex128), np.zeros((0, 0), dtype=np.complex128)
    lam, U = _descending(*np.linalg.eigh(gram(S, space)))
    V = fix_phase((S.basis @ U) / np.sqrt(np.abs(lam)))
    return V, np.diag(np.sign(lam)).astype(np.complex128)


def orthogonal_companion(S: Subspace, space: KreinSpace) -> Subspace:
    """``S^[⊥] = N((J V)*)``."""
    if S.ambient_dim != space.dim:
        raise ShapeMismatch("subspace and Krein space dimensions differ")
    return Subspace(space.dim, complement_basis(orthonormalize(space.J @ S.basis, ambient_dim=space.dim).basis))


def j_unitary_from_generator(M, space: KreinSpace) -> np.ndarray:
    """``exp(M')`` where ``M'`` is the Krein-skew part of ``M``.

    ``M' = J (K - K*)/2`` with ``K = JM``, so ``JM'`` is skew-Hermitian and
    the exponential satisfies ``T* J T = J``.
    """
    M = _check(M, space)
    K = space.J @ M
    return scipy.linalg.expm(space.J @ ((K - K.conj().T) / 2))


def random_j_unitary(space: KreinSpace, seed=None, scale: float = 1.0) -> np.ndarray:
    if scale <= 0:
        raise ValueError("scale must be positive")
    rng = np.random.default_rng(seed)
    n = space.dim
    M = scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return j_unitary_from_generator(M, space)


def signature_from_j_unitary(T, space: KreinSpace) -> AltSignature:
    """``J_alpha = T T* J`` and ``alpha = T T*``."""
    T = _check(T, space)
    alpha = hermitize(T @ T.conj().T)
    return AltSignature(J_alpha=alpha @ space.J, alpha=alpha)


def random_signature(space: KreinSpace, seed=None, scale: float = 1.0) -> AltSignature:
    return signature_from_j_unitary(random_j_unitary(space, seed, scale), space)


def _round_signature(K: np.ndarray) -> np.ndarray:
    lam, U = np.linalg.eigh(hermitize(K))
    return hermitize((U * np.where(lam >= 0, 1.0, -1.0)) @ U.conj().T)


def polar_factorization(W, space: KreinSpace, tol: Tolerances = DEFAULT_TOL,
                        scale: float | None = None, seed=None) -> PolarFactorization:
    """Factor ``W = D D^#`` through ``K = R(|JW|)``.

    With ``JW = U diag(lam) U*``, the basis of ``K`` is the columns of ``U``
    whose eigenvalue is outside the zero band; ``D = J |JW|^{1/2}`` on that
    basis and ``K_signature`` is the compression of ``sign(JW)``.  A ``seed``
    rotates the basis of ``K`` by a random unitary (same ``D`` range, a
    different factorization).  ``scale`` sets the zero band reference.

    Raises
    ------
    NotKreinSelfadjoint
    """
    W = _check(W, space)
    if not is_krein_selfadjoint(W, space, tol):
        raise NotKreinSelfadjoint("J W is not Hermitian")
    JW = hermitize(space.J @ W)
    n = space.dim
    lam, U = _descending(*np.linalg.eigh(JW))
    ref = opnorm(JW) if scale is None else scale
    keep = np.abs(lam) > tol.rank_rel * ref * max(n, 1)
    lam, U = lam[keep], fix_phase(U[:, keep])
    D = space.J @ (U * np.sqrt(np.abs(lam)))
    K = np.diag(np.sign(lam)).astype(np.complex128)
    if seed is not None and lam.size:
        rng = np.random.default_rng(seed)
        r = lam.size
        Z = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
        R, _ = np.linalg.qr(Z)
        D = D @ R
        K = _round_signature(R.conj().T @ K @ R)
    return PolarFactorization(D=D, K_signature=K)


def tilde_alpha(S: Subspace, alt: AltSignature, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``(V* alpha^{-1} V)^{-1}`` in the orthonormal frame ``V`` of ``S``."""
    V = S.basis
    if V.shape[1] == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    return hermitize(np.linalg.inv(hermitize(V.conj().T @ alt.gram @ V)))


def metric_modulus_sqrt(A, metric_gram, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``|A|^{1/2}`` in the inner product ``<G x, y>`` (``G`` = ``metric_gram``).

    ``A`` must be selfadjoint for that inner product.  Computed by
    whitening: ``G^{-1/2} |G^{1/2} A G^{-1/2}|^{1/2} G^{1/2}``.
    """
    half, half_inv = whitening(metric_gram, tol)
    A_hat = _require_hermitian(half @ as_matrix(A) @ half_inv, tol)
    if A_hat.size == 0:
        return A_hat
    modulus, _ = modulus_and_sign(A_hat, tol)
    return half_inv @ psd_sqrt(modulus, tol, scale=opnorm(A_hat)) @ half
