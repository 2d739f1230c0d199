"""Dense complex-matrix primitives.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Every
threshold is relative: either to the norm of the matrix at hand or, when
``scale`` is passed, to the norm of the operator the matrix was cut out of.
The second form matters for blocks such as the compression of ``B`` to a
subspace, whose own norm says nothing about what "numerically zero" means
for ``B``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NotHermitian, NotInRange, NotPSD, NotSquare, ShapeMismatch

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Inertia",
    "as_matrix",
    "opnorm",
    "hermitize",
    "fix_phase",
    "hermitian_eig",
    "numerical_rank",
    "column_space",
    "pseudo_inverse",
    "psd_sqrt",
    "modulus_and_sign",
    "range_residual",
    "range_inclusion",
    "reduced_solution",
    "inertia",
    "order_slack",
    "order_leq",
]


@dataclass(frozen=True)
class Tolerances:
    """Named numerical thresholds, all relative.

    Attributes
    ----------
    rank_rel : float
        Singular-value / eigenvalue cutoff used for rank and the zero band.
    range_rel : float
        Residual bound for range inclusion.
    order_rel : float
        Eigenvalue bound for operator-order comparisons.
    eq_rel : float
        Frobenius bound for matrix equality and symmetry checks.
    """

    rank_rel: float = 1e-10
    range_rel: float = 1e-8
    order_rel: float = 1e-8
    eq_rel: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "range_rel", "order_rel", "eq_rel"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


DEFAULT_TOL = Tolerances()


class Inertia(NamedTuple):
    n_plus: int
    n_zero: int
    n_minus: int


def as_matrix(M) -> np.ndarray:
    """Coerce to a finite 2-D complex array (scalars become 1x1, vectors columns)."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    elif A.ndim == 1:
        A = A.reshape(-1, 1)
    elif A.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got an array of shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def opnorm(M) -> float:
    """Spectral norm; 0 for empty matrices."""
    A = np.asarray(M)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def hermitize(M: np.ndarray) -> np.ndarray:
    return (M + M.conj().T) / 2


def fix_phase(V: np.ndarray) -> np.ndarray:
    """Rotate each column by a unit scalar so its leading dominant entry is real positive.

    Only used to make outputs reproducible; it never changes a column space.
    """
    V = np.array(V, dtype=np.complex128)
    for j in range(V.shape[1]):
        col = np.abs(V[:, j])
        top = col.max() if col.size else 0.0
        if top == 0.0:
            continue
        i = int(np.argmax(col >= top * (1 - 1e-9)))
        V[:, j] *= np.conj(V[i, j]) / abs(V[i, j])
    return V


def _require_square(M: np.ndarray) -> None:
    if M.shape[0] != M.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {M.shape}")


def _require_hermitian(M, tol: Tolerances) -> np.ndarray:
    A = as_matrix(M)
    _require_square(A)
    if np.linalg.norm(A - A.conj().T) > tol.eq_rel * np.linalg.norm(A):
        raise NotHermitian("matrix is not Hermitian within eq_rel")
    return hermitize(A)


def _band(n: int, ref: float, tol: Tolerances) -> float:
    return tol.rank_rel * ref * n


def hermitian_eig(M, tol: Tolerances = DEFAULT_TOL):
    """Eigen-decomposition ``M = V diag(lam) V*`` with ``lam`` descending."""
    A = _require_hermitian(M, tol)
    lam, V = _descending(*np.linalg.eigh(A))
    return lam, fix_phase(V)


def _descending(lam: np.ndarray, V: np.ndarray):
    # stable, so tied eigenvalues keep LAPACK's column order (I -> I)
    order = np.argsort(-lam, kind="stable")
    return lam[order], V[:, order]


def _clamped_eig(A: np.ndarray, tol: Tolerances, scale: float | None):
    lam, V = _descending(*np.linalg.eigh(A))
    ref = opnorm(A) if scale is None else scale
    lam = np.where(np.abs(lam) > _band(A.shape[0], ref, tol), lam, 0.0)
    return lam, V, ref


def numerical_rank(M, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> int:
    """Number of singular values above ``rank_rel * ref * max(rows, cols)``.

    ``ref`` is the largest singular value unless ``scale`` is given.
    """
    A = as_matrix(M)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    ref = s[0] if scale is None else scale
    if ref == 0.0:
        return 0
    return int(np.sum(s > tol.rank_rel * ref * max(A.shape)))


def column_space(M, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical range of ``M``."""
    A = as_matrix(M)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=np.complex128)
    U, _, _ = np.linalg.svd(A, full_matrices=False)
    return U[:, : numerical_rank(A, tol, scale)]


def pseudo_inverse(M, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Moore-Penrose inverse with rank decided by :func:`numerical_rank`."""
    A = as_matrix(M)
    if A.size == 0:
        return np.zeros((A.shape[1], A.shape[0]), dtype=np.complex128)
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    r = numerical_rank(A, tol, scale)
    return (Vh[:r].conj().T / s[:r]) @ U[:, :r].conj().T


def psd_sqrt(M, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in the zero band are set to 0.

    Raises
    ------
    NotPSD
        If an eigenvalue lies below ``-order_rel * ref``.
    """
    A = _require_hermitian(M, tol)
    if A.size == 0:
        return A.copy()
    lam, V, ref = _clamped_eig(A, tol, scale)
    if lam[-1] < -tol.order_rel * ref:
        raise NotPSD(f"smallest eigenvalue {lam[-1]:.3e} is negative beyond tolerance")
    root = np.sqrt(np.clip(lam, 0.0, None))
    return hermitize((V * root) @ V.conj().T)


def modulus_and_sign(M, tol: Tolerances = DEFAULT_TOL, scale: float | None = None):
    """Return ``(|M|, u)`` with ``M = u |M| = |M| u`` and ``N(u) = N(M)``.

    ``u`` is the sign of ``M`` in the functional calculus with ``sign(0) = 0``.
    """
    A = _require_hermitian(M, tol)
    if A.size == 0:
        return A.copy(), A.copy()
    lam, V, _ = _clamped_eig(A, tol, scale)
    Vh = V.conj().T
    modulus = hermitize((V * np.abs(lam)) @ Vh)
    u = hermitize((V * np.sign(lam)) @ Vh)
    return modulus, u


def range_residual(Z, Y, tol: Tolerances = DEFAULT_TOL) -> float:
    """Spectral norm of the part of ``Z`` outside the numerical range of ``Y``."""
    Z, Y = as_matrix(Z), as_matrix(Y)
    if Z.shape[0] != Y.shape[0]:
        raise ShapeMismatch(f"row counts differ: {Z.shape[0]} vs {Y.shape[0]}")
    if Z.size == 0:
        return 0.0
    P = column_space(Y, tol)
    return opnorm(Z - P @ (P.conj().T @ Z))


def range_inclusion(Z, Y, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> bool:
    """Decide ``R(Z) ⊆ R(Y)`` numerically.

    The residual is compared with ``range_rel * ||Z||``, or with
    ``range_rel * scale`` when a reference operator norm is supplied.
    """
    res = range_residual(Z, Y, tol)
    ref = opnorm(Z) if scale is None else scale
    return res <= tol.range_rel * ref


def reduced_solution(Z, Y, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """The solution ``D0 = Y^+ Z`` of ``Z = Y X`` with range in ``R(Y*)``.

    Raises
    ------
    NotInRange
        If ``R(Z)`` is not contained in ``R(Y)``.
    """
    Z, Y = as_matrix(Z), as_matrix(Y)
    if not range_inclusion(Z, Y, tol, scale):
        raise NotInRange("R(Z) is not contained in R(Y)")
    return pseudo_inverse(Y, tol) @ Z


def inertia(M, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> Inertia:
    """Counts of eigenvalues above, inside and below the zero band ``±rank_rel*ref*dim``."""
    A = _require_hermitian(M, tol)
    n = A.shape[0]
    if n == 0:
        return Inertia(0, 0, 0)
    lam = np.linalg.eigvalsh(A)
    ref = opnorm(A) if scale is None else scale
    band = _band(n, ref, tol)
    n_plus = int(np.sum(lam > band))
    n_minus = int(np.sum(lam < -band))
    return Inertia(n_plus, n - n_plus - n_minus, n_minus)


def order_slack(X, Y) -> float:
    """Smallest eigenvalue of ``Y - X`` (nonnegative iff ``X <= Y``)."""
    X, Y = as_matrix(X), as_matrix(Y)
    if X.shape != Y.shape:
        raise ShapeMismatch(f"shapes differ: {X.shape} vs {Y.shape}")
    if X.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(hermitize(Y - X))[0])


def order_leq(X, Y, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> bool:
    """Loewner order test ``X <= Y`` with slack ``order_rel * max(||X||, ||Y||)``."""
    X, Y = as_matrix(X), as_matrix(Y)
    if X.shape != Y.shape:
        raise ShapeMismatch(f"shapes differ: {X.shape} vs {Y.shape}")
    _require_hermitian(X, tol)
    _require_hermitian(Y, tol)
    ref = max(opnorm(X), opnorm(Y)) if scale is None else scale
    return order_slack(X, Y) >= -tol.order_rel * ref
