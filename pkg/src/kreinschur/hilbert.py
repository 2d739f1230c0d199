"""Complementability and the Schur complement of a Hermitian matrix.

All results are returned as ``n x n`` matrices in ambient coordinates.  For
``B`` Hermitian and a subspace ``S`` with orthonormal basis ``V`` and
orthonormal complement ``W`` the blocks are ``a = V*BV``, ``b = V*BW`` and
``c = W*BW``, and

    B_{/S} = W (c - f* u f) W*,

where ``a = u|a|`` and ``f`` is the reduced solution of ``b = |a|^{1/2} x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import (
    NotComplementable,
    NotInRange,
    NotWeaklyComplementable,
    ShapeMismatch,
)
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
    order_slack,
    pseudo_inverse,
    psd_sqrt,
    range_inclusion,
    reduced_solution,
)

__all__ = [
    "Subspace",
    "BlockDecomposition",
    "SignedSplit",
    "ProjectionSum",
    "DenselyDefinedProjection",
    "orthonormalize",
    "complement_basis",
    "block_decompose",
    "is_weakly_complementable",
    "is_complementable",
    "schur_complement",
    "compression",
    "classical_shorted",
    "signed_split",
    "three_term_decomposition",
    "b_selfadjoint_projection",
    "projection_formula_E",
    "is_positive_block",
    "whitening",
    "is_weakly_complementable_metric",
    "schur_complement_metric",
]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ``C^n`` given by an orthonormal basis (``n x k``)."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.basis, dtype=np.complex128)
        if V.ndim != 2 or V.shape[0] != self.ambient_dim:
            raise ShapeMismatch(
                f"basis must have {self.ambient_dim} rows, got shape {V.shape}"
            )
        k = V.shape[1]
        if k > self.ambient_dim:
            raise ShapeMismatch("more basis vectors than the ambient dimension")
        if k and np.linalg.norm(V.conj().T @ V - np.eye(k)) > 1e-8:
            raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", V)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def perp(self) -> "Subspace":
        return Subspace(self.ambient_dim, complement_basis(self.basis))

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, np.eye(n, dtype=np.complex128))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, np.zeros((n, 0), dtype=np.complex128))

    @classmethod
    def span(cls, vectors, tol: Tolerances = DEFAULT_TOL) -> "Subspace":
        return orthonormalize(vectors, tol)

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    sub: Subspace
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    perp_basis: np.ndarray

    @property
    def frame(self) -> np.ndarray:
        """Unitary ``[V, W]``."""
        return np.hstack([self.sub.basis, self.perp_basis])

    def assemble(self) -> np.ndarray:
        M = np.block([[self.a, self.b], [self.b.conj().T, self.c]])
        F = self.frame
        return F @ M @ F.conj().T


@dataclass(frozen=True, eq=False)
class SignedSplit:
    plus: Subspace
    minus: Subspace


class ProjectionSum(NamedTuple):
    Q: np.ndarray
    Q_plus: np.ndarray
    Q_minus: np.ndarray


class DenselyDefinedProjection(NamedTuple):
    E: np.ndarray
    E_root: np.ndarray  # E |P_S B P_S|^{1/2}


def orthonormalize(vectors, tol: Tolerances = DEFAULT_TOL, ambient_dim: int | None = None) -> Subspace:
    """Orthonormal basis of the numerical column space of ``vectors``.

    Full-rank inputs are processed by pivoted QR so that an input that is
    already orthonormal comes back unchanged up to column order.
    """
    if ambient_dim is not None and np.size(vectors) == 0:
        return Subspace.zero(ambient_dim)
    A = as_matrix(vectors)
    n = A.shape[0]
    r = numerical_rank(A, tol)
    if r == 0:
        return Subspace(n, np.zeros((n, 0), dtype=np.complex128))
    Q, R, _ = scipy.linalg.qr(A, mode="economic", pivoting=True)
    Q = Q[:, :r]
    d = np.diag(R)[:r]
    Q = Q * (np.conj(d) / np.abs(d))
    return Subspace(n, Q)


def complement_basis(V: np.ndarray) -> np.ndarray:
    n, k = V.shape
    if k == 0:
        return np.eye(n, dtype=np.complex128)
    if k == n:
        return np.zeros((n, 0), dtype=np.complex128)
    return fix_phase(scipy.linalg.null_space(V.conj().T))


def _check_dims(B: np.ndarray, S: Subspace) -> None:
    if B.shape[0] != S.ambient_dim:
        raise ShapeMismatch(
            f"operator has dimension {B.shape[0]}, subspace lives in {S.ambient_dim}"
        )


def block_decompose(B, S: Subspace, tol: Tolerances = DEFAULT_TOL) -> BlockDecomposition:
    """Blocks of ``B`` relative to ``S ⊕ S^⊥``."""
    B = _require_hermitian(B, tol)
    _check_dims(B, S)
    V = S.basis
    W = complement_basis(V)
    Vh, Wh = V.conj().T, W.conj().T
    return BlockDecomposition(
        sub=S,
        a=hermitize(Vh @ B @ V),
        b=Vh @ B @ W,
        c=hermitize(Wh @ B @ W),
        perp_basis=W,
    )


class _Weak(NamedTuple):
    blocks: BlockDecomposition
    ref: float
    u: np.ndarray
    modulus: np.ndarray
    root: np.ndarray


def _weak_data(B, S: Subspace, tol: Tolerances) -> _Weak:
    blocks = block_decompose(B, S, tol)
    ref = opnorm(blocks.assemble())
    modulus, u = modulus_and_sign(blocks.a, tol, scale=ref)
    root = psd_sqrt(modulus, tol, scale=ref)
    return _Weak(blocks, ref, u, modulus, root)


def is_weakly_complementable(B, S: Subspace, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``R(b) ⊆ R(|a|^{1/2})``."""
    w = _weak_data(B, S, tol)
    return range_inclusion(w.blocks.b, w.root, tol, scale=w.ref)


def is_complementable(B, S: Subspace, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``R(b) ⊆ R(a)``."""
    w = _weak_data(B, S, tol)
    return range_inclusion(w.blocks.b, w.u @ w.modulus, tol, scale=w.ref)


def _quotient_block(w: _Weak, tol: Tolerances) -> np.ndarray:
    try:
        f = reduced_solution(w.blocks.b, w.root, tol, scale=w.ref)
    except NotInRange:
        raise NotWeaklyComplementable("R(b) is not contained in R(|a|^{1/2})") from None
    return hermitize(w.blocks.c - f.conj().T @ w.u @ f)


def schur_complement(B, S: Subspace, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Schur complement ``B_{/S}`` of a weakly complementable Hermitian ``B``.

    Raises
    ------
    NotWeaklyComplementable
    """
    w = _weak_data(B, S, tol)
    W = w.blocks.perp_basis
    return hermitize(W @ _quotient_block(w, tol) @ W.conj().T)


def compression(B, S: Subspace, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``B_S = B - B_{/S}``."""
    B = _require_hermitian(B, tol)
    return B - schur_complement(B, S, tol)


def classical_shorted(B, S: Subspace, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``c - b* a^+ b`` assembled on ``S^⊥``; independent pseudoinverse route."""
    blocks = block_decompose(B, S, tol)
    W = blocks.perp_basis
    q = blocks.c - blocks.b.conj().T @ np.linalg.pinv(blocks.a, rcond=1e-12, hermitian=True) @ blocks.b
    return hermitize(W @ q @ W.conj().T)


def signed_split(B, S: Subspace, tol: Tolerances = DEFAULT_TOL, zero_to: str = "plus") -> SignedSplit:
    """Split ``S`` into B-orthogonal nonnegative and nonpositive parts.

    The split is read off the eigenvectors of ``a``; eigenvalues in the zero
    band go to the part named by ``zero_to`` (``"plus"`` or ``"minus"``).
    """
    if zero_to not in ("plus", "minus"):
        raise ValueError("zero_to must be 'plus' or 'minus'")
    blocks = block_decompose(B, S, tol)
    n = S.ambient_dim
    if S.dim == 0:
        return SignedSplit(Subspace.zero(n), Subspace.zero(n))
    ref = opnorm(blocks.assemble())
    lam, U = _descending(*np.linalg.eigh(blocks.a))
    zero = np.abs(lam) <= tol.rank_rel * ref * S.dim
    plus = (lam > 0) & ~zero
    if zero_to == "plus":
        plus |= zero
    VU = fix_phase(S.basis @ U)
    return SignedSplit(Subspace(n, VU[:, plus]), Subspace(n, VU[:, ~plus]))


class _SplitBlocks(NamedTuple):
    Vp: np.ndarray
    Vm: np.ndarray
    W: np.ndarray
    a_plus: np.ndarray  # V+* B V+, PSD
    a_minus: np.ndarray  # -V-* B V-, PSD
    b_plus: np.ndarray
    b_minus: np.ndarray
    c: np.ndarray
    ref: float


def _split_blocks(B, S: Subspace, tol: Tolerances, split: SignedSplit | None) -> _SplitBlocks:
    B = _require_hermitian(B, tol)
    _check_dims(B, S)
    split = signed_split(B, S, tol) if split is None else split
    Vp, Vm = split.plus.basis, split.minus.basis
    W = complement_basis(S.basis)
    h = lambda X: X.conj().T
    return _SplitBlocks(
        Vp, Vm, W,
        a_plus=hermitize(h(Vp) @ B @ Vp),
        a_minus=hermitize(-h(Vm) @ B @ Vm),
        b_plus=h(Vp) @ B @ W,
        b_minus=h(Vm) @ B @ W,
        c=hermitize(h(W) @ B @ W),
        ref=opnorm(B),
    )


def three_term_decomposition(B, S: Subspace, tol: Tolerances = DEFAULT_TOL, split: SignedSplit | None = None):
    """Return ``(B1, B2, B3)`` with ``B = B1 + B2 - B3``, ``B2, B3 >= 0``,
    ``S ⊆ N(B1)``, ``S- ⊆ N(B2)`` and ``S+ ⊆ N(B3)``.

    ``f`` solves ``b+ = a+^{1/2} x`` and ``g`` solves ``b- = -a-^{1/2} x``
    (reduced solutions); then ``B1 = c - f*f + g*g`` on ``S^⊥``,
    ``B2 = [[a+, b+], [b+*, f*f]]`` on ``S+ ⊕ S^⊥`` and
    ``B3 = [[a-, -b-], [-b-*, g*g]]`` on ``S- ⊕ S^⊥``.
    """
    sb = _split_blocks(B, S, tol, split)
    ref = sb.ref
    try:
        f = reduced_solution(sb.b_plus, psd_sqrt(sb.a_plus, tol, scale=ref), tol, scale=ref)
        g = -reduced_solution(sb.b_minus, psd_sqrt(sb.a_minus, tol, scale=ref), tol, scale=ref)
    except NotInRange:
        raise NotWeaklyComplementable("a split block fails the range test") from None
    ff, gg = f.conj().T @ f, g.conj().T @ g
    Fp = np.hstack([sb.Vp, sb.W])
    Fm = np.hstack([sb.Vm, sb.W])
    B1 = sb.W @ (sb.c - ff + gg) @ sb.W.conj().T
    B2 = Fp @ np.block([[sb.a_plus, sb.b_plus], [sb.b_plus.conj().T, ff]]) @ Fp.conj().T
    B3 = Fm @ np.block([[sb.a_minus, -sb.b_minus], [-sb.b_minus.conj().T, gg]]) @ Fm.conj().T
    return hermitize(B1), hermitize(B2), hermitize(B3)


def b_selfadjoint_projection(B, S: Subspace, tol: Tolerances = DEFAULT_TOL, split: SignedSplit | None = None) -> ProjectionSum:
    """A projection ``Q`` onto ``S`` with ``BQ = Q*B``, and its split ``Q = Q+ + Q-``.

    In the frame ``S ⊕ S^⊥``, ``Q = [[I, y], [0, 0]]`` with ``y = a^+ b``.
    The pieces ``Q±`` are the B-selfadjoint projections onto ``S±`` built
    the same way from the blocks of ``S±``.

    Raises
    ------
    NotComplementable
    """
    w = _weak_data(B, S, tol)
    V, W = S.basis, w.blocks.perp_basis
    a_eff = w.u @ w.modulus
    if not range_inclusion(w.blocks.b, a_eff, tol, scale=w.ref):
        raise NotComplementable("R(b) is not contained in R(a)")
    y = pseudo_inverse(a_eff, tol) @ w.blocks.b
    Q = V @ (V.conj().T + y @ W.conj().T)

    sb = _split_blocks(B, S, tol, split)
    Wh = sb.W.conj().T
    yp = pseudo_inverse(sb.a_plus, tol, scale=w.ref) @ sb.b_plus
    ym = pseudo_inverse(-sb.a_minus, tol, scale=w.ref) @ sb.b_minus
    Qp = sb.Vp @ (sb.Vp.conj().T + yp @ Wh)
    Qm = sb.Vm @ (sb.Vm.conj().T + ym @ Wh)
    return ProjectionSum(Q, Qp, Qm)


def projection_formula_E(B, S: Subspace, tol: Tolerances = DEFAULT_TOL) -> DenselyDefinedProjection:
    """The projection ``E = [[I, 0], [f* u (|a|^{1/2})^+, 0]]`` with ``N(E) = S^⊥``.

    ``(I - E) B`` equals the Schur complement; ``E_root`` is the bounded
    product ``E |P_S B P_S|^{1/2}``.
    """
    w = _weak_data(B, S, tol)
    V, W = S.basis, w.blocks.perp_basis
    try:
        f = reduced_solution(w.blocks.b, w.root, tol, scale=w.ref)
    except NotInRange:
        raise NotWeaklyComplementable("R(b) is not contained in R(|a|^{1/2})") from None
    lower = f.conj().T @ w.u @ pseudo_inverse(w.root, tol)
    Vh = V.conj().T
    E = V @ Vh + W @ lower @ Vh
    root_ambient = V @ w.root @ Vh
    return DenselyDefinedProjection(E, E @ root_ambient)


def is_positive_block(blocks: BlockDecomposition, tol: Tolerances = DEFAULT_TOL) -> bool:
    """PSD test through the blocks: ``a >= 0``, ``R(b) ⊆ R(a^{1/2})`` and
    ``c - f*f >= 0`` where ``f`` solves ``b = a^{1/2} x``."""
    ref = opnorm(blocks.assemble())
    a, b, c = blocks.a, blocks.b, blocks.c
    if a.size and np.linalg.eigvalsh(a)[0] < -tol.order_rel * ref:
        return False
    root = psd_sqrt(a, tol, scale=ref)
    if not range_inclusion(b, root, tol, scale=ref):
        return False
    f = pseudo_inverse(root, tol) @ b
    t = hermitize(c - f.conj().T @ f)
    return t.size == 0 or order_slack(np.zeros_like(t), t) >= -tol.order_rel * ref


def whitening(gram, tol: Tolerances = DEFAULT_TOL):
    """Return ``(G^{1/2}, G^{-1/2})`` for a positive definite Gram matrix ``G``.

    ``x -> G^{1/2} x`` is an isometry from ``(C^n, <G x, y>)`` onto ``C^n``
    with the standard inner product.
    """
    G = _require_hermitian(gram, tol)
    lam, U = np.linalg.eigh(G)
    if lam[0] <= 0:
        raise ValueError("Gram matrix is not positive definite")
    root = np.sqrt(lam)
    Uh = U.conj().T
    return (U * root) @ Uh, (U / root) @ Uh


def _whitened(B, S: Subspace, gram, tol: Tolerances):
    half, half_inv = whitening(gram, tol)
    Bw = half @ as_matrix(B) @ half_inv
    G = as_matrix(gram)
    # B must be selfadjoint for <G., .>, i.e. G B Hermitian
    GB = G @ as_matrix(B)
    if np.linalg.norm(GB - GB.conj().T) > tol.eq_rel * max(np.linalg.norm(GB), 1e-300):
        raise ValueError("operator is not selfadjoint in the given metric")
    Sw = orthonormalize(half @ S.basis, tol, ambient_dim=S.ambient_dim)
    return hermitize(Bw), Sw, half, half_inv


def is_weakly_complementable_metric(B, S: Subspace, gram, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Weak complementability in the Hilbert space ``(C^n, <gram x, y>)``."""
    Bw, Sw, _, _ = _whitened(B, S, gram, tol)
    return is_weakly_complementable(Bw, Sw, tol)


def schur_complement_metric(B, S: Subspace, gram, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Schur complement computed with inner products, adjoints and orthogonal
    complements all taken in ``<gram x, y>``.

    ``B`` must be selfadjoint in that metric (``gram @ B`` Hermitian).
    """
    Bw, Sw, half, half_inv = _whitened(B, S, gram, tol)
    return half_inv @ schur_complement(Bw, Sw, tol) @ half
