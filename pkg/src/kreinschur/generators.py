"""Random test instances (unit-scale complex Gaussian entries)."""
from __future__ import annotations

import numpy as np

from .hilbert import Subspace, orthonormalize
from .krein import KreinSpace, is_regular_subspace
from .numkernel import hermitize


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(complex_normal(rng, (n, n)))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    return hermitize(complex_normal(rng, (n, n)))


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    r = n if rank is None else rank
    G = complex_normal(rng, (n, r))
    return hermitize(G @ G.conj().T)


def random_subspace(rng: np.random.Generator, n: int, k: int | None = None) -> Subspace:
    k = int(rng.integers(0, n + 1)) if k is None else k
    return orthonormalize(complex_normal(rng, (n, k)), ambient_dim=n) if k else Subspace.zero(n)


def random_sign_congruence(rng: np.random.Generator, n: int, allow_zero: bool = True) -> np.ndarray:
    """``G* diag(s) G`` with random signs ``s`` (zeros allowed) and Gaussian ``G``."""
    choices = [-1.0, 0.0, 1.0] if allow_zero else [-1.0, 1.0]
    s = rng.choice(choices, size=n)
    G = complex_normal(rng, (n, n))
    return hermitize(G.conj().T @ np.diag(s) @ G)


def random_semidefinite(rng: np.random.Generator, n: int) -> np.ndarray:
    """PSD or NSD with a random rank."""
    B = random_psd(rng, n, rank=int(rng.integers(0, n + 1)))
    return B if rng.random() < 0.5 else -B


def random_indefinite_with_neutral(rng: np.random.Generator, n: int):
    """Indefinite ``B`` and a vector ``x0`` with ``<B x0, x0> = 0`` and ``B x0 != 0``."""
    if n < 2:
        raise ValueError("an indefinite matrix needs n >= 2")
    while True:
        B = random_sign_congruence(rng, n)
        lam, U = np.linalg.eigh(B)
        band = 1e-6 * max(np.abs(lam).max(), 1.0)
        pos, neg = U[:, lam > band], U[:, lam < -band]
        if pos.shape[1] and neg.shape[1]:
            break
    p = pos @ complex_normal(rng, pos.shape[1])
    q = neg @ complex_normal(rng, neg.shape[1])
    bp = np.vdot(p, B @ p).real
    bq = -np.vdot(q, B @ q).real
    x0 = p / np.sqrt(bp) + q / np.sqrt(bq)
    return B, x0 / np.linalg.norm(x0)


def hermitian_with_singular_block(rng: np.random.Generator, n: int, k: int, nullity: int = 1):
    """Hermitian ``B`` and ``S`` (``dim k``) whose block ``a`` has ``nullity``
    exact zero eigenvalues and ``b`` vanishing on them, so ``B`` stays complementable."""
    S = random_subspace(rng, n, k)
    V = S.basis
    W = S.perp().basis
    nz = k - nullity
    lam = rng.choice([-1.0, 1.0], size=nz) * rng.uniform(0.5, 2.0, size=nz)
    U = random_unitary(rng, k)
    a = (U[:, :nz] * lam) @ U[:, :nz].conj().T
    b = U[:, :nz] @ complex_normal(rng, (nz, n - k))
    c = random_hermitian(rng, n - k)
    F = np.hstack([V, W])
    M = np.block([[a, b], [b.conj().T, c]])
    return hermitize(F @ M @ F.conj().T), S


def random_krein_space(rng: np.random.Generator, n: int, rotate: bool = True) -> KreinSpace:
    """``J = U diag(s) U*`` with random signs (both signs present when ``n >= 2``)."""
    s = rng.choice([-1.0, 1.0], size=n)
    if n >= 2 and abs(s.sum()) == n:
        s[int(rng.integers(n))] *= -1
    J = np.diag(s).astype(np.complex128)
    if rotate:
        U = random_unitary(rng, n)
        J = hermitize(U @ J @ U.conj().T)
    return KreinSpace(n, J)


def random_krein_selfadjoint(rng: np.random.Generator, space: KreinSpace, rank: int | None = None) -> np.ndarray:
    """``W = J H`` with ``H`` Hermitian indefinite of the given rank."""
    n = space.dim
    r = n if rank is None else rank
    G = complex_normal(rng, (n, r))
    s = rng.choice([-1.0, 1.0], size=r)
    return space.J @ hermitize((G * s) @ G.conj().T)


def random_regular_subspace(rng: np.random.Generator, space: KreinSpace, k: int | None = None,
                            margin: float = 1e-3) -> Subspace:
    """Random ``S`` whose Gram matrix has all eigenvalues of modulus ``>= margin``."""
    n = space.dim
    while True:
        S = random_subspace(rng, n, k)
        if S.dim == 0 or S.dim == n:
            return S
        g = np.linalg.eigvalsh(S.basis.conj().T @ space.J @ S.basis)
        if np.abs(g).min() >= margin and is_regular_subspace(S, space):
            return S


def random_signed_hermitian(rng: np.random.Generator, k: int, gap: float = 0.2, allow_zero: bool = True):
    """Hermitian ``k x k`` with eigenvalues in ``±[gap, 2]`` or exactly 0."""
    U = random_unitary(rng, k)
    choices = [-1.0, 0.0, 1.0] if allow_zero else [-1.0, 1.0]
    s = rng.choice(choices, size=k)
    lam = s * rng.uniform(gap, 2.0, size=k)
    return hermitize((U * lam) @ U.conj().T)


def random_incomplete_block(rng: np.random.Generator, space: KreinSpace, k: int | None = None,
                            solvable: bool = True):
    """Random ``IncompleteBlock`` on a regular ``S``; ``w12 = w11 R`` when solvable.

    ``J1 w11`` has eigenvalues in ``±[0.2, 2]`` or exactly 0, keeping the
    inertia of ``w11`` away from the zero band.
    """
    from .completion import IncompleteBlock
    from .krein import krein_orthonormal_basis

    n = space.dim
    if k is None:
        k = int(rng.integers(1, n)) if n >= 2 else n
    S = random_regular_subspace(rng, space, k)
    _, J1 = krein_orthonormal_basis(S, space)
    h = random_signed_hermitian(rng, k)
    w11 = J1 @ h
    m = n - k
    if solvable:
        w12 = w11 @ complex_normal(rng, (k, m))
    else:
        w12 = complex_normal(rng, (k, m))
    return IncompleteBlock(S, w11, w12, space)
