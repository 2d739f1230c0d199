import numpy as np
import pytest
from hypothesis import given

from conftest import assert_close, dims, seeds
from kreinschur.errors import NotComplementable, NotWeaklyComplementable, ShapeMismatch
from kreinschur.generators import (
    complex_normal,
    hermitian_with_singular_block,
    random_hermitian,
    random_indefinite_with_neutral,
    random_psd,
    random_semidefinite,
    random_sign_congruence,
    random_subspace,
)
from kreinschur.hilbert import (
    Subspace,
    b_selfadjoint_projection,
    block_decompose,
    classical_shorted,
    compression,
    is_complementable,
    is_positive_block,
    is_weakly_complementable,
    orthonormalize,
    projection_formula_E,
    schur_complement,
    schur_complement_metric,
    signed_split,
    three_term_decomposition,
)
from kreinschur.numkernel import opnorm, order_leq

E1 = Subspace(2, np.array([[1.0], [0.0]]))
B0 = np.array([[1.0, 1.0], [1.0, 2.0]])


def span(*cols):
    return orthonormalize(np.column_stack(cols))


class TestSubspace:
    def test_orthonormalize_examples(self):
        assert_close(orthonormalize([[1], [1]]).basis, np.array([[1], [1]]) / np.sqrt(2))
        S = orthonormalize([[1, 2], [0, 0]])
        assert S.dim == 1
        assert_close(S.basis, [[1], [0]])
        assert_close(orthonormalize(np.eye(3)).basis, np.eye(3))

    def test_validation(self):
        with pytest.raises(ValueError):
            Subspace(2, np.array([[1.0], [1.0]]))
        with pytest.raises(ShapeMismatch):
            Subspace(3, np.eye(2))

    def test_perp(self):
        S = span([1, 1, 0])
        P = S.perp()
        assert P.dim == 2
        assert_close(S.basis.conj().T @ P.basis, np.zeros((1, 2)))


class TestBlocks:
    def test_examples(self):
        d = block_decompose(B0, E1)
        assert_close(d.a, [[1]])
        assert_close(np.abs(d.b), [[1]])
        assert_close(d.c, [[2]])
        d = block_decompose(np.diag([1.0, -1.0]), span([1, 1]))
        assert_close(d.a, [[0]], 1e-14)
        assert_close(np.abs(d.b), [[1]])
        assert_close(d.c, [[0]], 1e-14)
        S = span([1, 2, 0], [0, 1, 1j])
        d = block_decompose(np.eye(3), S)
        assert_close(d.a, np.eye(2))
        assert_close(d.b, np.zeros((2, 1)))
        assert_close(d.c, np.eye(1))

    @given(seeds, dims)
    def test_reassembles(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_hermitian(rng, n)
        d = block_decompose(B, random_subspace(rng, n))
        F = d.frame
        assert_close(F.conj().T @ F, np.eye(n))
        assert_close(d.assemble(), B, 1e-12, np.linalg.norm(B))


class TestPredicates:
    def test_examples(self):
        assert not is_weakly_complementable(np.diag([1.0, -1.0]), span([1, 1]))
        assert is_weakly_complementable(random_hermitian(np.random.default_rng(0), 3), Subspace.zero(3))
        assert is_complementable(B0, E1)
        assert not is_complementable(np.array([[0.0, 1.0], [1.0, 0.0]]), E1)

    @given(seeds, dims)
    def test_psd_always_weakly_complementable(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_psd(rng, n, rank=int(rng.integers(0, n + 1)))
        assert is_weakly_complementable(B, random_subspace(rng, n))

    @given(seeds, dims)
    def test_invertible_complementable(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_sign_congruence(rng, n, allow_zero=False)
        S = random_subspace(rng, n)
        assert is_complementable(B, S) and is_weakly_complementable(B, S)

    @given(seeds, dims)
    def test_semidefinite_characterization(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_semidefinite(rng, n)
        assert is_weakly_complementable(B, random_subspace(rng, n))
        if n >= 2:
            B, x0 = random_indefinite_with_neutral(rng, n)
            assert not is_weakly_complementable(B, span(x0))

    @given(seeds, dims)
    def test_nonnegative_subspace_criterion(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_sign_congruence(rng, n)
        S = random_subspace(rng, n)
        d = block_decompose(B, S)
        if S.dim and np.linalg.eigvalsh(d.a).min() < 1e-6 * opnorm(B):
            return
        from kreinschur.numkernel import psd_sqrt, range_inclusion
        assert is_weakly_complementable(B, S) == range_inclusion(d.b, psd_sqrt(d.a), scale=opnorm(B))


class TestSchur:
    def test_examples(self):
        assert_close(schur_complement(B0, E1), np.diag([0, 1]))
        assert_close(schur_complement(np.array([[-1.0, 1.0], [1.0, 2.0]]), E1), np.diag([0, 3]))
        B = np.diag([2.0, -1.0, 4.0])
        assert_close(schur_complement(B, span([1, 0, 0])), np.diag([0, -1, 4]))

    def test_compression_examples(self):
        assert_close(compression(B0, E1), [[1, 1], [1, 1]])
        assert_close(compression(np.zeros((2, 2)), E1), np.zeros((2, 2)))
        B = random_psd(np.random.default_rng(3), 3)
        assert_close(compression(B, Subspace.whole(3)), B, 1e-12)

    def test_not_weakly_complementable(self):
        with pytest.raises(NotWeaklyComplementable):
            schur_complement(np.diag([1.0, -1.0]), span([1, 1]))

    def test_trivial_subspaces(self):
        B = random_hermitian(np.random.default_rng(1), 4)
        assert_close(schur_complement(B, Subspace.zero(4)), B, 1e-12)
        assert_close(schur_complement(B, Subspace.whole(4)), np.zeros((4, 4)))

    @given(seeds, dims)
    def test_classical_shorted_agreement(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_psd(rng, n, rank=int(rng.integers(0, n + 1)))
        S = random_subspace(rng, n)
        ref = max(opnorm(B), 1.0)
        assert opnorm(schur_complement(B, S) - classical_shorted(B, S)) <= 1e-8 * ref

    @given(seeds, dims)
    def test_range_in_perp_and_hermitian(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_sign_congruence(rng, n, allow_zero=False)
        S = random_subspace(rng, n)
        X = schur_complement(B, S)
        ref = opnorm(B)
        assert_close(X, X.conj().T, 1e-12, ref)
        assert opnorm(S.basis.conj().T @ X) <= 1e-8 * ref

    @given(seeds, dims)
    def test_maximal_among_psd(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_psd(rng, n)
        S = random_subspace(rng, n)
        X = schur_complement(B, S)
        assert order_leq(X, B)
        Wp = S.perp().basis
        if Wp.shape[1] == 0:
            return
        v = Wp @ complex_normal(rng, Wp.shape[1])
        v /= np.linalg.norm(v)
        bump = X + 0.1 * opnorm(B) * np.outer(v, v.conj())
        assert not order_leq(bump, B)

    @given(seeds, dims)
    def test_nested_quotients(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_sign_congruence(rng, n, allow_zero=False)
        S = random_subspace(rng, n)
        split = signed_split(B, S)
        X = schur_complement(B, S)
        ref = opnorm(B)
        a = schur_complement(schur_complement(B, split.plus), split.minus)
        b = schur_complement(schur_complement(B, split.minus), split.plus)
        assert opnorm(a - X) <= 1e-8 * ref and opnorm(b - X) <= 1e-8 * ref

    @given(seeds, dims)
    def test_metric_identity_gram(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_hermitian(rng, n)
        S = random_subspace(rng, n)
        assert_close(schur_complement_metric(B, S, np.eye(n)), schur_complement(B, S), 1e-10, opnorm(B))


class TestSignedSplit:
    def test_examples(self):
        sp = signed_split(np.diag([1.0, -1.0]), Subspace.whole(2))
        assert_close(np.abs(sp.plus.basis), [[1], [0]])
        assert_close(np.abs(sp.minus.basis), [[0], [1]])
        assert signed_split(random_psd(np.random.default_rng(0), 3), random_subspace(np.random.default_rng(1), 3, 2)).minus.dim == 0
        sp = signed_split(np.diag([1.0, -1.0, 5.0]), span([1, 0, 0], [0, 1, 0]))
        assert_close(np.abs(sp.plus.basis), [[1], [0], [0]])
        assert_close(np.abs(sp.minus.basis), [[0], [1], [0]])

    @given(seeds, dims)
    def test_orthogonal_and_b_orthogonal(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_hermitian(rng, n)
        S = random_subspace(rng, n)
        sp = signed_split(B, S)
        assert sp.plus.dim + sp.minus.dim == S.dim
        P, M = sp.plus.basis, sp.minus.basis
        assert_close(P.conj().T @ M, np.zeros((P.shape[1], M.shape[1])), 1e-12)
        assert_close(P.conj().T @ B @ M, np.zeros((P.shape[1], M.shape[1])), 1e-10, opnorm(B))

    @given(seeds, dims)
    def test_zero_band_assignment_invariance(self, seed, n):
        if n < 2:
            return
        rng = np.random.default_rng(seed)
        k = int(rng.integers(1, n))
        B, S = hermitian_with_singular_block(rng, n, k)
        X = schur_complement(B, S)
        ref = opnorm(B)
        for zero_to in ("plus", "minus"):
            sp = signed_split(B, S, zero_to=zero_to)
            Y = schur_complement(schur_complement(B, sp.plus), sp.minus)
            assert opnorm(Y - X) <= 1e-8 * ref


class TestThreeTerm:
    def test_diagonal_example(self):
        B1, B2, B3 = three_term_decomposition(np.diag([1.0, -1.0, 5.0]), span([1, 0, 0], [0, 1, 0]))
        assert_close(B1, np.diag([0, 0, 5]))
        assert_close(B2, np.diag([1, 0, 0]))
        assert_close(B3, np.diag([0, 1, 0]))

    def test_trivial(self):
        B = random_psd(np.random.default_rng(4), 3)
        S = random_subspace(np.random.default_rng(5), 3, 2)
        assert_close(three_term_decomposition(B, S)[2], np.zeros((3, 3)))
        for M in three_term_decomposition(np.zeros((3, 3)), S):
            assert_close(M, np.zeros((3, 3)))

    @given(seeds, dims)
    def test_properties(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_sign_congruence(rng, n, allow_zero=False)
        S = random_subspace(rng, n)
        sp = signed_split(B, S)
        B1, B2, B3 = three_term_decomposition(B, S, split=sp)
        ref = opnorm(B)
        assert_close(B1 + B2 - B3, B, 1e-8, ref)
        assert order_leq(np.zeros_like(B2), B2) and order_leq(np.zeros_like(B3), B3)
        assert opnorm(B1 @ S.basis) <= 1e-8 * ref
        assert opnorm(B2 @ sp.minus.basis) <= 1e-8 * ref
        assert opnorm(B3 @ sp.plus.basis) <= 1e-8 * ref
        rhs = B1 + schur_complement(B2, sp.plus) - schur_complement(B3, sp.minus)
        assert opnorm(rhs - schur_complement(B, S)) <= 1e-8 * ref


class TestProjections:
    def test_b_selfadjoint_example(self):
        Q = b_selfadjoint_projection(B0, E1).Q
        assert_close(Q, [[1, 1], [0, 0]])
        assert_close(B0 @ Q, [[1, 1], [1, 1]])
        assert_close(Q.conj().T @ B0, [[1, 1], [1, 1]])
        assert_close(b_selfadjoint_projection(np.diag([1.0, 2.0]), E1).Q, np.diag([1, 0]))
        assert_close(b_selfadjoint_projection(B0, Subspace.whole(2)).Q, np.eye(2))

    def test_not_complementable(self):
        with pytest.raises(NotComplementable):
            b_selfadjoint_projection(np.array([[0.0, 1.0], [1.0, 0.0]]), E1)

    @given(seeds, dims)
    def test_projection_sum(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_sign_congruence(rng, n, allow_zero=False)
        S = random_subspace(rng, n)
        Q, Qp, Qm = b_selfadjoint_projection(B, S)
        ref = opnorm(B)
        cq = max(opnorm(Q), 1.0)
        assert_close(Q @ Q, Q, 1e-9, cq ** 2)
        assert_close(Q @ S.basis, S.basis, 1e-9, cq)
        assert_close(B @ Q, Q.conj().T @ B, 1e-9, ref * cq)
        assert_close(Qp + Qm, Q, 1e-9, cq)
        for P in (Qp, Qm):
            cp = max(opnorm(P), 1.0)
            assert_close(P @ P, P, 1e-9, cp ** 2)
            assert_close(B @ P, P.conj().T @ B, 1e-9, ref * cp)
        assert_close(Qp @ Qm, np.zeros_like(Q), 1e-9, cq ** 2)
        assert_close(Qm @ Qp, np.zeros_like(Q), 1e-9, cq ** 2)
        X = schur_complement(B, S)
        I = np.eye(n)
        assert_close(B @ (I - Q), X, 1e-8, ref * cq)
        assert_close((I - Q).conj().T @ B, X, 1e-8, ref * cq)

    def test_formula_E_examples(self):
        E = projection_formula_E(B0, E1).E
        assert_close(E, [[1, 0], [1, 0]])
        assert_close((np.eye(2) - E) @ B0, np.diag([0, 1]))
        assert_close(projection_formula_E(np.diag([1.0, 2.0]), E1).E, np.diag([1, 0]))
        E = projection_formula_E(np.zeros((2, 2)), E1).E
        assert_close(E, np.diag([1, 0]))

    @given(seeds, dims)
    def test_formula_E(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_sign_congruence(rng, n)
        S = random_subspace(rng, n)
        if not is_weakly_complementable(B, S):
            return
        E, ER = projection_formula_E(B, S)
        ref = opnorm(B)
        ce = max(opnorm(E), 1.0)
        assert_close(E @ E, E, 1e-9, ce ** 2)
        assert opnorm(E @ S.perp().basis) <= 1e-9 * ce
        assert opnorm((np.eye(n) - E) @ B - schur_complement(B, S)) <= 1e-8 * ref * ce


class TestPositiveBlock:
    def test_examples(self):
        assert is_positive_block(block_decompose(B0, E1))
        assert not is_positive_block(block_decompose(np.array([[0.0, 1.0], [1.0, 0.0]]), E1))
        assert not is_positive_block(block_decompose(np.array([[1.0, 2.0], [2.0, 1.0]]), E1))

    @given(seeds, dims)
    def test_agrees_with_direct_test(self, seed, n):
        rng = np.random.default_rng(seed)
        B = random_sign_congruence(rng, n) if rng.random() < 0.5 else random_psd(rng, n, int(rng.integers(0, n + 1)))
        lmin = np.linalg.eigvalsh(B).min()
        if -1e-6 * max(opnorm(B), 1) < lmin < 0:
            return
        assert is_positive_block(block_decompose(B, random_subspace(rng, n))) == (lmin >= 0)
