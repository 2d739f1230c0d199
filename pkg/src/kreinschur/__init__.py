"""Schur complements of selfadjoint operators on finite-dimensional Hilbert and Krein spaces."""
from .errors import *  # noqa: F401,F403
from .numkernel import (
    DEFAULT_TOL,
    Inertia,
    Tolerances,
    hermitian_eig,
    inertia,
    modulus_and_sign,
    numerical_rank,
    order_leq,
    pseudo_inverse,
    psd_sqrt,
    range_inclusion,
    reduced_solution,
)
from .hilbert import (
    BlockDecomposition,
    SignedSplit,
    Subspace,
    b_selfadjoint_projection,
    block_decompose,
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
from .krein import (
    AltSignature,
    KreinSpace,
    PolarFactorization,
    is_krein_selfadjoint,
    is_regular_subspace,
    krein_adjoint,
    krein_orthonormal_basis,
    orthogonal_companion,
    polar_factorization,
    random_j_unitary,
    random_signature,
    tilde_alpha,
)
from .krein_schur import (
    is_weakly_complementable_krein,
    krein_compression,
    krein_projection_element,
    krein_schur_complement,
    krein_schur_regular,
    mary_schur,
    mmp_schur,
)
from .completion import (
    IncompleteBlock,
    completion_exists,
    minimal_completion,
    sample_solution_set,
    validate_completion,
)
from .oracle import Report

__version__ = "0.1.0"
