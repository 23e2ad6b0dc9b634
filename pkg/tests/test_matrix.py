import pytest
from hypothesis import given

from helpers import I_, J_, K_, matrices, q
from tracefac.elimination import inverse
from tracefac.errors import DimensionMismatch, RingMismatch
from tracefac.matrix import (
    CompanionSpec,
    JordanLikeBlock,
    Matrix,
    Permutation,
    block_diag,
    companion,
    conjugate,
    is_nilpotent,
    is_traceless,
    is_unitriangular,
    jordan_like,
    permutation_matrix,
    permutation_of,
)
from tracefac.scalars import GF, HQ, QQ


def test_identity_product():
    A = Matrix(QQ, [[1, 2], [3, 4]])
    assert Matrix.identity(QQ, 2) @ A == A == A @ Matrix.identity(QQ, 2)


def test_quaternion_conjugation_display():
    P = Matrix(HQ, [[J_, 0], [I_, 1]])
    A = Matrix(HQ, [[I_, J_], [-J_, I_]])
    E12 = Matrix(HQ, [[0, 1], [0, 0]])
    assert inverse(P) @ A @ P == E12
    assert conjugate(A, P) == E12
    assert conjugate(conjugate(A, P), inverse(P)) == A
    assert conjugate(A, Matrix.identity(HQ, 2)) == A


def test_antidiagonal_times_swap():
    a1, a2 = q(2, 1), q(0, 0, 3)
    S = Matrix(HQ, [[0, 1], [1, 0]])
    assert S @ Matrix(HQ, [[0, a2], [a1, 0]]) == Matrix.diagonal(HQ, [a1, a2])


def test_trace_not_similarity_invariant():
    a, b = I_, J_
    D = Matrix.diagonal(HQ, [a, -a])
    assert D.trace() == 0
    S = Matrix.diagonal(HQ, [1, b])
    C = S @ D @ inverse(S)
    assert C.trace() == a - b * a * b.inverse()
    assert C.trace() != 0
    assert Matrix.zeros(HQ, 3).trace() == 0


def test_nilpotent_with_nonzero_trace():
    A = Matrix(HQ, [[I_, J_], [-J_, I_]])
    assert A @ A == Matrix.zeros(HQ, 2)
    assert is_nilpotent(A) and not is_traceless(A)
    assert A.trace() == q(i=2)
    assert is_nilpotent(Matrix(QQ, [[0, 1, 2], [0, 0, 3], [0, 0, 0]]))
    assert is_traceless(Matrix.diagonal(QQ, [1, -1]))


def test_companion_layouts():
    a0, a1 = QQ.coerce(3), QQ.coerce(5)
    assert companion(CompanionSpec((a0, a1)), QQ) == Matrix(QQ, [[0, 3], [1, 5]])
    assert companion(CompanionSpec((0,), "negated"), QQ) == Matrix(QQ, [[0]])
    N = companion(CompanionSpec((0, 0, 0)), QQ)
    assert N == Matrix(QQ, [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    assert companion(CompanionSpec((0, 0, 0), "negated"), QQ) == N
    assert companion(CompanionSpec((a0, a1), "negated"), QQ) == Matrix(QQ, [[0, -3], [1, -5]])


def test_permutation_matrices():
    assert permutation_matrix(Permutation.identity(3), QQ) == Matrix.identity(QQ, 3)
    for n in range(2, 6):
        c = Permutation.cycle(n)
        P = permutation_matrix(c, QQ)
        assert P.trace() == 0
        assert permutation_of(P) == c
        assert P.apply(tuple(QQ.coerce(i == 0) for i in range(n)))[c(0)] == 1
    assert permutation_of(Matrix(QQ, [[1, 1], [0, 1]])) is None
    assert Permutation.cycle(4).fixed_point_free and not Permutation((0, 2, 1)).fixed_point_free
    with pytest.raises(ValueError):
        Permutation((0, 0))


def test_jordan_like():
    a, b = q(1, 1), q(0, 0, 2)
    assert jordan_like(JordanLikeBlock(2, a, b), HQ) == Matrix(HQ, [[a, b], [0, a]])


def test_block_diag_and_unitriangular():
    A = block_diag([Matrix(QQ, [[1, 2], [0, 1]]), Matrix(QQ, [[1]])])
    assert A.shape == (3, 3)
    assert is_unitriangular(A, "upper") and not is_unitriangular(A, "lower")


def test_shape_and_ring_errors():
    with pytest.raises(DimensionMismatch):
        Matrix(QQ, [[1, 2]]) @ Matrix(QQ, [[1, 2]])
    with pytest.raises(RingMismatch):
        Matrix(QQ, [[1]]) + Matrix(GF(3), [[1]])


@given(matrices("HQ", n=2), matrices("HQ", n=2), matrices("HQ", n=2))
def test_matrix_associativity(A, B, C):
    assert (A @ B) @ C == A @ (B @ C)
    assert A @ (B + C) == A @ B + A @ C


@given(matrices("HQ", n=3), matrices("HQ", n=3))
def test_trace_additive_and_cyclic_mod_commutators(A, B):
    assert (A + B).trace() == A.trace() + B.trace()
    # tr(AB) - tr(BA) lies in [D, D], which over HQ means zero real part
    assert HQ.residue((A @ B).trace() - (B @ A).trace()) == 0
