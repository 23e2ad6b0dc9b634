import pytest
from hypothesis import given

from helpers import I_, J_, K_, matrices, rand_matrix, seeded
from tracefac.canonical import (
    SkewPolynomial,
    concentrate_diagonal,
    divisibility_chain_holds,
    kernel_signature,
    nilpotent_strict_upper,
    poly_divmod,
    rcf,
    unipotent_jordan_ones,
    zero_diagonal_similarity,
)
from tracefac.elimination import inverse
from tracefac.errors import (
    CentralInput,
    DivisionByZeroPoly,
    NoWitnessFound,
    NotNilpotent,
    NotTraceless,
    NotUnipotent,
)
from tracefac.matrix import (
    CompanionSpec,
    JordanLikeBlock,
    Matrix,
    block_diag,
    companion,
    is_strictly_upper,
    jordan_like,
)
from tracefac.scalars import GF, HQ, QQ, QQI


def P(ring, *cs):
    return SkewPolynomial(ring, [ring.coerce(c) for c in cs])


def test_divmod_examples():
    quo, rem = poly_divmod(P(QQ, -1, 0, 1), P(QQ, -1, 1), "left")
    assert quo == P(QQ, 1, 1) and rem.is_zero()
    f = P(QQ, 3, 2, 5)
    quo, rem = poly_divmod(f, P(QQ, 1))
    assert quo == f and rem.is_zero()
    quo, rem = poly_divmod(P(HQ, 1, 0, 1), P(HQ, -I_, 1), "right")
    assert rem.is_zero() and P(HQ, -I_, 1) * quo == P(HQ, 1, 0, 1)
    with pytest.raises(DivisionByZeroPoly):
        poly_divmod(f, P(QQ, 0))
    with pytest.raises(ValueError):
        poly_divmod(f, P(QQ, 1), "middle")


@given(matrices("HQ", n=1), matrices("HQ", n=1))
def test_divmod_property(a, b):
    f = SkewPolynomial(HQ, [a[0, 0], b[0, 0], HQ.one, a[0, 0]])
    g = SkewPolynomial(HQ, [b[0, 0], HQ.one])
    for side in ("left", "right"):
        quo, rem = poly_divmod(f, g, side)
        assert rem.degree < g.degree or rem.is_zero()
        assert (quo * g if side == "left" else g * quo) + rem == f


def _blocks_sum(form, ring):
    return block_diag([companion(b, ring) for b in form.blocks])


def test_rcf_examples():
    C = companion(CompanionSpec((QQ.coerce(2), QQ.coerce(0), QQ.coerce(-3))), QQ)
    f = rcf(C)
    assert len(f.blocks) == 1 and f.witness.P == Matrix.identity(QQ, 3)
    D = Matrix.diagonal(QQ, [7, 7])
    f = rcf(D)
    assert f.sizes == (1, 1) and divisibility_chain_holds(f, QQ)
    assert f.polynomials(QQ) == [P(QQ, -7, 1), P(QQ, -7, 1)]


@pytest.mark.parametrize("ring", [QQ, QQI, GF(2), GF(3), HQ], ids=lambda r: r.tag)
def test_rcf_random(ring):
    rng = seeded(8)
    for n in range(1, 5):
        for _ in range(12):
            A = rand_matrix(ring, n, rng, rng.choice([0.3, 0.8]))
            f = rcf(A, seed=n)
            assert f.witness.verify(A)
            assert inverse(f.witness.P) @ A @ f.witness.P == _blocks_sum(f, ring)
            assert list(f.sizes) == sorted(f.sizes, reverse=True)
            if ring.commutative:
                assert divisibility_chain_holds(f, ring)


def test_nilpotent_strict_upper_examples():
    w = nilpotent_strict_upper(Matrix.zeros(QQ, 2))
    assert w.P == Matrix.identity(QQ, 2) and w.T.is_zero()
    A = Matrix(HQ, [[I_, J_], [-J_, I_]])
    w = nilpotent_strict_upper(A)
    assert w.verify(A) and is_strictly_upper(w.T) and w.T.trace() == 0
    J3 = jordan_like(JordanLikeBlock(3, 0, 1), QQ)
    w = nilpotent_strict_upper(J3)
    assert w.P == Matrix.identity(QQ, 3) and w.T == J3
    with pytest.raises(NotNilpotent):
        nilpotent_strict_upper(Matrix.identity(QQ, 2))


def test_unipotent_examples():
    sizes, w = unipotent_jordan_ones(Matrix.identity(QQ, 3))
    assert sizes == (1, 1, 1) and w.P == Matrix.identity(QQ, 3)
    U = Matrix(QQ, [[1, 5], [0, 1]])
    sizes, w = unipotent_jordan_ones(U)
    assert sizes == (2,) and w.T == jordan_like(JordanLikeBlock(2, 1, 1), QQ) and w.verify(U)
    with pytest.raises(NotUnipotent):
        unipotent_jordan_ones(Matrix.diagonal(QQ, [1, 2]))


def _jordan_sizes_from_kernels(sig, n):
    # number of blocks of size >= k is dim ker N^k - dim ker N^(k-1)
    dims = (0,) + sig
    at_least = [dims[k] - dims[k - 1] for k in range(1, n + 1)]
    sizes = []
    for k in range(n, 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < n else 0)
        sizes += [k] * exact
    return tuple(sizes)


@pytest.mark.parametrize("ring", [QQ, HQ], ids=lambda r: r.tag)
def test_unipotent_random(ring):
    rng = seeded(21)
    for _ in range(20):
        n = 4
        S = rand_matrix(ring, n, rng, 0.4)
        U = Matrix.from_function(ring, n, n, lambda i, j: ring.one if i == j else (S[i, j] if j > i else ring.zero))
        Q = rand_matrix(ring, n, rng, 1.0)
        try:
            Qi = inverse(Q)
        except Exception:
            continue
        U = Q @ U @ Qi
        sizes, w = unipotent_jordan_ones(U)
        assert w.verify(U)
        sig = kernel_signature(U - Matrix.identity(ring, n))
        assert sizes == _jordan_sizes_from_kernels(sig, n)


def test_zero_diagonal_examples():
    E = Matrix(QQ, [[0, 1], [0, 0]])
    w = zero_diagonal_similarity(E)
    assert w.P == Matrix.identity(QQ, 2) and w.T == E
    D = Matrix.diagonal(QQ, [1, -1])
    w = zero_diagonal_similarity(D)
    assert w.verify(D) and not any(w.T.diagonal_entries())
    with pytest.raises(CentralInput):
        zero_diagonal_similarity(Matrix.zeros(QQ, 2))
    with pytest.raises(NotTraceless):
        zero_diagonal_similarity(Matrix(QQ, [[1, 1], [0, 0]]))


def test_zero_diagonal_random_rational():
    rng = seeded(4)
    done = 0
    while done < 30:
        A = rand_matrix(QQ, 3, rng)
        A = A.replace(2, 2, -(A[0, 0] + A[1, 1]))
        if A == Matrix.zeros(QQ, 3):
            continue
        w = zero_diagonal_similarity(A, seed=done)
        assert w.verify(A) and not any(w.T.diagonal_entries())
        done += 1


@pytest.mark.parametrize("ring", [QQ, HQ, GF(2)], ids=lambda r: r.tag)
def test_concentrate_diagonal(ring):
    rng = seeded(6)
    for n in (2, 3, 4):
        for _ in range(10):
            A = rand_matrix(ring, n, rng)
            try:
                w = concentrate_diagonal(A, seed=n)
            except CentralInput:
                continue
            assert w.verify(A) and all(not w.T[i, i] for i in range(n - 1))
            # only the residue of the trace survives similarity
            assert ring.residue(w.T.trace()) == ring.residue(A.trace())


def test_traceless_quaternion_matrix_without_zero_diagonal_form():
    A = Matrix(HQ, [[I_, J_], [0, -I_]])
    assert A.trace() == 0
    I2 = Matrix.identity(HQ, 2)
    # T = [[0,b],[c,0]] has T^2 + I diagonal, while A^2 + I = 2k E12 is nonzero nilpotent;
    # a diagonal nilpotent is zero, and A^2 + I = 0 is similarity-invariant
    R = A @ A + I2
    assert R == Matrix(HQ, [[0, K_ + K_], [0, 0]])
    with pytest.raises(NoWitnessFound):
        zero_diagonal_similarity(A)
