import pytest
from hypothesis import given

from helpers import I_, J_, K_, matrices, rand_matrix, rand_singular, seeded
from tracefac.elimination import (
    bruhat,
    inverse,
    invertible_nilpotent_split,
    is_invertible,
    ldu,
    rank,
    rank_factorization,
    row_reduce,
    solve,
    xhy,
)
from tracefac.errors import CentralInput, NotInvertible, NotSingular
from tracefac.matrix import (
    Matrix,
    Permutation,
    is_diagonal,
    is_nilpotent,
    is_unitriangular,
    permutation_matrix,
    permutation_of,
)
from tracefac.scalars import GF, HQ, QQ, QQI


def test_rank_examples():
    assert rank(Matrix.identity(QQ, 4)) == 4
    assert rank(Matrix.diagonal(QQ, [5, 0])) == 1
    assert rank(Matrix(HQ, [[I_, J_], [-J_, I_]])) == 1
    # the second row is a left multiple of the first
    c = -J_ * I_.inverse()
    assert c == -K_ and c * I_ == -J_ and c * J_ == I_
    red = row_reduce(Matrix(HQ, [[I_, J_], [-J_, I_]]))
    assert red.rank == 1 and red.left @ Matrix(HQ, [[I_, J_], [-J_, I_]]) == red.reduced


def test_inverse_examples():
    I2 = Matrix.identity(HQ, 2)
    assert inverse(I2) == I2
    P = Matrix(HQ, [[J_, 0], [I_, 1]])
    assert P @ inverse(P) == I2 == inverse(P) @ P
    assert inverse(Matrix.diagonal(QQ, [2, 3])) == Matrix.diagonal(QQ, [QQ.inv(QQ.coerce(2)), QQ.inv(QQ.coerce(3))])
    with pytest.raises(NotInvertible):
        inverse(Matrix(QQ, [[1, 2], [2, 4]]))


@given(matrices("HQ", min_n=1, max_n=4))
def test_inverse_property(A):
    if is_invertible(A):
        I = Matrix.identity(HQ, A.nrows)
        assert A @ inverse(A) == I == inverse(A) @ A
    else:
        assert rank(A) < A.nrows


@given(matrices("Qi", min_n=1, max_n=4))
def test_solve(A):
    b = tuple(QQI.coerce(i + 1) for i in range(A.nrows))
    x = solve(A, b)
    if x is not None:
        assert A.apply(x) == b
    else:
        assert rank(A) < A.nrows


def test_bruhat_examples():
    I3 = Matrix.identity(QQ, 3)
    br = bruhat(I3)
    assert (br.L, br.P, br.H, br.U) == (I3, I3, I3, I3)
    S = Matrix(QQ, [[0, 1], [1, 0]])
    br = bruhat(S)
    I2 = Matrix.identity(QQ, 2)
    assert br.L == I2 and br.P == S and br.H == I2 and br.U == I2


@given(matrices("Qi", n=4))
def test_bruhat_property(A):
    br = bruhat(A)
    assert br.L @ br.P @ br.H @ br.U == A
    assert is_unitriangular(br.L, "lower") and is_unitriangular(br.U, "upper")
    assert is_diagonal(br.H) and permutation_of(br.P) is not None


@given(matrices("HQ", min_n=2, max_n=4))
def test_bruhat_quaternions(A):
    assert bruhat(A).product() == A


def test_rank_factorization_examples():
    I3 = Matrix.identity(QQ, 3)
    rf = rank_factorization(I3)
    assert rf.F == I3 and rf.H == I3 and rf.rank == 3
    u, v = [1, 2, 3], [4, 0, 5]
    A = Matrix(QQ, [[a * b for b in v] for a in u])
    rf = rank_factorization(A)
    assert rf.rank == 1 and rf.F.shape == (3, 1) and rf.H.shape == (1, 3) and rf.F @ rf.H == A
    z = rank_factorization(Matrix.zeros(QQ, 2))
    assert z.rank == 0 and z.F is None


def test_rank_factorization_rank_two():
    rng = seeded(5)
    X, Y = rand_matrix(QQ, 4, rng, 1.0), rand_matrix(QQ, 4, rng, 1.0)
    F0 = Matrix(QQ, [r[:2] for r in X.rows])
    H0 = Matrix(QQ, Y.rows[:2])
    A = F0 @ H0
    rf = rank_factorization(A)
    assert rf.rank == rank(A) and rf.F @ rf.H == A


def test_split_examples():
    z = invertible_nilpotent_split(Matrix.zeros(QQ, 2))
    assert z.G == Matrix.identity(QQ, 2) and z.N == Matrix.zeros(QQ, 2)
    s = invertible_nilpotent_split(Matrix.diagonal(QQ, [1, 0]))
    assert s.G == Matrix(QQ, [[0, 1], [1, 0]]) and s.N == Matrix(QQ, [[0, 0], [1, 0]])
    with pytest.raises(NotSingular):
        invertible_nilpotent_split(Matrix.identity(QQ, 2))


@pytest.mark.parametrize("ring", [QQ, QQI, HQ, GF(2), GF(3)], ids=lambda r: r.tag)
def test_split_random(ring):
    rng = seeded(11)
    for n in (2, 3, 4):
        for _ in range(10):
            A = rand_singular(ring, n, rng)
            s = invertible_nilpotent_split(A)
            assert s.G @ s.N == A and rank(s.G) == n
            assert s.N.power(n).is_zero() and is_nilpotent(s.N)


def test_ldu():
    B = Matrix(QQ, [[2, 1], [4, 5]])
    f = ldu(B)
    assert f.X @ Matrix.diagonal(QQ, f.d) @ f.Y == B
    assert ldu(Matrix(QQ, [[0, 1], [1, 0]])) is None


def _check_xhy(A, form):
    n = A.nrows
    assert inverse(form.P) @ A @ form.P == form.X @ form.H @ form.Y
    assert is_unitriangular(form.X, "lower") and is_unitriangular(form.Y, "upper")
    assert all(form.H[i, i] == A.ring.one for i in range(n - 1)) and is_diagonal(form.H)


def test_xhy_examples():
    A = Matrix(QQ, [[1, 1], [0, 1]])
    f = xhy(A)
    I2 = Matrix.identity(QQ, 2)
    assert f.P == I2 and f.X == I2 and f.H == I2 and f.Y == A
    _check_xhy(Matrix(QQ, [[0, 1], [1, 0]]), xhy(Matrix(QQ, [[0, 1], [1, 0]])))
    with pytest.raises(CentralInput):
        xhy(Matrix.diagonal(HQ, [2, 2]))
    with pytest.raises(NotInvertible):
        xhy(Matrix(QQ, [[1, 1], [1, 1]]))


@pytest.mark.parametrize("ring", [QQ, HQ, GF(2), GF(5)], ids=lambda r: r.tag)
def test_xhy_random(ring):
    rng = seeded(3)
    done = 0
    while done < 15:
        A = rand_matrix(ring, rng.choice([2, 3, 4]), rng)
        if not is_invertible(A) or A == Matrix.diagonal(ring, [A[0, 0]] * A.nrows):
            continue
        _check_xhy(A, xhy(A, seed=done))
        done += 1


def test_permutation_matrix_columns():
    sigma = Permutation((1, 2, 0))
    P = permutation_matrix(sigma, QQ)
    assert all(P[sigma(i), i] == 1 for i in range(3))
