"""Row reduction over division rings and the factorizations built on it.

Row operations multiply rows by scalars from the left; column operations
multiply from the right.  Column vectors therefore form a right vector
space: a vector ``v`` is a tuple of entries and ``v * c`` scales each entry
on the right.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Optional

from .errors import CentralInput, NoWitnessFound, NotInvertible, NotSingular, NotSquare
from .matrix import (
    Matrix,
    Permutation,
    block_diag,
    is_central_matrix,
    permutation_matrix,
)

_FINITE_ENUMERATION_LIMIT = 4096


@dataclass(frozen=True)
class RowReduction:
    rank: int
    reduced: Matrix
    left: Matrix
    pivots: tuple


def _rref(ring, rows, ncols, track=True):
    R = [list(r) for r in rows]
    nrows = len(R)
    E = None
    if track:
        z, o = ring.zero, ring.one
        E = [[o if i == j else z for j in range(nrows)] for i in range(nrows)]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if R[i][c]), None)
        if p is None:
            continue
        if p != r:
            R[r], R[p] = R[p], R[r]
            if track:
                E[r], E[p] = E[p], E[r]
        inv = ring.inv(R[r][c])
        R[r] = [inv * x if x else x for x in R[r]]
        if track:
            E[r] = [inv * x if x else x for x in E[r]]
        prow = R[r]
        for i in range(nrows):
            if i == r:
                continue
            f = R[i][c]
            if not f:
                continue
            R[i] = [a - f * b if b else a for a, b in zip(R[i], prow)]
            if track:
                erow = E[r]
                E[i] = [a - f * b if b else a for a, b in zip(E[i], erow)]
        pivots.append(c)
        r += 1
    return R, E, pivots


def row_reduce(A: Matrix) -> RowReduction:
    """Reduced row echelon form ``R = E A`` with ``E`` invertible."""
    R, E, pivots = _rref(A.ring, A.rows, A.ncols)
    return RowReduction(
        rank=len(pivots),
        reduced=Matrix._raw(A.ring, tuple(tuple(r) for r in R)),
        left=Matrix._raw(A.ring, tuple(tuple(r) for r in E)),
        pivots=tuple(pivots),
    )


def rank(A: Matrix) -> int:
    return len(_rref(A.ring, A.rows, A.ncols, track=False)[2])


def inverse(A: Matrix) -> Matrix:
    if not A.is_square():
        raise NotSquare("inverse of a non-square matrix")
    R, E, pivots = _rref(A.ring, A.rows, A.ncols)
    if len(pivots) < A.nrows:
        raise NotInvertible(f"rank {len(pivots)} < {A.nrows}")
    return Matrix._raw(A.ring, tuple(tuple(r) for r in E))


def is_invertible(A: Matrix) -> bool:
    return A.is_square() and rank(A) == A.nrows


def solve(A: Matrix, b) -> Optional[tuple]:
    """Some ``x`` with ``A x = b`` (right coefficients), or ``None``."""
    ring = A.ring
    rows = [list(r) + [ring.coerce(bi)] for r, bi in zip(A.rows, b)]
    R, _, pivots = _rref(ring, rows, A.ncols + 1, track=False)
    if pivots and pivots[-1] == A.ncols:
        return None
    x = [ring.zero] * A.ncols
    for row, pc in enumerate(pivots):
        x[pc] = R[row][A.ncols]
    return tuple(x)


def right_kernel(A: Matrix) -> list:
    """Basis of ``{w : A w = 0}`` as column tuples."""
    ring = A.ring
    R, _, pivots = _rref(ring, A.rows, A.ncols, track=False)
    pivot_set = set(pivots)
    basis = []
    for f in range(A.ncols):
        if f in pivot_set:
            continue
        w = [ring.zero] * A.ncols
        w[f] = ring.one
        for row, pc in enumerate(pivots):
            if R[row][f]:
                w[pc] = -R[row][f]
        basis.append(tuple(w))
    return basis


def column_rank(ring, vectors) -> int:
    if not vectors:
        return 0
    return rank(Matrix.from_columns(ring, vectors))


def unit_vector(ring, n, i):
    return tuple(ring.one if r == i else ring.zero for r in range(n))


def extend_to_basis(ring, vectors, n) -> list:
    """Append unit vectors to an independent list until it spans ``D^n``."""
    basis = [tuple(v) for v in vectors]
    current = column_rank(ring, basis)
    if current != len(basis):
        raise ValueError("vectors are not independent")
    for i in range(n):
        if len(basis) == n:
            break
        e = unit_vector(ring, n, i)
        if column_rank(ring, basis + [e]) > current:
            basis.append(e)
            current += 1
    return basis


def candidate_vectors(ring, n, rng=None, randoms=48):
    """Deterministic scan of test vectors: units, pairwise sums, all-ones, then random ones.

    Small finite rings are enumerated exhaustively instead.
    """
    if ring.size is not None and ring.size ** n <= _FINITE_ENUMERATION_LIMIT:
        elems = ring.elements()
        for v in cartesian(elems, repeat=n):
            if any(v):
                yield tuple(v)
        return
    z, o = ring.zero, ring.one
    for i in range(n):
        yield unit_vector(ring, n, i)
    for i in range(n):
        for j in range(i + 1, n):
            yield tuple(o if r in (i, j) else z for r in range(n))
    yield (o,) * n
    rng = rng or random.Random(0)
    for _ in range(randoms):
        v = tuple(ring.random(rng, 2) for _ in range(n))
        if any(v):
            yield v


# ---------------------------------------------------------------------------
# Bruhat decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BruhatDecomposition:
    L: Matrix
    P: Matrix
    H: Matrix
    U: Matrix
    permutation: Permutation

    def product(self):
        return self.L @ self.P @ self.H @ self.U

    @property
    def factor_count(self):
        return 4


def bruhat(A: Matrix) -> BruhatDecomposition:
    """``A = L P H U`` with ``L`` lower and ``U`` upper unitriangular, ``H`` diagonal.

    Singular input is allowed; its zero columns give zero entries of ``H``.
    """
    if not A.is_square():
        raise NotSquare("Bruhat decomposition of a non-square matrix")
    ring = A.ring
    n = A.nrows
    z, o = ring.zero, ring.one
    M = [list(r) for r in A.rows]
    L = [[o if i == j else z for j in range(n)] for i in range(n)]
    U = [[o if i == j else z for j in range(n)] for i in range(n)]
    processed = [False] * n
    sigma = [None] * n
    h = [z] * n
    for j in range(n):
        i = next((r for r in range(n) if not processed[r] and M[r][j]), None)
        if i is None:
            continue
        pivot = M[i][j]
        inv = ring.inv(pivot)
        for r in range(i + 1, n):
            if processed[r] or not M[r][j]:
                continue
            c = M[r][j] * inv
            M[r] = [a - c * b if b else a for a, b in zip(M[r], M[i])]
            for t in range(n):
                if L[t][r]:
                    L[t][i] = L[t][i] + L[t][r] * c
        for k in range(j + 1, n):
            if not M[i][k]:
                continue
            d = inv * M[i][k]
            M[i][k] = z
            Uk = U[k]
            U[j] = [a + d * b if b else a for a, b in zip(U[j], Uk)]
        processed[i] = True
        sigma[j] = i
        h[j] = pivot
    spare = iter(r for r in range(n) if not processed[r])
    for j in range(n):
        if sigma[j] is None:
            sigma[j] = next(spare)
    perm = Permutation(sigma)
    result = BruhatDecomposition(
        L=Matrix._raw(ring, tuple(tuple(r) for r in L)),
        P=permutation_matrix(perm, ring),
        H=Matrix.diagonal(ring, h),
        U=Matrix._raw(ring, tuple(tuple(r) for r in U)),
        permutation=perm,
    )
    assert result.product() == A, "Bruhat reconstruction failed"
    return result


# ---------------------------------------------------------------------------
# rank factorization and the invertible x nilpotent split
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankFactorization:
    F: Optional[Matrix]
    H: Optional[Matrix]
    rank: int


def rank_factorization(A: Matrix) -> RankFactorization:
    """``A = F H`` with ``F`` of full column rank and ``H`` of full row rank.

    The zero matrix gives the sentinel ``rank == 0`` with ``F = H = None``.
    """
    R, _, pivots = _rref(A.ring, A.rows, A.ncols, track=False)
    r = len(pivots)
    if r == 0:
        return RankFactorization(None, None, 0)
    F = Matrix.from_columns(A.ring, [A.column(c) for c in pivots])
    H = Matrix._raw(A.ring, tuple(tuple(row) for row in R[:r]))
    return RankFactorization(F, H, r)


@dataclass(frozen=True)
class InvertibleNilpotentSplit:
    G: Matrix
    N: Matrix


def invertible_nilpotent_split(A: Matrix) -> InvertibleNilpotentSplit:
    """Write a singular square ``A`` as ``G N`` with ``G`` invertible and ``N`` nilpotent.

    With ``A = F H`` of rank ``r``, let ``F'`` have columns ``w, e_p1, ..., e_p(r-1)``
    where ``w`` spans part of the kernel of ``H`` and ``p_k`` are the pivot columns
    of ``H``.  Then ``H F'`` is the nilpotent shift, ``N = F' H`` is nilpotent, and
    any invertible ``G`` with ``G F' = F`` gives ``G N = A``.
    """
    if not A.is_square():
        raise NotSquare("split of a non-square matrix")
    ring = A.ring
    n = A.nrows
    fac = rank_factorization(A)
    if fac.rank == n:
        raise NotSingular("matrix is invertible; use A = A * I")
    if fac.rank == 0:
        return InvertibleNilpotentSplit(Matrix.identity(ring, n), Matrix.zeros(ring, n))
    r = fac.rank
    H = fac.H
    pivots = row_reduce(H).pivots
    w = right_kernel(H)[0]
    f_prime = [w] + [unit_vector(ring, n, pivots[k]) for k in range(r - 1)]
    Fp = Matrix.from_columns(ring, f_prime)
    basis_f = Matrix.from_columns(ring, extend_to_basis(ring, fac.F.columns(), n))
    basis_fp = Matrix.from_columns(ring, extend_to_basis(ring, f_prime, n))
    G = basis_f @ inverse(basis_fp)
    N = Fp @ H
    return InvertibleNilpotentSplit(G, N)


# ---------------------------------------------------------------------------
# X H Y form of a non-central invertible matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LDU:
    X: Matrix
    d: tuple
    Y: Matrix


def ldu(B: Matrix) -> Optional[LDU]:
    """``B = X diag(d) Y`` without pivoting, or ``None`` if a pivot vanishes."""
    ring = B.ring
    n = B.nrows
    z, o = ring.zero, ring.one
    S = [list(r) for r in B.rows]
    X = [[o if i == j else z for j in range(n)] for i in range(n)]
    Y = [[o if i == j else z for j in range(n)] for i in range(n)]
    d = []
    for k in range(n):
        p = S[k][k]
        if not p:
            return None
        inv = ring.inv(p)
        d.append(p)
        for i in range(k + 1, n):
            X[i][k] = S[i][k] * inv
        for j in range(k + 1, n):
            Y[k][j] = inv * S[k][j]
        for i in range(k + 1, n):
            if not S[i][k]:
                continue
            xi = X[i][k]
            for j in range(k + 1, n):
                if S[k][j]:
                    S[i][j] = S[i][j] - xi * S[k][j]
    return LDU(
        Matrix._raw(ring, tuple(tuple(r) for r in X)),
        tuple(d),
        Matrix._raw(ring, tuple(tuple(r) for r in Y)),
    )


@dataclass(frozen=True)
class XHYForm:
    P: Matrix
    X: Matrix
    H: Matrix
    Y: Matrix

    @property
    def h(self):
        return self.H[self.H.nrows - 1, self.H.ncols - 1]


def _unit_pivot_basis(A: Matrix, rng, depth=0):
    """``Q`` such that the leading ``n-1`` LDU pivots of ``Q^-1 A Q`` are all one.

    Take ``p1 = v`` and ``p2 = A v - v`` so the first column becomes
    ``(1, 1, 0, ...)``; conjugating by ``1 (+) Q2`` conjugates the Schur
    complement, so recurse on it while it stays non-central.
    """
    ring = A.ring
    n = A.nrows
    if n == 1:
        return Matrix.identity(ring, 1)
    for v in candidate_vectors(ring, n, rng):
        Av = A.apply(v)
        second = tuple(a - b for a, b in zip(Av, v))
        if column_rank(ring, [v, second]) < 2:
            continue
        P1 = Matrix.from_columns(ring, extend_to_basis(ring, [v, second], n))
        B = inverse(P1) @ A @ P1
        if n == 2:
            return P1
        S = Matrix._raw(ring, tuple(
            tuple(B[i, j] - B[i, 0] * B[0, j] for j in range(1, n)) for i in range(1, n)))
        if is_central_matrix(S):
            continue
        try:
            Q2 = _unit_pivot_basis(S, rng, depth + 1)
        except NoWitnessFound:
            continue
        return P1 @ block_diag([Matrix.identity(ring, 1), Q2])
    raise NoWitnessFound("no basis with unit pivots found")


def xhy(A: Matrix, seed: int = 0) -> XHYForm:
    """``P^-1 A P = X H Y`` with ``X`` lower, ``Y`` upper unitriangular and ``H = diag(1,...,1,h)``."""
    if not A.is_square():
        raise NotSquare("xhy of a non-square matrix")
    if rank(A) < A.nrows:
        raise NotInvertible("xhy needs an invertible matrix")
    if is_central_matrix(A):
        raise CentralInput("xhy needs a non-central matrix")
    one = A.ring.one
    form = ldu(A)
    if form is not None and all(x == one for x in form.d[:-1]):
        P = Matrix.identity(A.ring, A.nrows)
    else:
        P = _unit_pivot_basis(A, random.Random(seed))
        form = ldu(inverse(P) @ A @ P)
    assert form is not None and all(x == one for x in form.d[:-1])
    return XHYForm(P=P, X=form.X, H=Matrix.diagonal(A.ring, form.d), Y=form.Y)


def solve_center_linear(ring, count, fn, rhs):
    """Solve ``fn(z) = rhs`` for ``count`` unknown scalars when ``fn`` is linear over the center.

    ``fn`` maps a list of scalars to a flat list of scalars.  The system is
    expanded in a basis of the ring over its center and solved there.
    Returns a list of scalars or ``None``.
    """
    center = ring.center()
    basis = ring.center_basis()
    d = len(basis)
    zero = ring.zero
    columns = []
    for u in range(count):
        for b in basis:
            z = [zero] * count
            z[u] = b
            columns.append([c for y in fn(z) for c in ring.coords(y)])
    target = [c for y in rhs for c in ring.coords(y)]
    if not columns:
        return [] if not any(target) else None
    M = Matrix.from_columns(center, columns)
    x = solve(M, target)
    if x is None:
        return None
    return [ring.from_coords(list(x[u * d:(u + 1) * d])) for u in range(count)]
