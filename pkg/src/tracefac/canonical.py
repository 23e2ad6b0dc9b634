"""Similarity machinery: polynomials over D, companion-block forms and flag bases."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .elimination import (
    candidate_vectors,
    column_rank,
    extend_to_basis,
    inverse,
    right_kernel,
    solve,
    solve_center_linear,
)
from .errors import (
    CentralInput,
    DivisionByZeroPoly,
    NoWitnessFound,
    NotNilpotent,
    NotSquare,
    NotTraceless,
    NotUnipotent,
)
from .matrix import (
    CompanionSpec,
    JordanLikeBlock,
    Matrix,
    block_diag,
    companion,
    is_central_matrix,
    is_nilpotent,
    jordan_like,
)


# ---------------------------------------------------------------------------
# polynomials with a central indeterminate
# ---------------------------------------------------------------------------


class SkewPolynomial:
    """Polynomial ``sum c_i x^i`` over a possibly noncommutative ring; ``x`` is central."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        cs = [ring.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.ring = ring
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, ring, c, d):
        return cls(ring, [ring.zero] * d + [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.ring.one

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        z = self.ring.zero
        n = max(len(a), len(b))
        return SkewPolynomial(self.ring, [(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z)
                                          for i in range(n)])

    def __neg__(self):
        return SkewPolynomial(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return SkewPolynomial(self.ring, [])
        out = [self.ring.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return SkewPolynomial(self.ring, out)

    def __eq__(self, other):
        return isinstance(other, SkewPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def evaluate_matrix(self, A: Matrix) -> Matrix:
        """``sum c_i A^i``; meaningful for central coefficients only."""
        n = A.nrows
        out = Matrix.zeros(A.ring, n)
        power = Matrix.identity(A.ring, n)
        for c in self.coeffs:
            out = out + power.scale_left(c)
            power = power @ A
        return out

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c})" + ("" if i == 0 else f"x^{i}"))
        return " + ".join(reversed(terms))


def poly_divmod(f: SkewPolynomial, g: SkewPolynomial, side: str = "left"):
    """Euclidean division: ``f = q*g + r`` (left) or ``f = g*q + r`` (right), ``deg r < deg g``."""
    if g.is_zero():
        raise DivisionByZeroPoly("division by the zero polynomial")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    ring = f.ring
    inv_lead = ring.inv(g.leading())
    q = SkewPolynomial(ring, [])
    r = f
    while not r.is_zero() and r.degree >= g.degree:
        d = r.degree - g.degree
        if side == "left":
            t = SkewPolynomial.monomial(ring, r.leading() * inv_lead, d)
            r = r - t * g
        else:
            t = SkewPolynomial.monomial(ring, inv_lead * r.leading(), d)
            r = r - g * t
        q = q + t
    return q, r


# ---------------------------------------------------------------------------
# similarity witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimilarityWitness:
    """``P^-1 A P = T`` for the matrix ``A`` it was built from."""

    P: Matrix
    T: Matrix

    @classmethod
    def of(cls, A: Matrix, P: Matrix):
        return cls(P, inverse(P) @ A @ P)

    def source(self) -> Matrix:
        return self.P @ self.T @ inverse(self.P)

    def verify(self, A: Matrix) -> bool:
        try:
            Pinv = inverse(self.P)
        except Exception:
            return False
        return Pinv @ A @ self.P == self.T

    def then(self, Q: Matrix) -> SimilarityWitness:
        """Conjugate the form further by ``Q``."""
        return SimilarityWitness(self.P @ Q, inverse(Q) @ self.T @ Q)


# ---------------------------------------------------------------------------
# companion-block decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalCanonicalForm:
    blocks: tuple
    witness: SimilarityWitness

    @property
    def sizes(self):
        return tuple(b.size for b in self.blocks)

    def polynomials(self, ring):
        return [b.polynomial(ring) for b in self.blocks]

    def count_of_size(self, k):
        return sum(1 for b in self.blocks if b.size == k)


def krylov(A: Matrix, v):
    """Columns ``v, Av, ..., A^(m-1) v`` and right coefficients ``c`` with ``A^m v = sum A^i v c_i``."""
    ring = A.ring
    cols = [tuple(v)]
    while True:
        nxt = A.apply(cols[-1])
        K = Matrix.from_columns(ring, cols)
        c = solve(K, nxt)
        if c is not None:
            return cols, c
        cols.append(nxt)


def _split_block(B: Matrix, m: int):
    """Conjugator ``[[I, Z], [0, I]]`` clearing the top-right block of ``B``, or ``None``."""
    ring = B.ring
    n = B.nrows
    k = n - m
    if k == 0:
        return Matrix.identity(ring, n)
    C = B.submatrix(0, m, 0, m)
    X = B.submatrix(0, m, m, n)
    B2 = B.submatrix(m, n, m, n)
    if X.is_zero():
        return Matrix.identity(ring, n)

    def sylvester(zs):
        Z = Matrix._raw(ring, tuple(tuple(zs[i * k:(i + 1) * k]) for i in range(m)))
        return [x for row in (C @ Z - Z @ B2).rows for x in row]

    rhs = [-x for row in X.rows for x in row]
    zs = solve_center_linear(ring, m * k, sylvester, rhs)
    if zs is None:
        return None
    z, o = ring.zero, ring.one
    rows = []
    for i in range(n):
        row = [o if i == j else z for j in range(n)]
        if i < m:
            row[m:] = zs[i * k:(i + 1) * k]
        rows.append(tuple(row))
    return Matrix._raw(ring, tuple(rows))


def _cyclic_split(A: Matrix, rng):
    """Largest cyclic block that splits off as a direct summand: ``(spec, P)``."""
    ring = A.ring
    n = A.nrows
    found = []
    best = 0
    for v in candidate_vectors(ring, n, rng):
        cols, c = krylov(A, v)
        m = len(cols)
        if m > best:
            found.insert(0, (cols, c))
            best = m
            if m == n:
                break
        elif len(found) < 8:
            found.append((cols, c))
    found.sort(key=lambda fc: -len(fc[0]))
    for cols, c in found:
        m = len(cols)
        P1 = Matrix.from_columns(ring, extend_to_basis(ring, cols, n))
        B = inverse(P1) @ A @ P1
        S = _split_block(B, m)
        if S is not None:
            return CompanionSpec(tuple(c), "plain"), P1 @ S
    raise NoWitnessFound("no cyclic block splits off")


def rcf(A: Matrix, seed: int = 0) -> RationalCanonicalForm:
    """Similarity to a direct sum of companion blocks, largest first."""
    if not A.is_square():
        raise NotSquare("canonical form of a non-square matrix")
    ring = A.ring
    rng = random.Random(seed)
    blocks = []
    P = Matrix.identity(ring, A.nrows)
    offset = 0
    current = A
    while True:
        spec, Q = _cyclic_split(current, rng)
        blocks.append(spec)
        n = P.nrows
        full = block_diag([Matrix.identity(ring, offset), Q]) if offset else Q
        P = P @ full
        m = spec.size
        offset += m
        if offset == n:
            break
        B = inverse(Q) @ current @ Q
        current = B.submatrix(m, B.nrows, m, B.nrows)
    order = sorted(range(len(blocks)), key=lambda i: -blocks[i].size)
    if order != list(range(len(blocks))):
        starts = []
        s = 0
        for b in blocks:
            starts.append(s)
            s += b.size
        perm_cols = [starts[i] + t for i in order for t in range(blocks[i].size)]
        P = Matrix.from_columns(ring, [P.column(c) for c in perm_cols])
        blocks = [blocks[i] for i in order]
    T = block_diag([companion(b, ring) for b in blocks])
    witness = SimilarityWitness(P, T)
    assert inverse(P) @ A @ P == T
    return RationalCanonicalForm(tuple(blocks), witness)


def divisibility_chain_holds(form: RationalCanonicalForm, ring) -> bool:
    """Each block polynomial divides the one before it."""
    polys = form.polynomials(ring)
    for big, small in zip(polys, polys[1:]):
        if not poly_divmod(big, small, "left")[1].is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# flag bases for nilpotent and unipotent matrices
# ---------------------------------------------------------------------------


def _kernel_flag(N: Matrix):
    """Bases of ``ker N^k`` for ``k = 0..L`` where ``N^L = 0``."""
    n = N.nrows
    kernels = [[]]
    power = N
    while True:
        kernels.append(right_kernel(power))
        if len(kernels[-1]) == n:
            return kernels
        if len(kernels) > n + 1:
            raise NotNilpotent("matrix is not nilpotent")
        power = power @ N


def nilpotent_strict_upper(N: Matrix) -> SimilarityWitness:
    """Basis through the flag ``ker N ⊂ ker N^2 ⊂ ...`` makes ``N`` strictly upper triangular."""
    if not N.is_square():
        raise NotSquare("non-square matrix")
    if not is_nilpotent(N):
        raise NotNilpotent("matrix is not nilpotent")
    ring = N.ring
    basis = []
    for K in _kernel_flag(N)[1:]:
        for v in K:
            if column_rank(ring, basis + [v]) > len(basis):
                basis.append(v)
    P = Matrix.from_columns(ring, basis)
    return SimilarityWitness.of(N, P)


def unipotent_jordan_ones(U: Matrix):
    """Block sizes and a witness ``P^-1 U P = J_m1(1) (+) ... (+) J_ms(1)``, sizes descending."""
    if not U.is_square():
        raise NotSquare("non-square matrix")
    ring = U.ring
    n = U.nrows
    N = U - Matrix.identity(ring, n)
    if not is_nilpotent(N):
        raise NotUnipotent("U - I is not nilpotent")
    if N.is_zero():
        return (1,) * n, SimilarityWitness(Matrix.identity(ring, n), U)
    kernels = _kernel_flag(N)
    L = len(kernels) - 1
    chains = []
    for j in range(L, 0, -1):
        span = list(kernels[j - 1])
        for head, length in chains:
            v = head
            for _ in range(length - j):
                v = N.apply(v)
            span.append(v)
        base = column_rank(ring, span)
        for u in kernels[j]:
            if column_rank(ring, span + [u]) > base:
                span.append(u)
                base += 1
                chains.append((u, j))
    columns = []
    sizes = []
    for head, length in chains:
        chain = [head]
        for _ in range(length - 1):
            chain.append(N.apply(chain[-1]))
        columns.extend(reversed(chain))
        sizes.append(length)
    P = Matrix.from_columns(ring, columns)
    T = block_diag([jordan_like(JordanLikeBlock(m, 1, 1), ring) for m in sizes])
    assert inverse(P) @ U @ P == T
    return tuple(sizes), SimilarityWitness(P, T)


def kernel_signature(N: Matrix):
    """``dim ker N^k`` for ``k = 1..n``."""
    dims = []
    power = N
    for _ in range(N.nrows):
        dims.append(len(right_kernel(power)))
        power = power @ N
    return tuple(dims)


# ---------------------------------------------------------------------------
# moving the diagonal
# ---------------------------------------------------------------------------


def _transvection(ring, n, i, j, lam):
    """``I + e_i lam e_j^T`` and its inverse."""
    z, o = ring.zero, ring.one
    S = [[o if r == c else z for c in range(n)] for r in range(n)]
    Sinv = [row[:] for row in S]
    S[i][j] = lam
    Sinv[i][j] = -lam
    return (Matrix._raw(ring, tuple(map(tuple, S))), Matrix._raw(ring, tuple(map(tuple, Sinv))))


def _push_diagonal(B: Matrix):
    """Zero ``T[i][i]`` for ``i < n-1`` by transvections; returns ``P`` or ``None`` when stuck.

    Conjugating by ``I + e_i lam e_j^T`` sends ``d_i -> d_i - lam b_ji`` and
    ``d_j -> d_j + b_ji lam``, so ``lam = d_i b_ji^-1`` clears ``d_i`` and hands
    a conjugate of it to ``d_j``.
    """
    ring = B.ring
    n = B.nrows
    P = Matrix.identity(ring, n)
    for i in range(n - 1):
        d = B[i, i]
        if not d:
            continue
        j = next((j for j in range(i + 1, n) if B[j, i]), None)
        if j is not None:
            lam = d * ring.inv(B[j, i])
            S, Sinv = _transvection(ring, n, i, j, lam)
        else:
            j = next((j for j in range(i + 1, n) if B[i, j]), None)
            if j is None:
                return None
            lam = -(ring.inv(B[i, j]) * d)
            S, Sinv = _transvection(ring, n, j, i, lam)
        B = Sinv @ B @ S
        P = P @ S
        assert not B[i, i]
    return P


def _random_invertible(ring, n, rng):
    while True:
        R = Matrix(ring, [[ring.random(rng, 2) for _ in range(n)] for _ in range(n)])
        try:
            inverse(R)
        except Exception:
            continue
        return R


def concentrate_diagonal(A: Matrix, seed: int = 0, attempts: int = 64) -> SimilarityWitness:
    """Similar ``T`` whose diagonal is zero except possibly the last entry.

    The last entry then carries the trace modulo additive commutators.
    """
    if not A.is_square():
        raise NotSquare("non-square matrix")
    ring = A.ring
    n = A.nrows
    if n == 1:
        return SimilarityWitness(Matrix.identity(ring, 1), A)
    if is_central_matrix(A):
        raise CentralInput("central matrices keep their diagonal under similarity")
    rng = random.Random(seed)
    R = Matrix.identity(ring, n)
    for _ in range(attempts):
        B = inverse(R) @ A @ R
        P = _push_diagonal(B)
        if P is not None:
            return SimilarityWitness.of(A, R @ P)
        R = _random_invertible(ring, n, rng)
    raise NoWitnessFound("diagonal could not be concentrated")


def zero_diagonal_similarity(A: Matrix, seed: int = 0) -> SimilarityWitness:
    """Similar matrix with every diagonal entry zero.

    Always succeeds over fields.  Over a noncommutative ring the last entry can
    stay nonzero; a bounded retry is made and then ``NoWitnessFound`` is raised.
    """
    if not A.is_square():
        raise NotSquare("non-square matrix")
    ring = A.ring
    if is_central_matrix(A):
        raise CentralInput("central traceless matrices have no zero-diagonal form")
    if ring.residue(A.trace()):
        raise NotTraceless("trace is not a sum of commutators")
    if ring.commutative and A.trace():
        raise NotTraceless("matrix is not traceless")
    n = A.nrows
    for attempt in range(8):
        w = concentrate_diagonal(A, seed + attempt)
        if not w.T[n - 1, n - 1]:
            return w
        if ring.commutative:
            break
    raise NoWitnessFound("no zero-diagonal similar matrix found")
