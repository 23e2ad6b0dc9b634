"""Products of matrices that are similar to traceless ones, each carrying its similarity witness."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .bounds import BOUNDS
from .canonical import (
    SimilarityWitness,
    nilpotent_strict_upper,
    unipotent_jordan_ones,
    rcf,
)
from .elimination import (
    invertible_nilpotent_split,
    inverse,
    rank,
    solve_center_linear,
)
from .errors import DimensionMismatch, NoWitnessFound, NotOverSubfield, NotSquare
from .matrix import (
    Matrix,
    Permutation,
    block_diag,
    is_nilpotent,
    permutation_matrix,
    product,
)
from .scalars import HQ, QQ, QQI, GaussianRational, Quaternion
from .traceless import factor_companion, factor_diagonal, factor_field


@dataclass(frozen=True)
class SemiTracelessFactor:
    """``factor = P T P^-1`` with ``trace(T) = 0``."""

    factor: Matrix
    witness: SimilarityWitness

    def verify(self) -> bool:
        P, T = self.witness.P, self.witness.T
        if T.trace():
            return False
        try:
            Pinv = inverse(P)
        except Exception:
            return False
        return P @ T @ Pinv == self.factor


@dataclass(frozen=True)
class SemiFactorization:
    source: Matrix
    factors: tuple
    strategy: str
    bound: int
    padded_size: Optional[int] = None
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def count(self):
        return len(self.factors)

    def product(self):
        n = self.source.nrows
        return product([f.factor for f in self.factors], self.source.ring, n)

    def verify(self) -> bool:
        if not self.factors or len(self.factors) > self.bound:
            return False
        if not all(f.verify() for f in self.factors):
            return False
        return self.product() == self.source


def _conjugated(P: Matrix, Ts) -> list:
    Pinv = inverse(P)
    return [SemiTracelessFactor(P @ T @ Pinv, SimilarityWitness(P, T)) for T in Ts]


def _traceless_witness(T: Matrix) -> SemiTracelessFactor:
    n = T.nrows
    return SemiTracelessFactor(T, SimilarityWitness(Matrix.identity(T.ring, n), T))


# ---------------------------------------------------------------------------
# single factors
# ---------------------------------------------------------------------------


def _trace_fixing_transvection(B: Matrix):
    """Transvection conjugate of ``B`` with trace zero, if one exists.

    Conjugating by ``I + e_i lam e_j^T`` changes the trace by ``b_ji lam - lam b_ji``.
    """
    ring = B.ring
    n = B.nrows
    t = B.trace()
    if not t:
        return Matrix.identity(ring, n)
    for i in range(n):
        for j in range(n):
            b = B[j, i]
            if i == j or ring.is_central(b):
                continue
            sol = solve_center_linear(ring, 1, lambda z: [b * z[0] - z[0] * b], [-t])
            if sol is None:
                continue
            S = Matrix.identity(ring, n).replace(i, j, sol[0])
            return S
    return None


def certify_semitraceless(A: Matrix, seed: int = 0, attempts: int = 32) -> SemiTracelessFactor:
    """A witness ``P^-1 A P = T`` with ``trace(T) = 0``.

    Traceless input gives ``(I, A)``; nilpotent input is put in nilpotent
    Jordan form through chains of ``A + I``.  Otherwise random conjugates are adjusted by one transvection;
    failure is not a proof that no witness exists.
    """
    if not A.is_square():
        raise NotSquare("non-square matrix")
    ring = A.ring
    n = A.nrows
    if not A.trace():
        return _traceless_witness(A)
    if is_nilpotent(A):
        I = Matrix.identity(ring, n)
        _, w = unipotent_jordan_ones(A + I)
        return SemiTracelessFactor(A, SimilarityWitness(w.P, w.T - I))
    if ring.commutative:
        raise NoWitnessFound("over a commutative ring the trace is a similarity invariant")
    if ring.residue(A.trace()):
        raise NoWitnessFound("trace is not a sum of commutators")
    rng = random.Random(seed)
    R = Matrix.identity(ring, n)
    for _ in range(attempts):
        B = inverse(R) @ A @ R
        S = _trace_fixing_transvection(B)
        if S is not None:
            return SemiTracelessFactor(A, SimilarityWitness.of(A, R @ S))
        while True:
            R = Matrix(ring, [[ring.random(rng, 2) for _ in range(n)] for _ in range(n)])
            if rank(R) == n:
                break
    raise NoWitnessFound("bounded witness search exhausted")


# ---------------------------------------------------------------------------
# companion-block pairing
# ---------------------------------------------------------------------------


def _block_pairing(form, ring):
    """Traceless ``X, Y`` with ``X Y`` equal to the canonical form, or ``None`` if there is
    exactly one 1x1 block."""
    scalars = [b.coefficients[0] for b in form.blocks if b.size == 1]
    if len(scalars) == 1:
        return None
    xs, ys = [], []
    for b in form.blocks:
        if b.size > 1:
            f = factor_companion(b, ring)
            xs.append(f.factors[0])
            ys.append(f.factors[1])
    if scalars:
        f = factor_diagonal(scalars, ring)
        xs.append(f.factors[0])
        ys.append(f.factors[1])
    return block_diag(xs), block_diag(ys)


def _pair_factors(A: Matrix, seed: int):
    form = rcf(A, seed)
    pair = _block_pairing(form, A.ring)
    if pair is None:
        return None
    return _conjugated(form.witness.P, pair)


def _twists(ring, n, rng, cap):
    """Traceless invertible monomials: the n-cycle, then seeded diagonal twists of it."""
    cycle = permutation_matrix(Permutation.cycle(n, 1), ring)
    yield cycle
    for _ in range(cap):
        scales = [ring.random(rng, 3) for _ in range(n)]
        if all(scales):
            yield cycle @ Matrix.diagonal(ring, scales)


def _invertible_factors(G: Matrix, seed: int, cap: int = 16, allow_double: bool = True):
    """At most three factors for invertible ``G``: pairing, or ``(G E^-1) E`` for a twist ``E``."""
    got = _pair_factors(G, seed)
    if got is not None:
        return got, "pairing"
    ring = G.ring
    rng = random.Random(seed)
    for E in _twists(ring, G.nrows, rng, cap):
        got = _pair_factors(G @ inverse(E), seed)
        if got is not None:
            return got + [_traceless_witness(E)], "twist"
    if not allow_double:
        raise NoWitnessFound("no twist made the canonical form pairable")
    twice = list(_twists(ring, G.nrows, rng, cap))
    for E1 in twice:
        for E2 in twice[:4]:
            got = _pair_factors(G @ inverse(E2) @ inverse(E1), seed)
            if got is not None:
                return got + [_traceless_witness(E1), _traceless_witness(E2)], "double-twist"
    raise NoWitnessFound("no twist made the canonical form pairable")


def factor_semitraceless(A: Matrix, seed: int = 0) -> SemiFactorization:
    """At most four factors, each similar to a traceless matrix.

    Invertible input uses companion-block pairing (two factors), or a twist
    by a traceless monomial (three).  Singular input is split as ``G N`` with
    ``N`` nilpotent, which is similar to a strictly upper triangular matrix.
    """
    if not A.is_square():
        raise NotSquare("non-square matrix")
    n = A.nrows
    if n < 2:
        raise DimensionMismatch("needs n >= 2")
    if rank(A) == n:
        factors, how = _invertible_factors(A, seed)
        return SemiFactorization(A, tuple(factors), "semitraceless", BOUNDS["semitraceless"],
                                 notes={"path": how})
    split = invertible_nilpotent_split(A)
    factors, how = _invertible_factors(split.G, seed, allow_double=False)
    nil = SemiTracelessFactor(split.N, nilpotent_strict_upper(split.N))
    return SemiFactorization(A, tuple(factors) + (nil,), "semitraceless", BOUNDS["semitraceless"],
                             notes={"path": "split-" + how})


# ---------------------------------------------------------------------------
# finitary matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinitaryMatrix:
    """The infinite matrix ``[[core, 0], [0, 0]]``; ``core`` is ``k x k``."""

    core: Matrix

    @classmethod
    def from_core(cls, core: Matrix, trim: bool = True) -> FinitaryMatrix:
        if not core.is_square():
            raise NotSquare("finitary core must be square")
        if not trim:
            return cls(core)
        k = 0
        for i in range(core.nrows):
            for j in range(core.ncols):
                if core[i, j]:
                    k = max(k, i + 1, j + 1)
        k = max(k, 1)
        return cls(core.submatrix(0, k, 0, k))

    @property
    def support(self):
        return self.core.nrows

    @property
    def ring(self):
        return self.core.ring

    def padded(self, m: int) -> Matrix:
        """The leading ``m x m`` block, ``m >= support``."""
        k = self.support
        if m < k:
            raise DimensionMismatch("cannot truncate below the support")
        if m == k:
            return self.core
        return block_diag([self.core, Matrix.zeros(self.ring, m - k)])


def finitary_factor(A: FinitaryMatrix, seed: int = 0) -> SemiFactorization:
    """Two factors of a finitary matrix, padding the core by one zero row and column when needed.

    No 1x1 companion block, or at least two, pairs off directly.  A single
    1x1 block ``(c)`` is paired with an appended zero as ``diag(c, 0)``.
    """
    core = A.core
    ring = core.ring
    k = core.nrows
    form = rcf(core, seed)
    ones = form.count_of_size(1)
    pair = _block_pairing(form, ring)
    if pair is not None:
        factors = _conjugated(form.witness.P, pair)
        case = 1 if ones == 0 else 3
        return SemiFactorization(core, tuple(factors), "finitary", BOUNDS["finitary"], padded_size=k,
                                 notes={"case": case})
    big = [b for b in form.blocks if b.size > 1]
    c = [b for b in form.blocks if b.size == 1][0].coefficients[0]
    xs, ys = [], []
    for b in big:
        f = factor_companion(b, ring)
        xs.append(f.factors[0])
        ys.append(f.factors[1])
    f = factor_diagonal([c, ring.zero], ring)
    xs.append(f.factors[0])
    ys.append(f.factors[1])
    P = block_diag([form.witness.P, Matrix.identity(ring, 1)])
    factors = _conjugated(P, [block_diag(xs), block_diag(ys)])
    source = A.padded(k + 1)
    return SemiFactorization(source, tuple(factors), "finitary", BOUNDS["finitary"], padded_size=k + 1,
                             notes={"case": 2})


# ---------------------------------------------------------------------------
# matrices similar to one over a commutative subfield
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubfieldEmbedding:
    """A commutative subfield ``K`` of the ring: ``restrict`` maps into ``K`` or raises."""

    name: str
    subfield: object
    ring: object
    restrict: Callable
    include: Callable


def _restrict_gaussian(q):
    if q.j or q.k:
        raise NotOverSubfield(f"{q} is not in Q(i)")
    return GaussianRational(q.r, q.i)


def _restrict_rational(q):
    if q.i or q.j or q.k:
        raise NotOverSubfield(f"{q} is not rational")
    return q.r


GAUSSIAN_IN_QUATERNIONS = SubfieldEmbedding(
    "Q(i) in HQ", QQI, HQ, _restrict_gaussian, lambda g: Quaternion(g.re, g.im, 0, 0))
RATIONAL_IN_QUATERNIONS = SubfieldEmbedding(
    "Q in HQ", QQ, HQ, _restrict_rational, lambda x: Quaternion(x, 0, 0, 0))


def factor_semitraceless_subfield(A: Matrix, Q: Matrix, embedding: SubfieldEmbedding,
                                  seed: int = 0) -> SemiFactorization:
    """Factor ``Q^-1 A Q`` over the subfield and conjugate the factors back by ``Q``."""
    if not A.is_square():
        raise NotSquare("non-square matrix")
    B = inverse(Q) @ A @ Q
    sub = Matrix(embedding.subfield, [[embedding.restrict(x) for x in row] for row in B.rows])
    fac = factor_field(sub, seed)
    lifted = [Matrix(A.ring, [[embedding.include(x) for x in row] for row in F.rows])
              for F in fac.factors]
    factors = _conjugated(Q, lifted)
    return SemiFactorization(A, tuple(factors), "subfield", BOUNDS["subfield"],
                             notes={"field_path": fac.notes.get("path"), "embedding": embedding.name})
