"""Multilinear polynomials, commutator decompositions and small image searches."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .canonical import concentrate_diagonal
from .elimination import inverse, solve_center_linear
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    FieldComponent,
    NotSquare,
    SearchExhausted,
    SmallCenter,
)
from .matrix import Matrix, is_central_matrix, product, repeated_sum
from .scalars import FloatQuaternion, enumerate_small_quaternions, quat_complexify, ring_of
from .semitraceless import factor_semitraceless


# ---------------------------------------------------------------------------
# multilinear polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultilinearPolynomial:
    """``sum_sigma lam_sigma x_sigma(0) ... x_sigma(m-1)``; keys are 0-based permutations."""

    arity: int
    coeffs: tuple

    def __init__(self, arity: int, coeffs):
        items = dict(coeffs)
        for perm in items:
            if sorted(perm) != list(range(arity)):
                raise ValueError(f"{perm} is not a permutation of range({arity})")
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "coeffs", tuple(sorted(items.items())))

    @classmethod
    def variable(cls):
        return cls(1, {(0,): 1})

    @classmethod
    def commutator(cls):
        return cls(2, {(0, 1): 1, (1, 0): -1})

    @classmethod
    def generalized_commutator(cls):
        return cls(3, {(0, 1, 2): 1, (2, 1, 0): -1})

    def is_nonzero(self):
        return any(c for _, c in self.coeffs)


def eval_multilinear(f: MultilinearPolynomial, xs: Sequence):
    """Evaluate on matrices or on scalars; coefficients act from the left."""
    if len(xs) != f.arity:
        raise ArityMismatch(f"expected {f.arity} arguments, got {len(xs)}")
    first = xs[0]
    if isinstance(first, Matrix):
        ring, n = first.ring, first.nrows
        total = Matrix.zeros(ring, n)
        for perm, lam in f.coeffs:
            lam = ring.coerce(lam)
            if lam:
                total = total + product([xs[i] for i in perm], ring, n).scale_left(lam)
        return total
    ring = ring_of(first)
    total = ring.zero
    for perm, lam in f.coeffs:
        term = ring.coerce(lam)
        for i in perm:
            term = term * xs[i]
        total = total + term
    return total


# ---------------------------------------------------------------------------
# additive and generalized commutators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommutatorWitness:
    X: Matrix
    Y: Matrix

    @property
    def value(self):
        return self.X @ self.Y - self.Y @ self.X

    def verify(self, target) -> bool:
        return self.value == target


@dataclass(frozen=True)
class GeneralizedCommutatorWitness:
    a: Matrix
    b: Matrix
    c: Matrix

    @property
    def value(self):
        return self.a @ self.b @ self.c - self.c @ self.b @ self.a

    def verify(self, target) -> bool:
        return self.value == target


def _central_points(ring, n):
    if ring.characteristic and ring.characteristic < n:
        raise SmallCenter(f"characteristic {ring.characteristic} leaves fewer than {n} central elements")
    return [repeated_sum(ring, i) for i in range(n)]


def _diagonal_ready(T: Matrix) -> bool:
    ring = T.ring
    if ring.commutative:
        return not any(T.diagonal_entries())
    return not any(ring.residue(x) for x in T.diagonal_entries())


def commutator_witness(T: Matrix, seed: int = 0) -> CommutatorWitness:
    """``X Y - Y X = T`` for ``T`` whose diagonal entries are commutators.

    ``X`` is diagonal with pairwise distinct central parts ``0, 1, ..., n-1``;
    a diagonal entry ``t_ii`` is realised as ``u y - y u`` inside ``X`` and
    ``Y``, and each off-diagonal ``Y_ij`` solves ``x_i Y_ij - Y_ij x_j = t_ij``.
    A traceless ``T`` with some other diagonal is first moved by similarity.
    """
    if not T.is_square():
        raise NotSquare("non-square matrix")
    ring = T.ring
    n = T.nrows
    z = ring.zero
    if T.is_zero():
        Z = Matrix.zeros(ring, n)
        return CommutatorWitness(Z, Z)
    d = _central_points(ring, n)
    if not _diagonal_ready(T):
        w = concentrate_diagonal(T, seed)
        inner = commutator_witness(w.T, seed) if _diagonal_ready(w.T) else None
        if inner is None:
            raise ValueError("trace is not a sum of commutators")
        P, Pinv = w.P, inverse(w.P)
        return CommutatorWitness(P @ inner.X @ Pinv, P @ inner.Y @ Pinv)
    xs, ydiag = [], []
    for i in range(n):
        u, y = ring.commutator_preimage(T[i, i])
        xs.append(d[i] + u)
        ydiag.append(y)
    Y = [[z] * n for _ in range(n)]
    for i in range(n):
        Y[i][i] = ydiag[i]
        for j in range(n):
            if i == j or not T[i, j]:
                continue
            xi, xj = xs[i], xs[j]
            if ring.is_central(xi) and ring.is_central(xj):
                Y[i][j] = ring.inv(xi - xj) * T[i, j]
                continue
            sol = solve_center_linear(ring, 1, lambda v: [xi * v[0] - v[0] * xj], [T[i, j]])
            if sol is None:
                raise SmallCenter("Sylvester equation has no solution")
            Y[i][j] = sol[0]
    wit = CommutatorWitness(Matrix.diagonal(ring, xs), Matrix(ring, Y))
    assert wit.value == T
    return wit


def _directly_commutator(A: Matrix) -> bool:
    ring = A.ring
    t = A.trace()
    if ring.commutative:
        return not t and (A.is_zero() or not is_central_matrix(A))
    return not ring.residue(t) and (A.is_zero() or not is_central_matrix(A))


def factor_commutators(A: Matrix, seed: int = 0) -> list:
    """At most four commutators whose values multiply to ``A``.

    Matrices whose trace is a sum of commutators need one.  Otherwise each
    semi-traceless factor ``P T P^-1`` gives the commutator of ``T``
    conjugated back by ``P``.
    """
    if not A.is_square():
        raise NotSquare("non-square matrix")
    _central_points(A.ring, A.nrows)
    if _directly_commutator(A):
        return [commutator_witness(A, seed)]
    out = []
    for f in factor_semitraceless(A, seed).factors:
        P, T = f.witness.P, f.witness.T
        w = commutator_witness(T, seed)
        Pinv = inverse(P)
        out.append(CommutatorWitness(P @ w.X @ Pinv, P @ w.Y @ Pinv))
    return out


def factor_generalized_commutators(A: Matrix, seed: int = 0) -> list:
    """Each commutator ``XY - YX`` becomes the triple ``(X, Y, I)``."""
    ring, n = A.ring, A.nrows
    if A.is_zero():
        Z = Matrix.zeros(ring, n)
        return [GeneralizedCommutatorWitness(Z, Z, Z)]
    I = Matrix.identity(ring, n)
    return [GeneralizedCommutatorWitness(w.X, w.Y, I) for w in factor_commutators(A, seed)]


def commutator_product(witnesses) -> Matrix:
    vals = [w.value for w in witnesses]
    return product(vals)


# ---------------------------------------------------------------------------
# semisimple algebras given by their simple components
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WedderburnData:
    """Components ``M_{n_i}(D_i)`` as ``(n_i, ring)`` pairs."""

    components: tuple

    def __init__(self, components):
        comps = tuple((int(n), ring) for n, ring in components)
        for n, ring in comps:
            if n < 1:
                raise ValueError("component size must be positive")
            if n == 1 and ring.commutative:
                raise FieldComponent(f"component M_1({ring.tag}) is a field")
        object.__setattr__(self, "components", comps)


def _scalar_generalized_commutator(q, ring, height=8, seed=0, cap=4096):
    """``a b c - c b a = q`` with ``a, c`` of bounded height and ``b`` solved for."""
    if not q:
        return ring.zero, ring.zero, ring.zero
    rng = random.Random(seed)
    for h in range(1, height + 1):
        pool = [x for x in enumerate_small_quaternions(h) if x]
        rng.shuffle(pool)
        for a, c in itertools.islice(itertools.product(pool, pool), cap):
            sol = solve_center_linear(ring, 1, lambda b: [a * b[0] * c - c * b[0] * a], [q])
            if sol is not None:
                return a, sol[0], c
    raise SearchExhausted("no generalized commutator found for the scalar component")


def semisimple_decompose(data: WedderburnData, element: Sequence, seed: int = 0) -> list:
    """Per component: generalized commutators whose values multiply to the component."""
    if len(element) != len(data.components):
        raise ArityMismatch("element has the wrong number of components")
    out = []
    for (n, ring), A in zip(data.components, element):
        if not isinstance(A, Matrix):
            A = Matrix(ring, [[A]])
        if A.shape != (n, n) or A.ring != ring:
            raise ValueError(f"component does not live in M_{n}({ring.tag})")
        if n == 1:
            a, b, c = _scalar_generalized_commutator(A[0, 0], ring, seed=seed)
            wrap = lambda x: Matrix(ring, [[x]])  # noqa: E731
            out.append([GeneralizedCommutatorWitness(wrap(a), wrap(b), wrap(c))])
        else:
            out.append(factor_generalized_commutators(A, seed))
    return out


# ---------------------------------------------------------------------------
# real quaternions as products of two pure quaternions
# ---------------------------------------------------------------------------


def quaternion_pure_product(alpha: FloatQuaternion):
    """Pure ``q1, q2`` with ``q1 q2 = alpha``.

    With ``p^-1 alpha p = x + s i`` and ``x + s i = j (-x j + s k)``, take
    ``q1 = p j p^-1`` and ``q2 = p (-x j + s k) p^-1``.
    """
    p, x, s = quat_complexify(alpha)
    pinv = p.inverse()
    q1 = p * FloatQuaternion(0.0, 0.0, 1.0, 0.0) * pinv
    q2 = p * FloatQuaternion(0.0, 0.0, -x, s) * pinv
    return q1, q2


# ---------------------------------------------------------------------------
# exhaustive image search over small finite rings
# ---------------------------------------------------------------------------


DEFAULT_BUDGET = 1 << 20


def _all_matrices(ring, n):
    for vals in itertools.product(ring.elements(), repeat=n * n):
        yield Matrix._raw(ring, tuple(tuple(vals[r * n:(r + 1) * n]) for r in range(n)))


def _check_budget(f, ring, n, budget):
    if ring.size is None:
        raise BudgetExceeded(f"ring {ring.tag} is infinite")
    total = ring.size ** (n * n * f.arity)
    if total > budget:
        raise BudgetExceeded(f"{total} tuples exceeds the budget of {budget}")


def image_oracle(f: MultilinearPolynomial, ring, n: int, target: Matrix,
                 budget: int = DEFAULT_BUDGET) -> Optional[tuple]:
    """A tuple with ``f(tuple) = target`` or ``None``; ``None`` is a proof at this size."""
    _check_budget(f, ring, n, budget)
    mats = list(_all_matrices(ring, n))
    for xs in itertools.product(mats, repeat=f.arity):
        if eval_multilinear(f, xs) == target:
            return xs
    return None


def image_set(f: MultilinearPolynomial, ring, n: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Every value of ``f`` on ``M_n(ring)`` with one witness each."""
    _check_budget(f, ring, n, budget)
    mats = list(_all_matrices(ring, n))
    found = {}
    for xs in itertools.product(mats, repeat=f.arity):
        v = eval_multilinear(f, xs)
        if v not in found:
            found[v] = xs
    return found
