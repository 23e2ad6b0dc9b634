"""Products of traceless matrices: explicit small formulas up to the general pipeline."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .bounds import BOUNDS
from .canonical import rcf
from .elimination import bruhat, inverse, rank
from .errors import BadPivot, DimensionMismatch, NotSquare, NotUnitriangular
from .matrix import (
    CompanionSpec,
    Matrix,
    Permutation,
    block_diag,
    companion,
    embed,
    from_ints,
    is_diagonal,
    is_unitriangular,
    permutation_matrix,
    product,
    repeated_sum,
)



@dataclass(frozen=True)
class TracelessFactorization:
    source: Matrix
    factors: tuple
    strategy: str
    bound: int
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def count(self):
        return len(self.factors)

    def product(self):
        return product(self.factors, self.source.ring, self.source.nrows)

    def verify(self) -> bool:
        ring = self.source.ring
        if not self.factors or len(self.factors) > self.bound:
            return False
        for F in self.factors:
            if F.ring != ring or F.shape != self.source.shape or F.trace():
                return False
        return self.product() == self.source


def _fact(source, factors, strategy, bound=None, **notes):
    return TracelessFactorization(source, tuple(factors), strategy,
                                  BOUNDS[strategy] if bound is None else bound, notes)


def _diag(ring, *entries):
    return Matrix.diagonal(ring, entries)


def _signs(ring, n=2):
    """``diag(1, -1)``: traceless in every characteristic."""
    return Matrix.diagonal(ring, [ring.one, -ring.one] + [ring.zero] * (n - 2))


# ---------------------------------------------------------------------------
# diagonal matrices
# ---------------------------------------------------------------------------


def factor_diag_pair(a1, a2, ring) -> TracelessFactorization:
    a1, a2 = ring.coerce(a1), ring.coerce(a2)
    z, o = ring.zero, ring.one
    X = Matrix._raw(ring, ((z, o), (o, z)))
    Y = Matrix._raw(ring, ((z, a2), (a1, z)))
    return _fact(_diag(ring, a1, a2), [X, Y], "pair")


def factor_diag_triple(a1, a2, a3, ring) -> TracelessFactorization:
    a1, a2, a3 = ring.coerce(a1), ring.coerce(a2), ring.coerce(a3)
    if not a1 or not a3:
        raise BadPivot("first and last entries must be nonzero")
    z, o = ring.zero, ring.one
    X = Matrix._raw(ring, ((z, a3, z), (-a1, a3, z), (z, z, -a3)))
    Y = Matrix._raw(ring, (
        (o, -(ring.inv(a1) * a2), z),
        (ring.inv(a3) * a1, z, z),
        (z, z, -o),
    ))
    return _fact(_diag(ring, a1, a2, a3), [X, Y], "triple")


def _combine(n, ring, pieces):
    """Sum of factor pairs supported on disjoint index sets."""
    X = Matrix.zeros(ring, n)
    Y = Matrix.zeros(ring, n)
    for indices, fac in pieces:
        X = X + embed(fac.factors[0], n, indices)
        Y = Y + embed(fac.factors[1], n, indices)
    return X, Y


def factor_diagonal(entries: Sequence, ring) -> TracelessFactorization:
    """Two traceless factors of ``diag(entries)``.

    Indices are paired off; an odd size uses one triple whose outer entries
    are nonzero.  With at most one nonzero entry ``d`` at ``k`` the factors
    are ``d E_km`` and ``E_mk``.
    """
    d = [ring.coerce(x) for x in entries]
    n = len(d)
    if n < 2:
        raise DimensionMismatch("diagonal factorization needs n >= 2")
    source = Matrix.diagonal(ring, d)
    nonzero = [i for i, x in enumerate(d) if x]
    if n % 2:
        if len(nonzero) <= 1:
            if not nonzero:
                Z = Matrix.zeros(ring, n)
                return _fact(source, [Z, Z], "diagonal", case="zero")
            k = nonzero[0]
            m = 1 if k == 0 else 0
            X = Matrix.unit(ring, n, k, m, d[k])
            Y = Matrix.unit(ring, n, m, k)
            return _fact(source, [X, Y], "diagonal", case="single")
        p, q = nonzero[0], nonzero[1]
        m = next(i for i in range(n) if i not in (p, q))
        triple = (p, m, q)
        rest = [i for i in range(n) if i not in triple]
        pieces = [(triple, factor_diag_triple(d[p], d[m], d[q], ring))]
    else:
        rest = list(range(n))
        pieces = []
    for a, b in zip(rest[::2], rest[1::2]):
        pieces.append(((a, b), factor_diag_pair(d[a], d[b], ring)))
    X, Y = _combine(n, ring, pieces)
    return _fact(source, [X, Y], "diagonal", case="blocks")


# ---------------------------------------------------------------------------
# unitriangular and permutation matrices
# ---------------------------------------------------------------------------


def factor_unitriangular(A: Matrix, orientation: str = "upper") -> TracelessFactorization:
    """At most four traceless factors of a unitriangular matrix.

    Upper, ``n >= 3``: ``A = B C`` with ``B = I + a_1n E_1n`` and ``C`` equal to
    ``A`` with the corner cleared; ``B = (B P) P^-1`` for the forward cycle ``P``
    and ``C = (C Q) Q^-1`` for the reverse cycle ``Q``.  Lower mirrors this.
    """
    if not A.is_square():
        raise NotSquare("non-square matrix")
    if not is_unitriangular(A, orientation):
        raise NotUnitriangular(f"matrix is not {orientation} unitriangular")
    ring = A.ring
    n = A.nrows
    if n < 2:
        raise DimensionMismatch("needs n >= 2")
    if n == 2:
        S = _signs(ring)
        return _fact(A, [S, S @ A], "unitriangular", case="n2")
    forward = permutation_matrix(Permutation.cycle(n, 1), ring)
    backward = permutation_matrix(Permutation.cycle(n, -1), ring)
    if orientation == "upper":
        corner = A[0, n - 1]
        C = A.replace(0, n - 1, ring.zero)
        tail = [C @ backward, forward]
        if not corner:
            return _fact(A, tail, "unitriangular", case="corner-free")
        B = Matrix.identity(ring, n).replace(0, n - 1, corner)
        return _fact(A, [B @ forward, backward] + tail, "unitriangular", case="split")
    corner = A[n - 1, 0]
    C = A.replace(n - 1, 0, ring.zero)
    head = [C @ forward, backward]
    if not corner:
        return _fact(A, head, "unitriangular", case="corner-free")
    B = Matrix.identity(ring, n).replace(n - 1, 0, corner)
    return _fact(A, head + [B @ backward, forward], "unitriangular", case="split")


def _derangements(n):
    for p in itertools.permutations(range(n)):
        if all(p[i] != i for i in range(n)):
            yield Permutation(p)


@lru_cache(maxsize=None)
def _integer_permutation_pair(images: tuple):
    """Traceless integer ``X`` with entries in ``{-1, 0, 1}`` and ``det = +-1`` such that
    ``X^-1 P`` is traceless too; found by exhaustive search."""
    from .scalars import QQ

    n = len(images)
    P = permutation_matrix(Permutation(images), QQ)
    cells = [(i, j) for i in range(n) for j in range(n) if (i, j) != (n - 1, n - 1)]
    for values in itertools.product((0, 1, -1), repeat=len(cells)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in zip(cells, values):
            rows[i][j] = v
        rows[n - 1][n - 1] = -sum(rows[i][i] for i in range(n - 1))
        if abs(rows[n - 1][n - 1]) > 1:
            continue
        X = from_ints(QQ, rows)
        if rank(X) < n:
            continue
        Xinv = inverse(X)
        Y = Xinv @ P
        if Y.trace():
            continue
        if all(x.denominator == 1 for row in Xinv.rows for x in row):
            return tuple(map(tuple, rows)), tuple(tuple(int(x) for x in row) for row in Y.rows)
    raise AssertionError(f"no integer pair for {images}")


def factor_permutation(sigma: Permutation, ring) -> TracelessFactorization:
    """Two traceless factors of a permutation matrix, with entries in ``{0, 1, -1}``."""
    n = sigma.size
    if n < 2:
        raise DimensionMismatch("needs n >= 2")
    source = permutation_matrix(sigma, ring)
    if n == 2 and not sigma.fixed_points():
        o, z = ring.one, ring.zero
        S = _signs(ring)
        return _fact(source, [S, Matrix._raw(ring, ((z, o), (-o, z)))], "permutation", case="swap")
    for rho in _derangements(n):
        tau = rho.inverse().compose(sigma)
        if tau.fixed_point_free:
            return _fact(source, [permutation_matrix(rho, ring), permutation_matrix(tau, ring)],
                         "permutation", case="derangements")
    X, Y = _integer_permutation_pair(tuple(sigma(i) for i in range(n)))
    factors = [from_ints(ring, X), from_ints(ring, Y)]
    assert factors[0] @ factors[1] == source
    return _fact(source, factors, "permutation", case="integer-search")


# ---------------------------------------------------------------------------
# companion matrices
# ---------------------------------------------------------------------------


def factor_companion(spec: CompanionSpec, ring, ring_mode: bool = False) -> TracelessFactorization:
    """Two traceless factors of a companion matrix (four in ``ring_mode`` for ``n = 2``).

    ``ring_mode`` avoids inverses and so applies over any ring.
    """
    plain = spec.as_plain()
    a = [ring.coerce(x) for x in plain.coefficients]
    n = len(a)
    source = companion(plain, ring)
    if n < 2:
        raise DimensionMismatch("companion factorization needs n >= 2")
    z, o = ring.zero, ring.one
    if n == 2:
        a0, a1 = a
        if ring_mode:
            factors = [
                Matrix._raw(ring, ((z, o), (o, z))),
                Matrix._raw(ring, ((z, o), (a0, z))),
                Matrix._raw(ring, ((z, -o), (o, z))),
                Matrix._raw(ring, ((o, a1), (z, -o))),
            ]
            return _fact(source, factors, "companion-ring")
        if not a0:
            X = Matrix._raw(ring, ((z, z), (o, z)))
            Y = Matrix._raw(ring, ((o, a1), (z, -o)))
            return _fact(source, [X, Y], "companion", case="a0-zero")
        t = ring.inv(a0) * a1
        X = Matrix._raw(ring, ((a1, -a0), (o + a1 * t, -a1)))
        Y = Matrix._raw(ring, ((o, z), (t, -o)))
        return _fact(source, [X, Y], "companion", case="a0-unit")
    k = repeated_sum(ring, n - 2)
    B = [[z] * n for _ in range(n)]
    C = [[z] * n for _ in range(n)]
    B[0][n - 1] = -a[0]
    for i in range(1, n - 1):
        B[i][i] = o
        B[i][n - 1] = -a[i]
    B[n - 1][0] = o
    B[n - 1][1] = -o
    B[n - 1][n - 1] = -k
    C[0][0] = o
    C[0][n - 2] = o
    C[0][n - 1] = a[n - 1] - k
    for i in range(1, n - 1):
        C[i][i - 1] = o
    C[n - 1][n - 1] = -o
    factors = [Matrix(ring, B), Matrix(ring, C)]
    return _fact(source, factors, "companion", case="general")


# ---------------------------------------------------------------------------
# general square matrices
# ---------------------------------------------------------------------------


def factor_general(A: Matrix) -> TracelessFactorization:
    """At most twelve traceless factors from the Bruhat form ``A = L P H U``.

    Identity pieces contribute nothing; the diagonal piece is always kept.
    """
    if not A.is_square():
        raise NotSquare("non-square matrix")
    ring = A.ring
    n = A.nrows
    if n < 2:
        raise DimensionMismatch("needs n >= 2")
    if is_diagonal(A):
        fac = factor_diagonal(A.diagonal_entries(), ring)
        return _fact(A, fac.factors, "general", pieces={"H": 2})
    br = bruhat(A)
    I = Matrix.identity(ring, n)
    factors = []
    pieces = {}
    if br.L != I:
        part = factor_unitriangular(br.L, "lower").factors
        factors.extend(part)
        pieces["L"] = len(part)
    if not br.permutation == Permutation.identity(n):
        part = factor_permutation(br.permutation, ring).factors
        factors.extend(part)
        pieces["P"] = len(part)
    part = factor_diagonal(br.H.diagonal_entries(), ring).factors
    factors.extend(part)
    pieces["H"] = len(part)
    if br.U != I:
        part = factor_unitriangular(br.U, "upper").factors
        factors.extend(part)
        pieces["U"] = len(part)
    return _fact(A, factors, "general", pieces=pieces)


def factor_2x2(A: Matrix) -> TracelessFactorization:
    """At most six traceless factors of a 2x2 matrix, by the case of its first row and column."""
    if A.shape != (2, 2):
        raise DimensionMismatch("factor_2x2 expects a 2x2 matrix")
    ring = A.ring
    z, o = ring.zero, ring.one
    (a, b), (c, d) = A.rows
    S = _signs(ring)

    def m(*rows):
        return Matrix._raw(ring, rows)

    if a:
        ai = ring.inv(a)
        factors = [
            S, m((o, z), (-(c * ai), -o)),
            m((z, a), (o, z)), m((z, d - c * ai * b), (o, z)),
            S, m((o, ai * b), (z, -o)),
        ]
        case = "a"
    elif b:
        factors = [S, m((o, z), (-(d * ring.inv(b)), -o)), m((z, b), (c, z))]
        case = "b"
    elif c:
        factors = [m((z, z), (c, z)), S, m((o, ring.inv(c) * d), (z, -o))]
        case = "c"
    else:
        factors = [m((z, z), (o, z)), m((z, d), (o, z))]
        case = "d"
    return _fact(A, factors, "2x2", case=case)


# ---------------------------------------------------------------------------
# fields: aiming for two factors
# ---------------------------------------------------------------------------


def _conjugate_factors(factors, P):
    Pinv = inverse(P)
    return [P @ F @ Pinv for F in factors]


def _from_canonical_blocks(A: Matrix, seed: int):
    """Blockwise companion factorizations and pooled scalar blocks, or ``None``."""
    ring = A.ring
    form = rcf(A, seed)
    scalars = [b for b in form.blocks if b.size == 1]
    if len(scalars) == 1:
        return None
    xs, ys = [], []
    for b in form.blocks:
        if b.size > 1:
            f = factor_companion(b, ring)
            xs.append(f.factors[0])
            ys.append(f.factors[1])
    n_big = sum(b.size for b in form.blocks if b.size > 1)
    if scalars:
        f = factor_diagonal([b.coefficients[0] for b in scalars], ring)
        xs.append(f.factors[0])
        ys.append(f.factors[1])
    X = block_diag(xs)
    Y = block_diag(ys)
    # scalar blocks sit after the larger ones because blocks are sorted by size
    assert n_big + len(scalars) == A.nrows
    return _conjugate_factors([X, Y], form.witness.P)


def _nonzero_solutions(ring, coeffs, rng, tries=64):
    """Units ``e_i`` with ``sum coeffs_i e_i = 0``."""
    n = len(coeffs)
    units = [x for x in ring.elements() if x] if ring.size is not None else None
    if units is not None and len(units) ** n <= 4096:
        for e in itertools.product(units, repeat=n):
            if not sum((c * x for c, x in zip(coeffs, e)), ring.zero):
                return list(e)
        return None
    nz = [i for i, c in enumerate(coeffs) if c]
    if len(nz) == 1:
        return None
    for attempt in range(tries):
        e = [ring.one if attempt == 0 else ring.random(rng, 3) for _ in range(n)]
        if not all(e):
            continue
        k = nz[attempt % len(nz)] if nz else 0
        if not nz:
            return e
        rest = sum((coeffs[i] * e[i] for i in range(n) if i != k), ring.zero)
        ek = -(rest * ring.inv(coeffs[k]))
        if ek:
            e[k] = ek
            return e
    return None


def _monomial_split(A: Matrix, rng, limit=24):
    """``A = (A E P_tau) (P_sigma E^-1)`` with ``sigma`` a derangement and ``tau = sigma^-1``."""
    ring = A.ring
    n = A.nrows
    for count, sigma in enumerate(_derangements(n)):
        if count >= limit:
            break
        tau = sigma.inverse()
        coeffs = [ring.zero] * n
        for i in range(n):
            coeffs[tau(i)] = A[i, tau(i)]
        e = _nonzero_solutions(ring, coeffs, rng)
        if e is None:
            continue
        E = Matrix.diagonal(ring, e)
        Einv = Matrix.diagonal(ring, [ring.inv(x) for x in e])
        X = A @ E @ permutation_matrix(tau, ring)
        Y = permutation_matrix(sigma, ring) @ Einv
        return [X, Y]
    return None


@lru_cache(maxsize=None)
def _traceless_invertibles(ring, n):
    out = []
    elems = ring.elements()
    cells = n * n - 1
    for values in itertools.product(elems, repeat=cells):
        last = -sum((values[i * n + i] for i in range(n - 1)), ring.zero)
        Y = Matrix(ring, [list(values[r * n:(r + 1) * n]) if r < n - 1
                          else list(values[r * n:]) + [last] for r in range(n)])
        if rank(Y) == n:
            out.append((Y, inverse(Y)))
    return out


def _exhaustive_split(A: Matrix):
    ring = A.ring
    for Y, Yinv in _traceless_invertibles(ring, A.nrows):
        X = A @ Yinv
        if not X.trace():
            return [X, Y]
    return None


def _random_invertible(ring, n, rng):
    while True:
        R = Matrix(ring, [[ring.random(rng, 2) for _ in range(n)] for _ in range(n)])
        if rank(R) == n:
            return R


def _two_factors(A: Matrix, rng, seed):
    ring = A.ring
    n = A.nrows
    got = _from_canonical_blocks(A, seed)
    if got is not None:
        return got, "canonical-blocks"
    got = _monomial_split(A, rng)
    if got is not None:
        return got, "monomial"
    for _ in range(8):
        R = _random_invertible(ring, n, rng)
        got = _monomial_split(inverse(R) @ A @ R, rng)
        if got is not None:
            return _conjugate_factors(got, R), "monomial-conjugated"
    if ring.size is not None and ring.size ** (n * n - 1) <= 1 << 17:
        got = _exhaustive_split(A)
        if got is not None:
            return got, "exhaustive"
    return None, None


def factor_field(A: Matrix, seed: int = 0) -> TracelessFactorization:
    """Two traceless factors over a commutative field when the cascade finds them; never more than four.

    The cascade tries companion blocks, then monomial splits of ``A`` and of
    random conjugates, then exhaustive search over small finite fields.  The
    fallback peels off a traceless cyclic monomial ``Z`` and splits ``A Z^-1``.
    """
    if not A.is_square():
        raise NotSquare("non-square matrix")
    ring = A.ring
    if not ring.commutative or not ring.division:
        raise TypeError("factor_field needs a commutative field")
    n = A.nrows
    if n < 2:
        raise DimensionMismatch("needs n >= 2")
    rng = random.Random(seed)
    got, how = _two_factors(A, rng, seed)
    if got is not None:
        return _fact(A, got, "field", path=how, target_met=True)
    cycle = permutation_matrix(Permutation.cycle(n, 1), ring)
    for attempt in range(32):
        scales = [ring.one] * n if attempt == 0 else [ring.random(rng, 3) or ring.one for _ in range(n)]
        Z = cycle @ Matrix.diagonal(ring, scales)
        rest, how = _two_factors(A @ inverse(Z), rng, seed + attempt + 1)
        if rest is not None:
            return _fact(A, rest + [Z], "field", path="peeled-" + how, target_met=False)
    g = factor_general(A)
    return _fact(A, g.factors, "field", bound=BOUNDS["general"], path="general", target_met=False)


# ---------------------------------------------------------------------------
# any ring: sum of two products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SumOfTwoProducts:
    source: Matrix
    B1: Matrix
    B2: Matrix
    C1: Matrix
    C2: Matrix

    def verify(self) -> bool:
        parts = (self.B1, self.B2, self.C1, self.C2)
        return all(not M.trace() for M in parts) and self.B1 @ self.B2 + self.C1 @ self.C2 == self.source


def sum_two_products(A: Matrix) -> SumOfTwoProducts:
    """``A = B1 B2 + C1 C2`` with all four traceless; no inverses are used.

    ``A`` is split into a lower part ``B`` (carrying the diagonal except the
    last entry) and an upper part ``C``.  ``B1`` is ``B`` shifted one column
    right and ``B2`` the lower shift; ``C1`` is ``C`` shifted one column left
    and ``C2`` the upper shift.  The free corners make the traces vanish.
    """
    if not A.is_square():
        raise NotSquare("non-square matrix")
    ring = A.ring
    n = A.nrows
    if n < 2:
        raise DimensionMismatch("needs n >= 2")
    z, o = ring.zero, ring.one
    a = A.rows
    B1 = [[z] * n for _ in range(n)]
    C1 = [[z] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            lower = (j < i) or (j == i and i < n - 1)
            if lower and j + 1 < n:
                B1[i][j + 1] = a[i][j]
            elif not lower and j >= 1:
                C1[i][j - 1] = a[i][j]
    B1[0][0] = -sum((B1[i][i] for i in range(1, n)), z)
    C1[n - 1][n - 1] = -sum((C1[i][i] for i in range(n - 1)), z)
    B2 = [[o if i == j + 1 else z for j in range(n)] for i in range(n)]
    C2 = [[o if j == i + 1 else z for j in range(n)] for i in range(n)]
    mk = lambda rows: Matrix._raw(ring, tuple(map(tuple, rows)))  # noqa: E731
    return SumOfTwoProducts(A, mk(B1), mk(B2), mk(C1), mk(C2))
