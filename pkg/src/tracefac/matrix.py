"""Dense matrices over a scalar :class:`~tracefac.scalars.Ring`.

Products are formed as ``sum_k a_ik * b_kj`` with the left factor's entry on
the left; nothing here ever reorders scalar products, so every routine is
valid over noncommutative scalars.  There is deliberately no transpose
helper: over a noncommutative ring ``(AB)^T != B^T A^T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotSquare, RingMismatch
from .scalars import Ring


class Matrix:
    """Immutable dense matrix.  ``A[i, j]`` reads an entry (0-based)."""

    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring: Ring, rows: Iterable[Iterable]):
        rows = tuple(tuple(ring.coerce(x) for x in row) for row in rows)
        if not rows or not rows[0]:
            raise DimensionMismatch("matrices must have at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged rows")
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = width

    @classmethod
    def _raw(cls, ring, rows):
        m = object.__new__(cls)
        m.ring = ring
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = len(rows[0])
        return m

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, ring, nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        z = ring.zero
        return cls._raw(ring, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero, ring.one
        return cls._raw(ring, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, ring, entries):
        entries = [ring.coerce(x) for x in entries]
        n = len(entries)
        z = ring.zero
        return cls._raw(ring, tuple(tuple(entries[i] if i == j else z for j in range(n))
                                    for i in range(n)))

    @classmethod
    def from_columns(cls, ring, columns: Sequence[Sequence]):
        columns = [tuple(c) for c in columns]
        if not columns:
            raise DimensionMismatch("no columns")
        return cls._raw(ring, tuple(zip(*columns)))

    @classmethod
    def from_function(cls, ring, nrows, ncols, fn):
        return cls._raw(ring, tuple(tuple(ring.coerce(fn(i, j)) for j in range(ncols))
                                    for i in range(nrows)))

    @classmethod
    def unit(cls, ring, n, i, j, value=None):
        """``value * E_ij`` (``value`` defaults to one)."""
        v = ring.one if value is None else ring.coerce(value)
        z = ring.zero
        return cls._raw(ring, tuple(tuple(v if (r, c) == (i, j) else z for c in range(n))
                                    for r in range(n)))

    # -- access ------------------------------------------------------------

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def diagonal_entries(self):
        return [self.rows[i][i] for i in range(min(self.nrows, self.ncols))]

    def is_square(self):
        return self.nrows == self.ncols

    def is_zero(self):
        return not any(x for r in self.rows for x in r)

    def to_lists(self):
        return [list(r) for r in self.rows]

    def replace(self, i, j, value):
        rows = [list(r) for r in self.rows]
        rows[i][j] = self.ring.coerce(value)
        return Matrix._raw(self.ring, tuple(tuple(r) for r in rows))

    def submatrix(self, r0, r1, c0, c1):
        return Matrix._raw(self.ring, tuple(tuple(r[c0:c1]) for r in self.rows[r0:r1]))

    # -- arithmetic --------------------------------------------------------

    def _check_same(self, other):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring.tag} vs {other.ring.tag}")

    def __add__(self, other):
        self._check_same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix._raw(self.ring, tuple(tuple(a + b for a, b in zip(r, s))
                                            for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other):
        self._check_same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Matrix._raw(self.ring, tuple(tuple(a - b for a, b in zip(r, s))
                                            for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        return Matrix._raw(self.ring, tuple(tuple(-a for a in r) for r in self.rows))

    def __matmul__(self, other):
        return multiply(self, other)

    def scale_left(self, c):
        """``c * A``: every entry multiplied by ``c`` from the left."""
        c = self.ring.coerce(c)
        return Matrix._raw(self.ring, tuple(tuple(c * a for a in r) for r in self.rows))

    def scale_right(self, c):
        c = self.ring.coerce(c)
        return Matrix._raw(self.ring, tuple(tuple(a * c for a in r) for r in self.rows))

    def apply(self, vector):
        """``A v`` for a column vector given as a sequence."""
        z = self.ring.zero
        out = []
        for r in self.rows:
            acc = z
            for a, x in zip(r, vector):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def power(self, k):
        if not self.is_square():
            raise NotSquare("power of a non-square matrix")
        result = Matrix.identity(self.ring, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def trace(self):
        return trace(self)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash((self.ring.tag, self.rows))

    def __repr__(self):
        return f"Matrix({self.ring.tag}, {[[str(x) for x in r] for r in self.rows]})"

    def __str__(self):
        cells = [[str(x) for x in r] for r in self.rows]
        width = max(len(c) for r in cells for c in r)
        return "\n".join("[" + " ".join(c.rjust(width) for c in r) + "]" for r in cells)


def multiply(A: Matrix, B: Matrix) -> Matrix:
    """Exact product ``A B``; zero entries are skipped."""
    if not isinstance(A, Matrix) or not isinstance(B, Matrix):
        raise TypeError("multiply expects matrices")
    if A.ring != B.ring:
        raise RingMismatch(f"{A.ring.tag} vs {B.ring.tag}")
    if A.ncols != B.nrows:
        raise DimensionMismatch(f"{A.shape} @ {B.shape}")
    z = A.ring.zero
    brows = B.rows
    ncols = B.ncols
    out = []
    for arow in A.rows:
        acc = [z] * ncols
        for k, a in enumerate(arow):
            if not a:
                continue
            brow = brows[k]
            for j in range(ncols):
                b = brow[j]
                if b:
                    acc[j] = acc[j] + a * b
        out.append(tuple(acc))
    return Matrix._raw(A.ring, tuple(out))


def product(factors: Sequence[Matrix], ring=None, n=None) -> Matrix:
    """Ordered product ``F_1 F_2 ... F_k``; the empty product needs ``ring`` and ``n``."""
    if not factors:
        return Matrix.identity(ring, n)
    result = factors[0]
    for f in factors[1:]:
        result = result @ f
    return result


def trace(A: Matrix):
    if not A.is_square():
        raise NotSquare(f"trace of a {A.nrows}x{A.ncols} matrix")
    acc = A.ring.zero
    for i in range(A.nrows):
        acc = acc + A.rows[i][i]
    return acc


def conjugate(A: Matrix, P: Matrix) -> Matrix:
    """``P^-1 A P``."""
    from .elimination import inverse

    return inverse(P) @ A @ P


def from_ints(ring: Ring, rows) -> Matrix:
    return Matrix(ring, [[ring.from_int(x) if isinstance(x, int) else x for x in r] for r in rows])


def repeated_sum(ring: Ring, n: int):
    """``n * 1`` formed by repeated addition (meaningful in every characteristic)."""
    acc = ring.zero
    step = ring.one if n >= 0 else -ring.one
    for _ in range(abs(n)):
        acc = acc + step
    return acc


# ---------------------------------------------------------------------------
# structured constructors
# ---------------------------------------------------------------------------


class Permutation:
    """Bijection of ``{0, ..., n-1}``; ``images[i]`` is the image of ``i``."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def cycle(cls, n, shift=1):
        """``i -> i + shift (mod n)``."""
        return cls([(i + shift) % n for i in range(n)])

    @property
    def size(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def compose(self, other: Permutation) -> Permutation:
        """``self o other``: apply ``other`` first."""
        return Permutation([self.images[other.images[i]] for i in range(self.size)])

    def inverse(self) -> Permutation:
        inv = [0] * self.size
        for i, s in enumerate(self.images):
            inv[s] = i
        return Permutation(inv)

    def fixed_points(self):
        return [i for i, s in enumerate(self.images) if i == s]

    @property
    def fixed_point_free(self):
        return not self.fixed_points()

    def matrix(self, ring: Ring) -> Matrix:
        return permutation_matrix(self, ring)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def permutation_matrix(sigma: Permutation, ring: Ring) -> Matrix:
    """The matrix with a one at ``(sigma(i), i)``, so that ``P e_i = e_sigma(i)``."""
    n = sigma.size
    z, o = ring.zero, ring.one
    rows = [[z] * n for _ in range(n)]
    for i, s in enumerate(sigma.images):
        rows[s][i] = o
    return Matrix._raw(ring, tuple(tuple(r) for r in rows))


def permutation_of(P: Matrix):
    """Recover the permutation of a permutation matrix, or ``None``."""
    if not P.is_square():
        return None
    n = P.nrows
    o = P.ring.one
    images = [None] * n
    for i in range(n):
        col = P.column(i)
        ones = [r for r, x in enumerate(col) if x]
        if len(ones) != 1 or col[ones[0]] != o:
            return None
        images[i] = ones[0]
    if sorted(images) != list(range(n)):
        return None
    return Permutation(images)


@dataclass(frozen=True)
class CompanionSpec:
    """Monic ``f = x^n + ...`` with its companion layout.

    ``plain``: last column is ``(a_0, ..., a_{n-1})`` and ``f = x^n - sum a_i x^i``.
    ``negated``: last column is ``(-a_0, ..., -a_{n-1})`` and ``f = x^n + sum a_i x^i``.
    """

    coefficients: tuple
    convention: str = "plain"

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("companion of degree 0")
        if self.convention not in ("plain", "negated"):
            raise ValueError(f"unknown convention {self.convention!r}")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @property
    def size(self):
        return len(self.coefficients)

    def last_column(self):
        if self.convention == "plain":
            return self.coefficients
        return tuple(-a for a in self.coefficients)

    def as_plain(self) -> CompanionSpec:
        return CompanionSpec(self.last_column(), "plain")

    def polynomial(self, ring):
        """Coefficient list ``[c_0, ..., c_n]`` of the monic polynomial."""
        from .canonical import SkewPolynomial

        if self.convention == "negated":
            low = list(self.coefficients)
        else:
            low = [-a for a in self.coefficients]
        return SkewPolynomial(ring, low + [ring.one])


def companion(spec: CompanionSpec, ring: Ring) -> Matrix:
    n = spec.size
    last = [ring.coerce(a) for a in spec.last_column()]
    z, o = ring.zero, ring.one
    rows = []
    for i in range(n):
        row = [z] * n
        if i >= 1:
            row[i - 1] = o
        row[n - 1] = last[i]
        rows.append(tuple(row))
    return Matrix._raw(ring, tuple(rows))


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    if not blocks:
        raise DimensionMismatch("empty block list")
    ring = blocks[0].ring
    for b in blocks:
        if b.ring != ring:
            raise RingMismatch("blocks over different rings")
        if not b.is_square():
            raise NotSquare("block_diag expects square blocks")
    n = sum(b.nrows for b in blocks)
    z = ring.zero
    rows = []
    offset = 0
    for b in blocks:
        for r in b.rows:
            rows.append((z,) * offset + r + (z,) * (n - offset - b.ncols))
        offset += b.ncols
    return Matrix._raw(ring, tuple(rows))


@dataclass(frozen=True)
class JordanLikeBlock:
    size: int
    alpha: object
    beta: object


def jordan_like(J: JordanLikeBlock, ring: Ring) -> Matrix:
    """``alpha`` on the diagonal, ``beta`` on the first superdiagonal."""
    a = ring.coerce(J.alpha)
    b = ring.coerce(J.beta)
    return Matrix.from_function(ring, J.size, J.size,
                                lambda i, j: a if i == j else (b if j == i + 1 else ring.zero))


def embed(A: Matrix, n: int, indices: Sequence[int]) -> Matrix:
    """Place ``A`` on the rows and columns ``indices`` of an ``n x n`` zero matrix."""
    z = A.ring.zero
    rows = [[z] * n for _ in range(n)]
    for a, i in enumerate(indices):
        for b, j in enumerate(indices):
            rows[i][j] = A.rows[a][b]
    return Matrix._raw(A.ring, tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------


def is_traceless(A: Matrix) -> bool:
    return not trace(A)


def is_unitriangular(A: Matrix, orientation: str = "upper") -> bool:
    if not A.is_square():
        raise NotSquare("unitriangularity needs a square matrix")
    o = A.ring.one
    for i, r in enumerate(A.rows):
        for j, x in enumerate(r):
            if i == j:
                if x != o:
                    return False
            elif (orientation == "upper" and i > j) or (orientation == "lower" and i < j):
                if x:
                    return False
    return True


def is_diagonal(A: Matrix) -> bool:
    return all(not x for i, r in enumerate(A.rows) for j, x in enumerate(r) if i != j)


def is_strictly_upper(A: Matrix) -> bool:
    return all(not x for i, r in enumerate(A.rows) for j, x in enumerate(r) if j <= i)


def is_nilpotent(A: Matrix) -> bool:
    if not A.is_square():
        raise NotSquare("nilpotency needs a square matrix")
    P = A
    for _ in range(A.nrows - 1):
        if P.is_zero():
            return True
        P = P @ A
    return P.is_zero()


def is_central_matrix(A: Matrix) -> bool:
    """``A = lambda I`` with ``lambda`` central in the scalar ring."""
    if not A.is_square():
        return False
    lam = A.rows[0][0]
    if not A.ring.is_central(lam):
        return False
    return all((x == lam) if i == j else not x
               for i, r in enumerate(A.rows) for j, x in enumerate(r))
