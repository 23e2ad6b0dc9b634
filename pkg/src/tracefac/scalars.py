"""Exact scalar domains.

Every scalar domain is described by a :class:`Ring` object.  Elements are
plain Python values with operator overloads (``+``, ``-``, ``*``, ``==``);
the ring object supplies everything that cannot be read off an element:
zero and one, inversion, centrality, the center and coordinates over it,
random sampling and the JSON text encoding.

Rationals are ``gmpy2.mpq``.  Gaussian rationals, rational quaternions and
residues modulo ``m`` are small immutable classes defined here.
"""

from __future__ import annotations

import math
import re
from itertools import product

from gmpy2 import mpq

from .errors import NotAUnit, ParseError, ZeroInverse

__all__ = [
    "mpq",
    "GaussianRational",
    "Quaternion",
    "FloatQuaternion",
    "Mod",
    "Ring",
    "QQ",
    "QQI",
    "HQ",
    "HFLOAT",
    "GF",
    "ZMod",
    "ring_from_tag",
    "invert",
    "quaternion_conjugate_norm",
    "quat_complexify",
    "quat_complexify_exact",
]

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")
_MPQ = type(mpq(0))


def parse_rational(text) -> mpq:
    """Parse ``"a/b"`` or ``"a"`` into an mpq; integers are accepted as is."""
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return mpq(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ParseError(f"not a rational: {text!r}")
    num, _, den = text.replace(" ", "").partition("/")
    if den and int(den) == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return mpq(int(num), int(den) if den else 1)


def format_rational(x) -> str:
    return str(mpq(x))


def _q(x):
    return x if type(x) is _MPQ else mpq(x)


# ---------------------------------------------------------------------------
# element types
# ---------------------------------------------------------------------------


class GaussianRational:
    """re + im*i with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def _make(cls, re, im):
        z = object.__new__(cls)
        z.re = re
        z.im = im
        return z

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, _MPQ)):
            return GaussianRational._make(mpq(other), mpq(0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return -self + other

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussianRational._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self):
        return GaussianRational._make(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroInverse("inverse of 0")
        return GaussianRational._make(self.re / n, -self.im / n)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"({self.re}+{self.im}i)"


class Quaternion:
    """r + i*1i + j*1j + k*1k with rational coefficients, i^2 = j^2 = k^2 = ijk = -1."""

    __slots__ = ("r", "i", "j", "k")

    def __init__(self, r=0, i=0, j=0, k=0):
        self.r = _q(r)
        self.i = _q(i)
        self.j = _q(j)
        self.k = _q(k)

    @classmethod
    def _make(cls, r, i, j, k):
        q = object.__new__(cls)
        q.r = r
        q.i = i
        q.j = j
        q.k = k
        return q

    @staticmethod
    def _coerce(other):
        if isinstance(other, Quaternion):
            return other
        if isinstance(other, (int, _MPQ)):
            z = mpq(0)
            return Quaternion._make(mpq(other), z, z, z)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion._make(self.r + o.r, self.i + o.i, self.j + o.j, self.k + o.k)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion._make(self.r - o.r, self.i - o.i, self.j - o.j, self.k - o.k)

    def __rsub__(self, other):
        return -self + other

    def __neg__(self):
        return Quaternion._make(-self.r, -self.i, -self.j, -self.k)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a1, b1, c1, d1 = self.r, self.i, self.j, self.k
        a2, b2, c2, d2 = o.r, o.i, o.j, o.k
        return Quaternion._make(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self

    def __bool__(self):
        return bool(self.r) or bool(self.i) or bool(self.j) or bool(self.k)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.r == o.r and self.i == o.i and self.j == o.j and self.k == o.k

    def __hash__(self):
        if not (self.i or self.j or self.k):
            return hash(self.r)
        return hash((self.r, self.i, self.j, self.k))

    def conjugate(self):
        return Quaternion._make(self.r, -self.i, -self.j, -self.k)

    def norm(self):
        return self.r * self.r + self.i * self.i + self.j * self.j + self.k * self.k

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroInverse("inverse of 0")
        return Quaternion._make(self.r / n, -self.i / n, -self.j / n, -self.k / n)

    def real(self):
        return self.r

    def vector(self):
        return (self.i, self.j, self.k)

    def is_pure(self):
        return not self.r

    def __repr__(self):
        return f"Quaternion({self.r}, {self.i}, {self.j}, {self.k})"

    def __str__(self):
        parts = []
        for coeff, unit in ((self.r, ""), (self.i, "i"), (self.j, "j"), (self.k, "k")):
            if coeff:
                parts.append(f"{coeff}{unit}" if unit == "" or coeff not in (1, -1)
                             else ("-" if coeff < 0 else "") + unit)
        if not parts:
            return "0"
        return "(" + "+".join(parts).replace("+-", "-") + ")"


class FloatQuaternion:
    """Quaternion with double-precision coefficients."""

    __slots__ = ("r", "i", "j", "k")

    def __init__(self, r=0.0, i=0.0, j=0.0, k=0.0):
        self.r = float(r)
        self.i = float(i)
        self.j = float(j)
        self.k = float(k)

    @staticmethod
    def _coerce(other):
        if isinstance(other, FloatQuaternion):
            return other
        if isinstance(other, (int, float, _MPQ)):
            return FloatQuaternion(float(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FloatQuaternion(self.r + o.r, self.i + o.i, self.j + o.j, self.k + o.k)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FloatQuaternion(self.r - o.r, self.i - o.i, self.j - o.j, self.k - o.k)

    def __rsub__(self, other):
        return -self + other

    def __neg__(self):
        return FloatQuaternion(-self.r, -self.i, -self.j, -self.k)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a1, b1, c1, d1 = self.r, self.i, self.j, self.k
        a2, b2, c2, d2 = o.r, o.i, o.j, o.k
        return FloatQuaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self

    def __bool__(self):
        return bool(self.r or self.i or self.j or self.k)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.r, self.i, self.j, self.k) == (o.r, o.i, o.j, o.k)

    def __hash__(self):
        return hash((self.r, self.i, self.j, self.k))

    def conjugate(self):
        return FloatQuaternion(self.r, -self.i, -self.j, -self.k)

    def norm(self):
        return self.r * self.r + self.i * self.i + self.j * self.j + self.k * self.k

    def __abs__(self):
        return math.sqrt(self.norm())

    def inverse(self):
        n = self.norm()
        if n == 0.0:
            raise ZeroInverse("inverse of 0")
        return FloatQuaternion(self.r / n, -self.i / n, -self.j / n, -self.k / n)

    def isclose(self, other, tol=1e-12):
        return abs(self - other) <= tol

    def __repr__(self):
        return f"FloatQuaternion({self.r!r}, {self.i!r}, {self.j!r}, {self.k!r})"


class Mod:
    """Residue class ``v mod m``."""

    __slots__ = ("v", "m")

    def __init__(self, v, m):
        self.m = m
        self.v = v % m

    @classmethod
    def _make(cls, v, m):
        x = object.__new__(cls)
        x.v = v
        x.m = m
        return x

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.m != self.m:
                return NotImplemented
            return other
        if isinstance(other, int):
            return Mod._make(other % self.m, self.m)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod._make((self.v + o.v) % self.m, self.m)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod._make((self.v - o.v) % self.m, self.m)

    def __rsub__(self, other):
        return -self + other

    def __neg__(self):
        return Mod._make((-self.v) % self.m, self.m)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod._make((self.v * o.v) % self.m, self.m)

    __rmul__ = __mul__

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.v == o.v

    def __hash__(self):
        return hash((self.v, self.m))

    def inverse(self):
        if self.v == 0:
            raise ZeroInverse("inverse of 0")
        try:
            return Mod._make(pow(self.v, -1, self.m), self.m)
        except ValueError:
            raise NotAUnit(f"{self.v} is not a unit mod {self.m}") from None

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Mod({self.v}, {self.m})"

    def __str__(self):
        return str(self.v)


# ---------------------------------------------------------------------------
# ring descriptors
# ---------------------------------------------------------------------------


class Ring:
    """Descriptor for a scalar domain.

    Subclasses set ``tag``, ``zero``, ``one``, ``commutative``,
    ``division``, ``characteristic`` and ``size`` (``None`` when infinite).
    """

    tag: str
    commutative = True
    division = True
    exact = True
    characteristic = 0
    size = None

    def coerce(self, x):
        raise NotImplementedError

    def from_int(self, n: int):
        return self.coerce(n)

    def inv(self, x):
        return x.inverse()

    def is_unit(self, x) -> bool:
        return bool(x)

    def is_central(self, x) -> bool:
        return True

    def contains(self, x) -> bool:
        try:
            return self.coerce(x) == x
        except Exception:
            return False

    # The center and coordinates over it are used to solve equations that
    # are linear over the center (Sylvester-type equations).
    def center(self) -> Ring:
        return self

    def center_basis(self):
        return [self.one]

    def coords(self, x):
        return [x]

    def from_coords(self, cs):
        return cs[0]

    def embed_center(self, c):
        return c

    def residue(self, x):
        """Central representative of ``x`` modulo additive commutators."""
        return x

    def commutator_preimage(self, t):
        """Return ``(u, y)`` with ``u*y - y*u == t``; ``t`` must be a sum of commutators."""
        if t:
            raise ValueError("nonzero element of a commutative ring is not a commutator")
        return self.zero, self.zero

    def random(self, rng, height=3):
        raise NotImplementedError

    def elements(self):
        raise TypeError(f"ring {self.tag} is infinite")

    def encode(self, x):
        raise NotImplementedError

    def decode(self, obj):
        raise NotImplementedError

    def __repr__(self):
        return f"<ring {self.tag}>"

    def __eq__(self, other):
        return isinstance(other, Ring) and other.tag == self.tag

    def __hash__(self):
        return hash(self.tag)


def _random_rational(rng, height):
    num = rng.randint(-height, height)
    den = 1 if rng.random() < 0.6 else rng.randint(1, height)
    return mpq(num, den)


class RationalField(Ring):
    tag = "Q"

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def coerce(self, x):
        if isinstance(x, str):
            return parse_rational(x)
        return mpq(x)

    def inv(self, x):
        if not x:
            raise ZeroInverse("inverse of 0")
        return 1 / x

    def random(self, rng, height=3):
        return _random_rational(rng, height)

    def encode(self, x):
        return format_rational(x)

    def decode(self, obj):
        return parse_rational(obj)


class GaussianField(Ring):
    tag = "Qi"

    def __init__(self):
        self.zero = GaussianRational(0, 0)
        self.one = GaussianRational(1, 0)

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, _MPQ)):
            return GaussianRational(x, 0)
        raise TypeError(f"cannot coerce {x!r} into Q(i)")

    def random(self, rng, height=3):
        return GaussianRational(_random_rational(rng, height), _random_rational(rng, height))

    def encode(self, x):
        return {"re": format_rational(x.re), "im": format_rational(x.im)}

    def decode(self, obj):
        if isinstance(obj, (str, int)) and not isinstance(obj, bool):
            return GaussianRational(parse_rational(obj), 0)
        if not isinstance(obj, dict) or set(obj) - {"re", "im"}:
            raise ParseError(f"bad Q(i) entry: {obj!r}")
        return GaussianRational(parse_rational(obj.get("re", "0")), parse_rational(obj.get("im", "0")))


class QuaternionRing(Ring):
    """The rational quaternions (-1,-1 / Q)."""

    tag = "HQ"
    commutative = False

    def __init__(self):
        self.zero = Quaternion()
        self.one = Quaternion(1)
        self.i = Quaternion(0, 1)
        self.j = Quaternion(0, 0, 1)
        self.k = Quaternion(0, 0, 0, 1)

    def coerce(self, x):
        if isinstance(x, Quaternion):
            return x
        if isinstance(x, (int, _MPQ)):
            return Quaternion(x)
        if isinstance(x, GaussianRational):
            return Quaternion(x.re, x.im)
        raise TypeError(f"cannot coerce {x!r} into HQ")

    def is_central(self, x):
        return not (x.i or x.j or x.k)

    def center(self):
        return QQ

    def center_basis(self):
        return [self.one, self.i, self.j, self.k]

    def coords(self, x):
        return [x.r, x.i, x.j, x.k]

    def from_coords(self, cs):
        return Quaternion(*cs)

    def embed_center(self, c):
        return Quaternion(c)

    def residue(self, x):
        return Quaternion(x.r)

    def commutator_preimage(self, t):
        # For pure u, y: u*y - y*u = 2 (u x y).  Take u orthogonal to t and
        # y = (t x u) / (2 |u|^2).
        if t.r:
            raise ValueError("element with nonzero real part is not a sum of commutators")
        if not t:
            return self.zero, self.zero
        a, b, c = t.i, t.j, t.k
        u = (b, -a, mpq(0)) if (a or b) else (mpq(1), mpq(0), mpq(0))
        uu = u[0] * u[0] + u[1] * u[1] + u[2] * u[2]
        cross = (b * u[2] - c * u[1], c * u[0] - a * u[2], a * u[1] - b * u[0])
        y = Quaternion(0, *(w / (2 * uu) for w in cross))
        return Quaternion(0, *u), y

    def random(self, rng, height=3):
        return Quaternion(*(_random_rational(rng, height) for _ in range(4)))

    def encode(self, x):
        return {"r": format_rational(x.r), "i": format_rational(x.i),
                "j": format_rational(x.j), "k": format_rational(x.k)}

    def decode(self, obj):
        if isinstance(obj, (str, int)) and not isinstance(obj, bool):
            return Quaternion(parse_rational(obj))
        if not isinstance(obj, dict) or set(obj) - {"r", "i", "j", "k"}:
            raise ParseError(f"bad quaternion entry: {obj!r}")
        return Quaternion(*(parse_rational(obj.get(key, "0")) for key in "rijk"))


class FloatQuaternionRing(Ring):
    tag = "Hfloat"
    commutative = False
    exact = False

    def __init__(self):
        self.zero = FloatQuaternion()
        self.one = FloatQuaternion(1.0)

    def coerce(self, x):
        if isinstance(x, FloatQuaternion):
            return x
        if isinstance(x, Quaternion):
            return FloatQuaternion(float(x.r), float(x.i), float(x.j), float(x.k))
        return FloatQuaternion(float(x))

    def is_central(self, x):
        return not (x.i or x.j or x.k)

    def random(self, rng, height=3):
        return FloatQuaternion(*(rng.uniform(-height, height) for _ in range(4)))

    def encode(self, x):
        return {"r": x.r, "i": x.i, "j": x.j, "k": x.k}

    def decode(self, obj):
        if not isinstance(obj, dict) or set(obj) - {"r", "i", "j", "k"}:
            raise ParseError(f"bad float quaternion entry: {obj!r}")
        try:
            return FloatQuaternion(*(float(obj.get(key, 0.0)) for key in "rijk"))
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc)) from None


class IntegerMod(Ring):
    """Z/mZ; a field exactly when m is prime."""

    def __init__(self, m: int, tag_prefix="Zm"):
        if m < 2:
            raise ValueError("modulus must be at least 2")
        self.m = m
        self.tag = f"{tag_prefix}:{m}"
        self.zero = Mod(0, m)
        self.one = Mod(1, m)
        self.characteristic = m
        self.size = m
        self.division = _is_prime(m)

    def coerce(self, x):
        if isinstance(x, Mod):
            if x.m != self.m:
                raise TypeError(f"residue mod {x.m} is not in {self.tag}")
            return x
        if isinstance(x, str):
            return Mod(int(x), self.m)
        if isinstance(x, _MPQ):
            return Mod(int(x.numerator), self.m) * Mod(int(x.denominator), self.m).inverse()
        return Mod(int(x), self.m)

    def is_unit(self, x):
        return math.gcd(x.v, self.m) == 1

    def random(self, rng, height=3):
        return Mod(rng.randrange(self.m), self.m)

    def elements(self):
        return [Mod(v, self.m) for v in range(self.m)]

    def encode(self, x):
        return str(x.v)

    def decode(self, obj):
        if isinstance(obj, bool) or not isinstance(obj, (str, int)):
            raise ParseError(f"bad residue: {obj!r}")
        if isinstance(obj, str) and not re.fullmatch(r"[+-]?\d+", obj.strip()):
            raise ParseError(f"bad residue: {obj!r}")
        return Mod(int(obj), self.m)


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    return all(m % d for d in range(2, math.isqrt(m) + 1))


def GF(p: int) -> IntegerMod:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return IntegerMod(p, tag_prefix="Fp")


def ZMod(m: int) -> IntegerMod:
    return IntegerMod(m, tag_prefix="Zm")


QQ = RationalField()
QQI = GaussianField()
HQ = QuaternionRing()
HFLOAT = FloatQuaternionRing()


def ring_from_tag(tag: str) -> Ring:
    fixed = {"Q": QQ, "Qi": QQI, "HQ": HQ, "Hfloat": HFLOAT}
    if tag in fixed:
        return fixed[tag]
    prefix, _, modulus = tag.partition(":")
    if prefix in ("Fp", "Zm") and modulus.isdigit():
        m = int(modulus)
        try:
            return GF(m) if prefix == "Fp" else ZMod(m)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    raise ParseError(f"unknown ring tag {tag!r}")


def ring_of(x) -> Ring:
    """Best-effort ring lookup for a bare element."""
    if isinstance(x, Quaternion):
        return HQ
    if isinstance(x, GaussianRational):
        return QQI
    if isinstance(x, FloatQuaternion):
        return HFLOAT
    if isinstance(x, Mod):
        return GF(x.m) if _is_prime(x.m) else ZMod(x.m)
    return QQ


# ---------------------------------------------------------------------------
# scalar operations
# ---------------------------------------------------------------------------


def invert(x):
    """Two-sided inverse of a nonzero element of a division ring."""
    if not x:
        raise ZeroInverse("inverse of 0")
    if type(x) is _MPQ:
        return 1 / x
    return x.inverse()


def quaternion_conjugate_norm(q: Quaternion):
    return q.conjugate(), q.norm()


def _rotation_taking_i_to(u):
    """Unnormalized p with p*i*p^-1 = u for a unit pure vector u = (a, b, c).

    p = 1 + <i,u> + i x u; the antipodal case u = -i uses p = j.
    """
    a, b, c = u
    if a == -1 and not b and not c:
        return (0, 0, 1, 0)
    return (1 + a, 0, -c, b)


def quat_complexify(q: FloatQuaternion):
    """Return ``(p, x, s)`` with ``p^-1 q p = x + s i`` and ``s = |vector part|``."""
    x = q.r
    s = math.sqrt(q.i * q.i + q.j * q.j + q.k * q.k)
    if s == 0.0:
        return FloatQuaternion(1.0), x, 0.0
    u = (q.i / s, q.j / s, q.k / s)
    p = FloatQuaternion(*_rotation_taking_i_to(u))
    size = abs(p)
    if size < 1e-150:
        p = FloatQuaternion(0.0, 0.0, 1.0, 0.0)
    else:
        p = FloatQuaternion(p.r / size, p.i / size, p.j / size, p.k / size)
    return p, x, s


def quat_complexify_exact(q: Quaternion):
    """Exact variant of :func:`quat_complexify`.

    Returns ``(p, x, s)`` with rational ``s`` when the squared vector norm is a
    rational square, otherwise ``None``.
    """
    vv = q.i * q.i + q.j * q.j + q.k * q.k
    num, den = int(vv.numerator), int(vv.denominator)
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    s = mpq(rn, rd)
    if not s:
        return Quaternion(1), q.r, s
    p = Quaternion(*_rotation_taking_i_to((q.i / s, q.j / s, q.k / s)))
    return p, q.r, s


def enumerate_small_quaternions(height: int):
    """All quaternions with integer coefficients in [-height, height]."""
    rng = range(-height, height + 1)
    for r, i, j, k in product(rng, rng, rng, rng):
        yield Quaternion(r, i, j, k)
