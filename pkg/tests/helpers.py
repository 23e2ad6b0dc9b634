import random

from gmpy2 import mpq

from hypothesis import strategies as st

from tracefac.matrix import Matrix
from tracefac.scalars import GF, HQ, QQ, QQI, ZMod, GaussianRational, Quaternion

RINGS = {"Q": QQ, "Qi": QQI, "HQ": HQ, "F2": GF(2), "F3": GF(3), "F5": GF(5), "Z6": ZMod(6)}


def q(r=0, i=0, j=0, k=0):
    return Quaternion(r, i, j, k)


I_, J_, K_ = q(i=1), q(j=1), q(k=1)


def rand_matrix(ring, n, rng, density=0.7, height=3):
    return Matrix(ring, [[ring.random(rng, height) if rng.random() < density else ring.zero
                          for _ in range(n)] for _ in range(n)])


def rand_singular(ring, n, rng):
    rows = [list(r) for r in rand_matrix(ring, n, rng).rows]
    c = ring.random(rng, 2)
    rows[n - 1] = [c * x for x in rows[0]]
    return Matrix(ring, rows)


def small_ints():
    return st.integers(-4, 4)


def rationals():
    return st.builds(lambda a, b: mpq(a, b), st.integers(-9, 9), st.integers(1, 5))


def quaternions():
    return st.tuples(rationals(), rationals(), rationals(), rationals()).map(lambda t: Quaternion(*t))


def gaussians():
    return st.tuples(rationals(), rationals()).map(lambda t: GaussianRational(*t))


SCALARS = {"Q": rationals, "Qi": gaussians, "HQ": quaternions}


@st.composite
def matrices(draw, ring_tag, n=None, min_n=2, max_n=3):
    ring = RINGS[ring_tag]
    if n is None:
        n = draw(st.integers(min_n, max_n))
    if ring_tag in SCALARS:
        elem = SCALARS[ring_tag]()
    else:
        elem = st.sampled_from(list(ring.elements()))
    rows = draw(st.lists(st.lists(elem, min_size=n, max_size=n), min_size=n, max_size=n))
    return Matrix(ring, rows)


def seeded(seed):
    return random.Random(seed)
