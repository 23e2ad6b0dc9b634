"""Exhaustive checks over tiny finite rings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .polyimage import MultilinearPolynomial, _all_matrices, image_set
from .scalars import GF


@dataclass(frozen=True)
class SuiteResult:
    name: str
    covered: int
    total: int
    detail: str

    @property
    def ok(self):
        return self.covered == self.total

    def render(self):
        head = "PASS" if self.ok else "FAIL"
        return f"{head} {self.name}: {self.covered}/{self.total} {self.detail}"


def traceless_matrices(ring, n):
    return [M for M in _all_matrices(ring, n) if not M.trace()]


def two_traceless_cover(ring, n=2):
    """Which matrices of ``M_n(ring)`` are ``B C`` with both traceless, each with one witness."""
    tl = traceless_matrices(ring, n)
    cover = {}
    for B, C in itertools.product(tl, tl):
        cover.setdefault(B @ C, (B, C))
    return cover


def _two_traceless_suite(name, p):
    ring = GF(p)
    cover = two_traceless_cover(ring)
    total = p ** 4
    tl = len(traceless_matrices(ring, 2))
    return SuiteResult(name, len(cover), total,
                       f"matrices of M2(F{p}) are products of two traceless ({tl} traceless, {tl * tl} pairs)")


def commutator_image_suite():
    ring = GF(2)
    image = set(image_set(MultilinearPolynomial.commutator(), ring, 2))
    tl = set(traceless_matrices(ring, 2))
    stray = len(image - tl)
    # a value outside the traceless set would be a counterexample, so it spoils coverage
    covered = len(image & tl) if not stray else 0
    return SuiteResult("m2f2-commutator-image", covered, len(tl),
                       f"traceless matrices of M2(F2) are commutators; image size {len(image)}, "
                       f"{stray} values with nonzero trace")


SUITES = {
    "f2-two-traceless": lambda: _two_traceless_suite("f2-two-traceless", 2),
    "m2f2-commutator-image": commutator_image_suite,
    "m2f3-two-traceless": lambda: _two_traceless_suite("m2f3-two-traceless", 3),
}


def run_suite(name: str) -> SuiteResult:
    return SUITES[name]()
