"""Acceptance suite: one PASS/FAIL line per criterion, printed at the end of the pytest run.

Run standalone with ``python3 tests/test_acceptance.py`` to print the lines directly.
"""

import itertools
import random
import time

import pytest

from certs import generate, mutate
from helpers import I_, J_, K_, q, rand_matrix, rand_singular
from tracefac import certify
from tracefac.elimination import inverse, invertible_nilpotent_split, is_invertible, rank
from tracefac.matrix import (
    CompanionSpec,
    Matrix,
    block_diag,
    companion,
    is_nilpotent,
    is_traceless,
    product,
)
from tracefac.oracles import two_traceless_cover
from tracefac.polyimage import factor_commutators, factor_generalized_commutators, quaternion_pure_product
from tracefac.scalars import GF, HQ, QQ, QQI, FloatQuaternion, IntegerMod, Quaternion, ZMod
from tracefac.semitraceless import FinitaryMatrix, factor_semitraceless, finitary_factor
from tracefac.traceless import (
    factor_2x2,
    factor_companion,
    factor_diag_pair,
    factor_diag_triple,
    factor_diagonal,
    factor_field,
    factor_general,
    factor_unitriangular,
    sum_two_products,
)

# tolerances and budgets
FIELD_RUNTIME_S = 10.0
GENERAL_RUNTIME_S = 60.0
GENERAL_SAMPLES = 1000
GENERAL_BOUND = 12
CASE_BOUNDS = {"a": 6, "b": 3, "c": 3, "d": 2}
SAMPLES_2X2 = 1000
SAMPLES_SUM2 = 500
SAMPLES_SEMI = 500
SAMPLES_SPLIT = 500
PURE_SAMPLES = 10_000
PURE_TOL = 1e-9
MUTATIONS = 1000

RESULTS = {}


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
    RESULTS[number] = line
    return line


def _traceless_all(factors):
    return all(F.trace() == 0 for F in factors)


def test_criterion_01_two_traceless_over_tiny_fields():
    t0 = time.perf_counter()
    covered, total, field_ok = 0, 0, 0
    for p in (2, 3):
        ring = GF(p)
        cover = two_traceless_cover(ring)
        for vals in itertools.product(ring.elements(), repeat=4):
            A = Matrix(ring, [vals[:2], vals[2:]])
            total += 1
            covered += A in cover
            f = factor_field(A)
            field_ok += f.verify() and f.count == 2
    dt = time.perf_counter() - t0
    ok = covered == total == 97 and field_ok == total and dt < FIELD_RUNTIME_S
    print(report(1, ok, f"M2(F2), M2(F3): oracle covers {covered}/{total}, "
                        f"factor_field count 2 on {field_ok}/{total}, {dt:.2f}s"))
    assert ok


def test_criterion_02_general_bound_twelve():
    rng = random.Random(2)
    t0 = time.perf_counter()
    worst, bad, total = 0, 0, 0
    for ring in (QQ, QQI, HQ):
        for n in range(2, 6):
            for _ in range(GENERAL_SAMPLES):
                A = rand_matrix(ring, n, rng, rng.choice([0.3, 0.7, 1.0]))
                f = factor_general(A)
                total += 1
                worst = max(worst, f.count)
                if not (f.count <= GENERAL_BOUND and _traceless_all(f.factors) and f.product() == A):
                    bad += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < GENERAL_RUNTIME_S
    print(report(2, ok, f"factor_general on {total} matrices (Q, Q(i), HQ; n=2..5): "
                        f"{bad} failures, max {worst} factors, {dt:.1f}s"))
    assert ok


def test_criterion_03_two_by_two_cases():
    rng = random.Random(3)
    seen = {k: 0 for k in CASE_BOUNDS}
    worst = {k: 0 for k in CASE_BOUNDS}
    bad = 0
    for t in range(SAMPLES_2X2):
        A = rand_matrix(HQ, 2, rng, 1.0)
        case = t % 4
        if case >= 1:
            A = A.replace(0, 0, HQ.zero)
        if case >= 2:
            A = A.replace(0, 1, HQ.zero)
        if case >= 3:
            A = A.replace(1, 0, HQ.zero)
        f = factor_2x2(A)
        c = f.notes["case"]
        seen[c] += 1
        worst[c] = max(worst[c], f.count)
        if not (f.count <= CASE_BOUNDS[c] and _traceless_all(f.factors) and f.product() == A):
            bad += 1
    ok = bad == 0 and all(seen.values())
    print(report(3, ok, f"factor_2x2 on {SAMPLES_2X2} HQ inputs: {bad} failures, "
                        f"max counts a/b/c/d = {'/'.join(str(worst[k]) for k in 'abcd')}, "
                        f"cases seen {seen}"))
    assert ok


def test_criterion_04_diagonal_pairs():
    rng = random.Random(4)
    checks, bad = 0, 0
    a1, a2 = q(1, 2), q(0, 0, 3)
    f = factor_diag_pair(a1, a2, HQ)
    display = (f.factors == (Matrix(HQ, [[0, 1], [1, 0]]), Matrix(HQ, [[0, a2], [a1, 0]])))
    for args in ((I_, J_, K_), (1, 0, 1), (1, 1, 1)):
        checks += 1
        bad += not factor_diag_triple(*args, HQ).verify()
    for ring in (QQ, QQI, HQ, GF(2), GF(3)):
        for n in range(2, 8):
            for _ in range(20):
                d = [ring.random(rng, 2) if rng.random() < 0.5 else ring.zero for _ in range(n)]
                g = factor_diagonal(d, ring)
                checks += 1
                bad += not (g.count == 2 and g.verify())
    ok = display and bad == 0
    print(report(4, ok, f"diagonal pair display {'matches' if display else 'differs'}; "
                        f"{checks - bad}/{checks} diagonal/triple factorizations exact with 2 factors"))
    assert ok


def _unitri(ring, n, rng, orientation):
    S = rand_matrix(ring, n, rng)
    keep = (lambda i, j: j > i) if orientation == "upper" else (lambda i, j: j < i)
    return Matrix.from_function(ring, n, n,
                                lambda i, j: ring.one if i == j else (S[i, j] if keep(i, j) else ring.zero))


def test_criterion_05_unitriangular():
    rng = random.Random(5)
    total, bad, worst = 0, 0, 0
    for ring in (QQ, QQI, HQ, GF(2), GF(3), ZMod(6)):
        for orientation in ("upper", "lower"):
            for n in range(2, 7):
                for _ in range(10):
                    A = _unitri(ring, n, rng, orientation)
                    f = factor_unitriangular(A, orientation)
                    total += 1
                    worst = max(worst, f.count)
                    if not (f.verify() and f.count <= 4 and (n > 2 or f.count == 2)):
                        bad += 1
    ok = bad == 0
    print(report(5, ok, f"factor_unitriangular on {total} inputs incl. F2 and Z/6: {bad} failures, max {worst}"))
    assert ok


def test_criterion_06_companion():
    rng = random.Random(6)
    total, bad = 0, 0
    for ring in (QQ, HQ, GF(2), GF(5)):
        for convention in ("plain", "negated"):
            for n in (2, 3, 4, 5):
                for _ in range(10):
                    coeffs = [ring.random(rng, 2) for _ in range(n)]
                    if rng.random() < 0.3:
                        coeffs[0] = ring.zero
                    spec = CompanionSpec(tuple(coeffs), convention)
                    f = factor_companion(spec, ring)
                    total += 1
                    bad += not (f.verify() and f.count == 2 and f.product() == companion(spec, ring))
    Z6 = ZMod(6)
    ring_total, ring_bad = 0, 0
    for a0, a1 in itertools.product(Z6.elements(), repeat=2):
        spec = CompanionSpec((a0, a1))
        f = factor_companion(spec, Z6, ring_mode=True)
        ring_total += 1
        ring_bad += not (f.count == 4 and f.verify() and f.product() == companion(spec, Z6))
    ok = bad == 0 and ring_bad == 0
    print(report(6, ok, f"companion pairs exact on {total - bad}/{total}; "
                        f"Z/6 four-factor identity exact on {ring_total - ring_bad}/{ring_total}"))
    assert ok


class _NoInverse:
    """Makes every scalar inversion raise while active."""

    def __enter__(self):
        self.saved = (IntegerMod.inv, Quaternion.inverse, type(HQ).inv)

        def boom(*_a, **_k):
            raise AssertionError("inversion performed")

        IntegerMod.inv = boom
        Quaternion.inverse = boom
        type(HQ).inv = boom
        return self

    def __exit__(self, *exc):
        IntegerMod.inv, Quaternion.inverse, type(HQ).inv = self.saved
        return False


def test_criterion_07_sum_of_two_products():
    rng = random.Random(7)
    mats = [(ring, rand_matrix(ring, n, rng))
            for ring in (ZMod(6), HQ) for n in range(2, 6) for _ in range(SAMPLES_SUM2 // 4)]
    bad = 0
    with _NoInverse():
        results = [sum_two_products(A) for _, A in mats]
    for (_, A), r in zip(mats, results):
        parts = (r.B1, r.B2, r.C1, r.C2)
        bad += not (_traceless_all(parts) and r.B1 @ r.B2 + r.C1 @ r.C2 == A)
    ok = bad == 0
    print(report(7, ok, f"B1B2 + C1C2 exact on {len(mats) - bad}/{len(mats)} (Z/6, HQ; n=2..5), "
                        "inversion disabled"))
    assert ok


def test_criterion_08_semitraceless():
    rng = random.Random(8)
    bad, worst_inv, worst = 0, 0, 0
    for t in range(SAMPLES_SEMI):
        A = rand_matrix(HQ, 2 + t % 3, rng, rng.choice([0.3, 0.7, 1.0]))
        f = factor_semitraceless(A, seed=t)
        witnesses = all(g.witness.T.trace() == 0 and g.witness.P @ g.witness.T @ inverse(g.witness.P) == g.factor
                        for g in f.factors)
        prod_ok = product([g.factor for g in f.factors], HQ, A.nrows) == A
        inv = is_invertible(A)
        if inv:
            worst_inv = max(worst_inv, f.count)
        worst = max(worst, f.count)
        bad += not (witnesses and prod_ok and f.count <= (3 if inv else 4))
    ok = bad == 0
    print(report(8, ok, f"factor_semitraceless on {SAMPLES_SEMI} HQ inputs (n=2..4): {bad} failures, "
                        f"max {worst_inv} invertible / {worst} overall"))
    assert ok


def test_criterion_09_finitary_cases():
    rng = random.Random(9)
    seen = {1: 0, 2: 0, 3: 0}
    bad = 0
    for ring in (QQ, HQ, GF(3)):
        for _ in range(10):
            c = ring.from_int(rng.choice([1, 2]))
            cores = {
                1: companion(CompanionSpec(tuple(ring.random(rng, 2) for _ in range(3))), ring),
                2: block_diag([companion(CompanionSpec((-(c * c), c + c)), ring), Matrix(ring, [[c]])]),
                3: block_diag([companion(CompanionSpec((-(c * c), c + c)), ring), Matrix.diagonal(ring, [c, c])]),
            }
            for expected, core in cores.items():
                F = FinitaryMatrix.from_core(core)
                f = finitary_factor(F, seed=1)
                seen[f.notes["case"]] += 1
                k = F.support
                padded_ok = f.padded_size == (k + 1 if expected == 2 else k)
                bad += not (f.verify() and f.count == 2 and f.notes["case"] == expected and padded_ok)
    ok = bad == 0 and all(seen.values())
    print(report(9, ok, f"finitary_factor: exactly 2 verified factors, cases seen {seen}, {bad} failures"))
    assert ok


def test_criterion_10_invertible_nilpotent_split():
    rng = random.Random(10)
    total, bad = 0, 0
    for ring in (QQ, QQI, HQ):
        for t in range(SAMPLES_SPLIT):
            n = 2 + t % 3
            A = rand_singular(ring, n, rng)
            s = invertible_nilpotent_split(A)
            total += 1
            bad += not (s.G @ s.N == A and s.N.power(n).is_zero() and rank(s.G) == n)
    ok = bad == 0
    print(report(10, ok, f"G N = A, N^n = 0, rank G = n on {total - bad}/{total} singular matrices"))
    assert ok


def test_criterion_11_commutators():
    rng = random.Random(11)
    total, bad, worst = 0, 0, 0
    for ring in (QQ, HQ):
        for n in (2, 3):
            for _ in range(25):
                A = rand_matrix(ring, n, rng, rng.choice([0.4, 1.0]))
                ws = factor_commutators(A, seed=1)
                gs = factor_generalized_commutators(A, seed=1)
                total += 1
                worst = max(worst, len(ws), len(gs))
                bad += not (len(ws) <= 4 and len(gs) <= 4
                            and product([w.value for w in ws], ring, n) == A
                            and product([g.value for g in gs], ring, n) == A)
    single_ok = True
    for ring in (QQ, HQ):
        for n in (2, 3):
            A = rand_matrix(ring, n, rng, 1.0)
            A = A.replace(n - 1, n - 1, A[n - 1, n - 1] - A.trace())
            ws = factor_commutators(A)
            single_ok &= len(ws) == 1 and ws[0].value == A
    ok = bad == 0 and single_ok
    print(report(11, ok, f"commutator products exact on {total - bad}/{total}, max {worst} witnesses; "
                         f"traceless non-central gives one: {single_ok}"))
    assert ok


def test_criterion_12_pure_quaternion_products():
    rng = random.Random(12)
    worst_pure, worst_rel = 0.0, 0.0
    for _ in range(PURE_SAMPLES):
        a = FloatQuaternion(*(rng.uniform(-10, 10) for _ in range(4)))
        q1, q2 = quaternion_pure_product(a)
        worst_pure = max(worst_pure, abs(q1.r), abs(q2.r))
        worst_rel = max(worst_rel, abs(q1 * q2 - a) / abs(a))
    fj, fk = FloatQuaternion(0, 0, 1, 0), FloatQuaternion(0, 0, 0, 1)
    i1, i2 = quaternion_pure_product(FloatQuaternion(0, 1, 0, 0))
    o1, o2 = quaternion_pure_product(FloatQuaternion(1, 0, 0, 0))
    anchors = (abs(i1 - fj) < PURE_TOL and abs(i2 - fk) < PURE_TOL
               and abs(o1 - fj) < PURE_TOL and abs(o2 + fj) < PURE_TOL)
    ok = worst_pure <= PURE_TOL and worst_rel <= PURE_TOL and anchors
    print(report(12, ok, f"{PURE_SAMPLES} float quaternions: max |real part| {worst_pure:.1e}, "
                         f"max relative error {worst_rel:.1e}, anchors {'hold' if anchors else 'fail'}"))
    assert ok


def test_criterion_13_quaternion_counterexamples():
    P = Matrix(HQ, [[J_, 0], [I_, 1]])
    A = Matrix(HQ, [[I_, J_], [-J_, I_]])
    conj_ok = inverse(P) @ A @ P == Matrix(HQ, [[0, 1], [0, 0]])
    a, b = I_, J_
    S = Matrix.diagonal(HQ, [1, b])
    moved = S @ Matrix.diagonal(HQ, [a, -a]) @ inverse(S)
    trace_ok = moved.trace() != 0 and Matrix.diagonal(HQ, [a, -a]).trace() == 0
    nil_ok = is_nilpotent(A) and not is_traceless(A) and A.trace() == q(i=2)
    ok = conj_ok and trace_ok and nil_ok
    print(report(13, ok, f"conjugation gives E12: {conj_ok}; conjugated traceless diagonal has trace "
                         f"{moved.trace()}; nilpotent with trace 2i: {nil_ok}"))
    assert ok and K_ == I_ * J_


def test_criterion_14_certificate_integrity():
    rng = random.Random(14)
    docs = generate(rng)
    passing = sum(certify.verify(d).ok for d in docs)
    caught, math_caught = 0, 0
    for t in range(MUTATIONS):
        doc = docs[t % len(docs)]
        bad, _ = mutate(doc, rng)
        caught += not certify.verify(bad).ok
        resealed = certify.seal(bad)
        math_caught += not certify.verify(resealed).ok
    ok = passing == len(docs) and caught == MUTATIONS
    print(report(14, ok, f"{passing}/{len(docs)} generated certificates pass; {caught}/{MUTATIONS} "
                         f"single-entry mutations fail ({math_caught} also fail with a recomputed digest)"))
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
