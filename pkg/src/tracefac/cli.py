"""Command-line front end: ``tracefac factor|verify|oracle|bench``."""

from __future__ import annotations

import argparse
import os
import random
import sys
import time

from . import certify
from .canonical import rcf
from .elimination import bruhat
from .errors import AlgebraError
from .matrix import Matrix
from .oracles import SUITES, run_suite
from .polyimage import factor_commutators, factor_generalized_commutators
from .scalars import ring_from_tag
from .semitraceless import FinitaryMatrix, factor_semitraceless, finitary_factor
from .traceless import factor_2x2, factor_field, factor_general, sum_two_products

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

KINDS = ("traceless", "semitraceless", "2x2", "field", "finitary", "commutators",
         "generalized", "sum2prod", "bruhat", "rcf")


def default_seed() -> int:
    raw = os.environ.get("TRACEFAC_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"TRACEFAC_SEED must be an integer, got {raw!r}") from None


def _u64(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_certificate(kind: str, mdoc: certify.MatrixDocument, seed: int) -> dict:
    A = mdoc.matrix
    if kind == "traceless":
        return certify.certificate_for("factor_general", factor_general(A), seed)
    if kind == "2x2":
        return certify.certificate_for("factor_2x2", factor_2x2(A), seed)
    if kind == "field":
        return certify.certificate_for("factor_field", factor_field(A, seed), seed)
    if kind == "semitraceless":
        return certify.certificate_for("factor_semitraceless", factor_semitraceless(A, seed), seed)
    if kind == "finitary":
        F = FinitaryMatrix.from_core(A)
        return certify.certificate_for("finitary_factor", finitary_factor(F, seed), seed)
    if kind == "commutators":
        return certify.certificate_for("factor_commutators", (A, factor_commutators(A, seed)), seed)
    if kind == "generalized":
        ws = factor_generalized_commutators(A, seed)
        return certify.certificate_for("factor_generalized_commutators", (A, ws), seed)
    if kind == "sum2prod":
        return certify.certificate_for("sum_two_products", sum_two_products(A), seed)
    if kind == "bruhat":
        return certify.certificate_for("bruhat", bruhat(A), seed)
    if kind == "rcf":
        return certify.certificate_for("rcf", (A, rcf(A, seed)), seed)
    raise ValueError(f"unknown kind {kind!r}")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_factor(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    try:
        mdoc = certify.parse_matrix(certify.loads(_read(args.inp)))
        doc = build_certificate(args.kind, mdoc, seed)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AlgebraError, TypeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = certify.dumps(doc)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        certify.write_atomic(args.out, text)
        print(f"{doc['kind']} certificate: {doc['count']} parts (bound {doc['bound']}) -> {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        doc = certify.loads(_read(args.cert))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AlgebraError as exc:
        print(f"FAIL\n  document: {exc}")
        return EXIT_FAIL
    report = certify.verify(doc)
    print(report.render())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    result = run_suite(args.suite)
    print(result.render())
    return EXIT_OK if result.ok else EXIT_FAIL


def _int_list(text):
    try:
        vals = [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("sizes must be positive")
    return vals


def _ring_list(text):
    try:
        return [ring_from_tag(t) for t in text.split(",") if t]
    except AlgebraError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_bench(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    rng = random.Random(seed)
    failed = False
    for ring in args.rings:
        for n in args.sizes:
            worst, t0 = 0, time.perf_counter()
            for _ in range(args.samples):
                A = Matrix.from_function(ring, n, n, lambda i, j: ring.random(rng))
                fact = factor_general(A)
                ok = fact.verify()
                failed |= not ok
                worst = max(worst, fact.count)
            dt = time.perf_counter() - t0
            print(f"{ring.tag:>6} n={n}  samples={args.samples}  max factors={worst}  "
                  f"{dt:.3f}s  {'ok' if not failed else 'FAILED'}")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tracefac", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("factor", help="factor a matrix document and write a certificate")
    f.add_argument("--kind", required=True, choices=KINDS)
    f.add_argument("--in", dest="inp", required=True, help="matrix JSON, or - for stdin")
    f.add_argument("--out", help="certificate path; stdout when omitted")
    f.add_argument("--seed", type=_u64, help="defaults to $TRACEFAC_SEED or 0")
    f.set_defaults(func=cmd_factor)

    v = sub.add_parser("verify", help="re-check a certificate from scratch")
    v.add_argument("--cert", required=True)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="run an exhaustive small-ring suite")
    o.add_argument("--suite", required=True, choices=sorted(SUITES))
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="time factor_general on random matrices")
    b.add_argument("--sizes", type=_int_list, default=[2, 3, 4])
    b.add_argument("--rings", type=_ring_list, default=[ring_from_tag(t) for t in ("Q", "Qi", "HQ")])
    b.add_argument("--samples", type=int, default=20)
    b.add_argument("--seed", type=_u64)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except SystemExit as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
