"""JSON documents for matrices and factorization certificates, and their independent checker.

Certificates are checked with matrix arithmetic, rank and the companion
layout only; nothing stored in a certificate is trusted.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field

from .bounds import BOUNDS
from .elimination import rank
from .errors import DimensionMismatch, ParseError, RingMismatch
from .matrix import (
    CompanionSpec,
    Matrix,
    block_diag,
    companion,
    is_diagonal,
    is_unitriangular,
    permutation_of,
)
from .scalars import ring_from_tag

FORMAT = "tracefac-certificate/1"
# strategies whose factor count is exact rather than an upper bound
EXACT = {"diagonal", "companion", "companion-ring", "finitary", "pair", "triple", "permutation"}
KINDS = ("traceless", "semitraceless", "bruhat", "rcf", "commutators", "generalized", "sum2prod")


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


def emit_rows(M: Matrix) -> list:
    return [[M.ring.encode(x) for x in row] for row in M.rows]


def parse_rows(ring, rows, where="rows") -> Matrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{where}: expected a non-empty list of rows")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise ParseError(f"{where}: rows are not rectangular")
    out = []
    for i, row in enumerate(rows):
        vals = []
        for j, x in enumerate(row):
            try:
                vals.append(ring.decode(x))
            except ParseError as exc:
                raise ParseError(f"{where}[{i}][{j}]: {exc}") from None
        out.append(vals)
    return Matrix(ring, out)


def emit_matrix(M: Matrix, finitary: bool = False) -> dict:
    doc = {"ring": M.ring.tag, "rows": emit_rows(M)}
    if finitary:
        doc["finitary"] = True
        doc["support"] = M.nrows
    return doc


@dataclass(frozen=True)
class MatrixDocument:
    matrix: Matrix
    finitary: bool = False
    support: int | None = None


def parse_matrix(doc, expected_ring=None) -> MatrixDocument:
    if not isinstance(doc, dict):
        raise ParseError("matrix document must be an object")
    if "ring" not in doc or "rows" not in doc:
        raise ParseError("matrix document needs 'ring' and 'rows'")
    ring = ring_from_tag(doc["ring"])
    if expected_ring is not None and ring != expected_ring:
        raise RingMismatch(f"expected ring {expected_ring.tag}, got {ring.tag}")
    M = parse_rows(ring, doc["rows"])
    finitary = bool(doc.get("finitary", False))
    support = doc.get("support")
    if support is not None:
        if not isinstance(support, int) or support < 1:
            raise ParseError("support must be a positive integer")
        if support > M.nrows:
            M = block_diag([M, Matrix.zeros(ring, support - M.nrows)]) if M.is_square() else M
    return MatrixDocument(M, finitary, support)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", position=exc.pos) from None


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def digest(doc: dict) -> str:
    body = {k: v for k, v in doc.items() if k != "digest"}
    return hashlib.sha256(json.dumps(body, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def seal(doc: dict) -> dict:
    doc = dict(doc)
    doc["digest"] = digest(doc)
    return doc


def _base(kind, operation, source, strategy, seed, count, bound, **extra):
    doc = {
        "format": FORMAT,
        "kind": kind,
        "operation": operation,
        "ring": source.ring.tag,
        "source": emit_rows(source),
        "strategy": strategy,
        "seed": seed,
        "count": count,
        "bound": bound,
        "status": "PASS",
    }
    doc.update(extra)
    return doc


def certificate_for(operation: str, result, seed: int = 0) -> dict:
    """Certificate document for the result of one of the factoring operations."""
    if operation in ("factor_general", "factor_2x2", "factor_field", "factor_unitriangular",
                     "factor_diagonal", "factor_companion", "factor_permutation"):
        doc = _base("traceless", operation, result.source, result.strategy, seed,
                    result.count, result.bound,
                    factors=[emit_rows(F) for F in result.factors],
                    notes=_clean_notes(result.notes))
    elif operation in ("factor_semitraceless", "finitary_factor", "factor_semitraceless_subfield"):
        extra = {"notes": _clean_notes(result.notes)}
        if result.padded_size is not None:
            extra["padded_size"] = result.padded_size
        doc = _base("semitraceless", operation, result.source, result.strategy, seed,
                    result.count, result.bound,
                    factors=[{"factor": emit_rows(f.factor), "P": emit_rows(f.witness.P),
                              "T": emit_rows(f.witness.T)} for f in result.factors],
                    **extra)
    elif operation == "bruhat":
        doc = _base("bruhat", operation, result.product(), "bruhat", seed, 4, 4,
                    factors={"L": emit_rows(result.L), "P": emit_rows(result.P),
                             "H": emit_rows(result.H), "U": emit_rows(result.U)})
    elif operation == "rcf":
        source, form = result
        enc = source.ring.encode
        doc = _base("rcf", operation, source, "cyclic-vectors", seed, len(form.blocks),
                    source.nrows,
                    factors={"blocks": [[enc(x) for x in b.last_column()] for b in form.blocks],
                             "P": emit_rows(form.witness.P)})
    elif operation in ("factor_commutators", "factor_generalized_commutators"):
        source, witnesses = result
        if operation == "factor_commutators":
            kind = "commutators"
            items = [{"X": emit_rows(w.X), "Y": emit_rows(w.Y)} for w in witnesses]
        else:
            kind = "generalized"
            items = [{"a": emit_rows(w.a), "b": emit_rows(w.b), "c": emit_rows(w.c)}
                     for w in witnesses]
        doc = _base(kind, operation, source, kind, seed, len(items), BOUNDS[kind], factors=items)
    elif operation == "sum_two_products":
        doc = _base("sum2prod", operation, result.source, "sum2prod", seed, 4, BOUNDS["sum2prod"],
                    factors={k: emit_rows(getattr(result, k)) for k in ("B1", "B2", "C1", "C2")})
    else:
        raise ValueError(f"unknown operation {operation!r}")
    return seal(doc)


def _clean_notes(notes):
    out = {}
    for k, v in (notes or {}).items():
        if isinstance(v, (str, int, bool)) or v is None:
            out[k] = v
        elif isinstance(v, dict):
            out[k] = {str(a): b for a, b in v.items()}
        else:
            out[k] = str(v)
    return out


@dataclass
class Report:
    ok: bool = True
    failures: list = field(default_factory=list)
    checks: int = 0

    def check(self, cond, where, message):
        self.checks += 1
        if not cond:
            self.ok = False
            self.failures.append(f"{where}: {message}")
        return cond

    def render(self):
        head = "PASS" if self.ok else "FAIL"
        lines = [f"{head} ({self.checks} checks)"]
        lines.extend("  " + f for f in self.failures)
        return "\n".join(lines)


def _product(mats, ring, n):
    out = Matrix.identity(ring, n)
    for M in mats:
        out = out @ M
    return out


def _square_of(M, n):
    return M.shape == (n, n)


def verify(doc: dict) -> Report:
    """Recompute every claim of a certificate."""
    rep = Report()
    try:
        _verify_into(doc, rep)
    except (ParseError, RingMismatch, DimensionMismatch, KeyError, TypeError, ValueError) as exc:
        rep.check(False, "document", f"{type(exc).__name__}: {exc}")
    return rep


def _verify_into(doc, rep: Report):
    if not rep.check(isinstance(doc, dict), "document", "not an object"):
        return
    rep.check(doc.get("format") == FORMAT, "format", f"unexpected format {doc.get('format')!r}")
    kind = doc.get("kind")
    if not rep.check(kind in KINDS, "kind", f"unknown kind {kind!r}"):
        return
    ring = ring_from_tag(doc["ring"])
    source = parse_rows(ring, doc["source"], "source")
    n = source.nrows
    rep.check(source.is_square(), "source", "not square")
    parse = lambda rows, where: parse_rows(ring, rows, where)  # noqa: E731
    bound = doc.get("bound")
    strategy = doc.get("strategy")
    table = BOUNDS.get(strategy)
    if kind in ("traceless", "semitraceless") and table is not None:
        rep.check(bound is not None and bound <= table, "bound",
                  f"claimed bound {bound} exceeds the table value {table} for {strategy}")
        if strategy in EXACT:
            rep.check(len(doc.get("factors", ())) == table, "count",
                      f"{strategy} factorizations have exactly {table} factors")

    if kind == "traceless":
        mats = [parse(F, f"factors[{i}]") for i, F in enumerate(doc["factors"])]
        for i, F in enumerate(mats):
            rep.check(_square_of(F, n), f"factors[{i}]", "wrong shape")
            rep.check(not F.trace(), f"factors[{i}]", "trace is not zero")
        _check_count(rep, doc, len(mats))
        if all(_square_of(F, n) for F in mats):
            rep.check(_product(mats, ring, n) == source, "product", "factors do not multiply to the source")
    elif kind == "semitraceless":
        size = doc.get("padded_size", n)
        rep.check(isinstance(size, int) and size >= n, "padded_size", "smaller than the source")
        target = source if size == n else block_diag([source, Matrix.zeros(ring, size - n)])
        mats = []
        for i, item in enumerate(doc["factors"]):
            F = parse(item["factor"], f"factors[{i}].factor")
            P = parse(item["P"], f"factors[{i}].P")
            T = parse(item["T"], f"factors[{i}].T")
            mats.append(F)
            if not all(_square_of(M, size) for M in (F, P, T)):
                rep.check(False, f"factors[{i}]", "wrong shape")
                continue
            rep.check(not T.trace(), f"factors[{i}].T", "trace is not zero")
            rep.check(rank(P) == size, f"factors[{i}].P", "witness is not invertible")
            rep.check(P @ T == F @ P, f"factors[{i}]", "witness does not conjugate to the factor")
        _check_count(rep, doc, len(mats))
        if all(_square_of(F, size) for F in mats):
            rep.check(_product(mats, ring, size) == target, "product",
                      "factors do not multiply to the source")
    elif kind == "bruhat":
        f = doc["factors"]
        L, P, H, U = (parse(f[k], k) for k in "LPHU")
        rep.check(is_unitriangular(L, "lower"), "L", "not lower unitriangular")
        rep.check(is_unitriangular(U, "upper"), "U", "not upper unitriangular")
        rep.check(permutation_of(P) is not None, "P", "not a permutation matrix")
        rep.check(is_diagonal(H), "H", "not diagonal")
        rep.check(L @ P @ H @ U == source, "product", "L P H U differs from the source")
    elif kind == "rcf":
        f = doc["factors"]
        blocks = [CompanionSpec(tuple(ring.decode(x) for x in b)) for b in f["blocks"]]
        P = parse(f["P"], "P")
        sizes = [b.size for b in blocks]
        rep.check(sum(sizes) == n, "blocks", "block sizes do not add up")
        rep.check(sizes == sorted(sizes, reverse=True), "blocks", "blocks not in descending size")
        _check_count(rep, doc, len(blocks))
        if sum(sizes) == n and _square_of(P, n):
            T = block_diag([companion(b, ring) for b in blocks])
            rep.check(rank(P) == n, "P", "witness is not invertible")
            rep.check(source @ P == P @ T, "witness", "P^-1 A P is not the companion sum")
    elif kind in ("commutators", "generalized"):
        vals = []
        for i, item in enumerate(doc["factors"]):
            if kind == "commutators":
                X, Y = parse(item["X"], f"factors[{i}].X"), parse(item["Y"], f"factors[{i}].Y")
                ok = _square_of(X, n) and _square_of(Y, n)
                v = X @ Y - Y @ X if ok else None
            else:
                a, b, c = (parse(item[k], f"factors[{i}].{k}") for k in "abc")
                ok = all(_square_of(M, n) for M in (a, b, c))
                v = a @ b @ c - c @ b @ a if ok else None
            rep.check(ok, f"factors[{i}]", "wrong shape")
            vals.append(v)
        rep.check(len(vals) <= BOUNDS[kind], "count", f"more than {BOUNDS[kind]} witnesses")
        _check_count(rep, doc, len(vals))
        if all(v is not None for v in vals):
            rep.check(_product(vals, ring, n) == source, "product", "values do not multiply to the source")
    elif kind == "sum2prod":
        f = doc["factors"]
        B1, B2, C1, C2 = (parse(f[k], k) for k in ("B1", "B2", "C1", "C2"))
        for name, M in zip(("B1", "B2", "C1", "C2"), (B1, B2, C1, C2)):
            rep.check(_square_of(M, n), name, "wrong shape")
            rep.check(not M.trace(), name, "trace is not zero")
        rep.check(B1 @ B2 + C1 @ C2 == source, "sum", "B1 B2 + C1 C2 differs from the source")
    rep.check(doc.get("digest") == digest(doc), "digest", "content does not match the recorded digest")


def _check_count(rep, doc, actual):
    rep.check(doc.get("count") == actual, "count", f"claims {doc.get('count')} but lists {actual}")
    bound = doc.get("bound")
    if isinstance(bound, int):
        rep.check(actual <= bound, "count", f"{actual} factors exceed the bound {bound}")
