"""Command-line interface.

Exit codes: 0 for a positive verdict or success, 1 for a negative verdict,
2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .algebra import FiniteAlgebra
from .commutator import commutator_fast, commutator_matrices
from .congruence import all_congruences, principal_congruence
from .construct import build_dt_table, verify_dt_table
from .decision import has_dto, variety_has_dt_local, variety_has_dt_pentagon
from .errors import (
    MalformedAlgebraError,
    NotIdempotentError,
    ParseError,
    PreconditionError,
)
from .io import ReportRecord, digest, format_table, parse_algebra, parse_table
from .partition import Partition
from .tct import type_one_witness

EXIT_YES, EXIT_NO, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _load(path: str) -> tuple[FiniteAlgebra, bytes]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_algebra(raw.decode()), raw
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _require_idempotent(algebra: FiniteAlgebra) -> None:
    if not algebra.is_idempotent():
        raise UsageError(f"{algebra.name} is not idempotent")


def _verdict(ok: bool) -> str:
    return "yes" if ok else "no"


def cmd_check(args):
    algebra, raw = _load(args.file)
    details = [f"{algebra.name}: size {algebra.size}, operations {', '.join(f'{o.name}/{o.arity}' for o in algebra.operations) or '-'}"]
    cert = None
    for op in algebra.operations:
        bad = next((x for x in range(algebra.size) if op.table[(x,) * op.arity] != x), None)
        if bad is not None:
            cert = f"{op.name}({','.join([str(bad)] * op.arity)}) = {op.table[(bad,) * op.arity]}"
            break
    return ReportRecord("check", digest(raw), _verdict(cert is None), cert, details=details)


def cmd_omits_type1(args):
    algebra, raw = _load(args.file)
    _require_idempotent(algebra)
    w = type_one_witness(algebra)
    return ReportRecord("omits-type1", digest(raw), _verdict(w is None), w.describe() if w else None)


def cmd_has_dto(args):
    algebra, raw = _load(args.file)
    _require_idempotent(algebra)
    v = has_dto(algebra)
    details = []
    if v and args.witness:
        table = build_dt_table(algebra)
        Path(args.witness).write_text(format_table(algebra.name, table))
        details.append(f"difference term operation table written to {args.witness}")
    return ReportRecord("has-dto", digest(raw), _verdict(v.answer), _describe(v.certificate), details=details)


def _describe(cert) -> str | None:
    return None if cert is None else cert.describe()


def cmd_variety_dt(args):
    algebra, raw = _load(args.file)
    _require_idempotent(algebra)
    runs = {}
    if args.method in ("local", "both"):
        runs["local"] = variety_has_dt_local(algebra)
    if args.method in ("pentagon", "both"):
        runs["pentagon"] = variety_has_dt_pentagon(algebra)
    answers = {v.answer for v in runs.values()}
    if len(answers) > 1:
        raise RuntimeError(
            "methods disagree: " + ", ".join(f"{k}={_verdict(v.answer)}" for k, v in runs.items())
        )
    answer = answers.pop()
    details = [f"{k}: {_verdict(v.answer)}" for k, v in runs.items()]
    cert = None
    if not answer:
        cert = " | ".join(f"{k}: {v.certificate.describe()}" for k, v in runs.items())
    return ReportRecord(f"variety-dt --method {args.method}", digest(raw), _verdict(answer), cert, details=details)


def cmd_build_dt(args):
    algebra, raw = _load(args.file)
    _require_idempotent(algebra)
    v = has_dto(algebra)
    if not v:
        return ReportRecord("build-dt", digest(raw), "no", v.certificate.describe())
    table = build_dt_table(algebra)
    Path(args.output).write_text(format_table(algebra.name, table))
    return ReportRecord("build-dt", digest(raw), "yes", details=[f"table written to {args.output}"])


def cmd_verify_dt(args):
    algebra, raw = _load(args.file)
    try:
        table_raw = Path(args.table).read_bytes()
        _, table = parse_table(table_raw.decode())
    except OSError as exc:
        raise UsageError(f"cannot read {args.table}: {exc.strerror}") from None
    except ParseError as exc:
        raise UsageError(f"{args.table}: {exc}") from None
    if table.size != algebra.size:
        raise UsageError(f"table has size {table.size}, algebra has size {algebra.size}")
    _require_idempotent(algebra)
    res = verify_dt_table(algebra, table)
    cert = None
    if not res:
        a, b = res.violation
        cert = f"violation at (a,b) = ({a},{b}): {res.clause} fails"
    return ReportRecord("verify-dt", digest(raw, table_raw), _verdict(res.ok), cert)


def _element(algebra: FiniteAlgebra, text: str) -> int:
    try:
        x = int(text)
    except ValueError:
        raise UsageError(f"not an element: {text!r}") from None
    if not 0 <= x < algebra.size:
        raise UsageError(f"element {x} outside [0, {algebra.size})")
    return x


def cmd_cg(args):
    algebra, raw = _load(args.file)
    a, b = _element(algebra, args.a), _element(algebra, args.b)
    theta = principal_congruence(algebra, a, b)
    return ReportRecord(f"cg {a} {b}", digest(raw), "ok", details=[str(theta)])


def cmd_con(args):
    algebra, raw = _load(args.file)
    cons = all_congruences(algebra)
    details = [f"{len(cons)} congruences"] + [str(c) for c in cons]
    return ReportRecord("con", digest(raw), "ok", details=details)


def _partition(algebra: FiniteAlgebra, text: str) -> Partition:
    try:
        return Partition.parse(text, algebra.size)
    except ValueError as exc:
        raise UsageError(f"bad partition {text!r}: {exc}") from None


def cmd_commutator(args):
    algebra, raw = _load(args.file)
    alpha, beta = _partition(algebra, args.alpha), _partition(algebra, args.beta)
    try:
        if args.method == "fast":
            if alpha != beta:
                raise UsageError("--method fast computes [beta,beta] only; pass equal --alpha and --beta")
            if not algebra.is_idempotent() or type_one_witness(algebra) is not None:
                raise UsageError("--method fast needs an idempotent algebra omitting type 1")
            result = commutator_fast(algebra, alpha, beta, taylor=True)
        else:
            result = commutator_matrices(algebra, alpha, beta)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    return ReportRecord(
        f"commutator --method {args.method}",
        digest(raw, f"{alpha} {beta}".encode()),
        "ok",
        details=[f"[{alpha},{beta}] = {result}"],
    )


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diffterm", description="Difference terms of finite idempotent algebras.")
    p.add_argument("--no-elapsed", action="store_true", help="omit timing so reports are byte-for-byte reproducible")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file", help="algebra file")
        sp.set_defaults(func=func)
        return sp

    add("check", cmd_check, "validate an algebra file and test idempotence")
    add("omits-type1", cmd_omits_type1, "does the generated variety omit type 1")
    sp = add("has-dto", cmd_has_dto, "does the algebra have a difference term operation")
    sp.add_argument("--witness", metavar="OUT", help="on success, write a difference term operation table")
    sp = add("variety-dt", cmd_variety_dt, "does the generated variety have a difference term")
    sp.add_argument("--method", choices=("local", "pentagon", "both"), default="local")
    sp = add("build-dt", cmd_build_dt, "construct a difference term operation table")
    sp.add_argument("-o", "--output", required=True, metavar="TABLE")
    sp = add("verify-dt", cmd_verify_dt, "check a table against the difference term conditions")
    sp.add_argument("table", help="table file")
    sp = add("cg", cmd_cg, "principal congruence Cg(a,b)")
    sp.add_argument("a")
    sp.add_argument("b")
    add("con", cmd_con, "all congruences")
    sp = add("commutator", cmd_commutator, "commutator of two congruences")
    sp.add_argument("--alpha", required=True, metavar="PARTITION", help="e.g. '|0,1|2|3|'")
    sp.add_argument("--beta", required=True, metavar="PARTITION")
    sp.add_argument("--method", choices=("matrices", "fast"), default="matrices")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        start = time.perf_counter()
        record = args.func(args)
        if not args.no_elapsed:
            record.elapsed = time.perf_counter() - start
    except UsageError as exc:
        print(f"diffterm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotIdempotentError, MalformedAlgebraError, RuntimeError) as exc:
        print(f"diffterm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(record.render())
    if record.verdict == "no":
        return EXIT_NO
    return EXIT_YES


if __name__ == "__main__":
    sys.exit(main())
