"""Plain-text formats for algebras and ternary tables.

Algebra file::

    # comment
    algebra NDT4
    size 4
    op mul 2
    0 2 1 3
    ...
    end

Table file: a header ``dtable <name> <n>`` followed by ``n**3`` integers in
index order ``x*n*n + y*n + z``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import FiniteAlgebra
from .errors import MalformedAlgebraError, ParseError
from .tables import TernaryTable

FIXTURES = ("ndt4", "sl2", "mal2", "set2")


def _tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for tok in line.split():
            yield lineno, tok


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected {what}, got {tok!r}", lineno) from None


def parse_algebra(text: str) -> FiniteAlgebra:
    toks = list(_tokens(text))
    pos = 0

    def take(expect: str | None = None):
        nonlocal pos
        if pos >= len(toks):
            last = toks[-1][0] if toks else 1
            raise ParseError(f"unexpected end of input, expected {expect or 'more tokens'}", last)
        lineno, tok = toks[pos]
        pos += 1
        if expect is not None and tok != expect:
            raise ParseError(f"expected {expect!r}, got {tok!r}", lineno)
        return lineno, tok

    take("algebra")
    _, name = take()
    take("size")
    lineno, tok = take()
    size = _int(tok, lineno, "a universe size")
    if size < 1:
        raise ParseError(f"size must be at least 1, got {size}", lineno)
    ops = []
    names = set()
    while True:
        lineno, tok = take()
        if tok == "end":
            break
        if tok != "op":
            raise ParseError(f"expected 'op' or 'end', got {tok!r}", lineno)
        op_line = lineno
        _, op_name = take()
        if op_name in names:
            raise ParseError(f"duplicate operation name {op_name!r}", op_line)
        names.add(op_name)
        lineno, tok = take()
        arity = _int(tok, lineno, "an arity")
        if arity < 0:
            raise ParseError(f"negative arity {arity}", lineno)
        want = size**arity
        entries = []
        while len(entries) < want:
            if pos >= len(toks) or toks[pos][1] in ("op", "end"):
                where = toks[pos][0] if pos < len(toks) else op_line
                raise ParseError(
                    f"operation {op_name}: expected {want} entries, got {len(entries)}", where
                )
            lineno, tok = take()
            value = _int(tok, lineno, "a table entry")
            if not 0 <= value < size:
                raise ParseError(f"operation {op_name}: entry {value} outside [0, {size})", lineno)
            entries.append(value)
        if pos < len(toks) and toks[pos][1] not in ("op", "end"):
            raise ParseError(
                f"operation {op_name}: expected {want} entries, got more", toks[pos][0]
            )
        ops.append((op_name, arity, entries))
    if pos < len(toks):
        raise ParseError(f"trailing input after 'end': {toks[pos][1]!r}", toks[pos][0])
    try:
        return FiniteAlgebra(name, size, ops)
    except MalformedAlgebraError as exc:
        raise ParseError(str(exc)) from None


def format_algebra(algebra: FiniteAlgebra) -> str:
    n = algebra.size
    lines = [f"algebra {algebra.name}", f"size {n}"]
    for op in algebra.operations:
        lines.append(f"op {op.name} {op.arity}")
        flat = op.entries
        width = n if op.arity else 1
        for i in range(0, len(flat), width):
            lines.append(" ".join(map(str, flat[i : i + width])))
    lines.append("end")
    return "\n".join(lines) + "\n"


def read_algebra(path) -> FiniteAlgebra:
    return parse_algebra(Path(path).read_text())


def parse_table(text: str) -> tuple[str, TernaryTable]:
    toks = list(_tokens(text))
    if len(toks) < 3 or toks[0][1] != "dtable":
        raise ParseError("expected header 'dtable <name> <n>'", toks[0][0] if toks else 1)
    name = toks[1][1]
    n = _int(toks[2][1], toks[2][0], "a table size")
    if n < 1:
        raise ParseError(f"table size must be at least 1, got {n}", toks[2][0])
    body = toks[3:]
    if len(body) != n**3:
        raise ParseError(f"expected {n ** 3} entries, got {len(body)}", body[-1][0] if body else toks[2][0])
    values = []
    for lineno, tok in body:
        v = _int(tok, lineno, "a table entry")
        if not 0 <= v < n:
            raise ParseError(f"entry {v} outside [0, {n})", lineno)
        values.append(v)
    return name, TernaryTable(values, n)


def format_table(name: str, table: TernaryTable) -> str:
    n = table.size
    flat = table.entries()
    lines = [f"dtable {name} {n}"]
    for i in range(0, len(flat), n):
        lines.append(" ".join(map(str, flat[i : i + n])))
    return "\n".join(lines) + "\n"


def read_table(path) -> tuple[str, TernaryTable]:
    return parse_table(Path(path).read_text())


def fixture_path(name: str) -> Path:
    return Path(__file__).parent / "data" / f"{name.lower()}.alg"


def load_fixture(name: str) -> FiniteAlgebra:
    """One of the bundled algebras: ``ndt4``, ``sl2``, ``mal2``, ``set2``."""
    return read_algebra(fixture_path(name))


@dataclass
class ReportRecord:
    """One command's outcome, printed between ``=== report`` and ``=== end`` lines."""

    command: str
    digest: str
    verdict: str
    certificate: str | None = None
    elapsed: float | None = None
    details: list[str] = field(default_factory=list)

    def render(self) -> str:
        if self.verdict == "no" and not self.certificate:
            raise ValueError("a 'no' verdict must carry a certificate")
        lines = [
            f"=== report {self.command}",
            f"input: sha256:{self.digest}",
            f"verdict: {self.verdict}",
            f"certificate: {self.certificate or '-'}",
        ]
        lines += [f"result: {d}" for d in self.details]
        lines.append("elapsed: -" if self.elapsed is None else f"elapsed: {self.elapsed:.3f}s")
        lines.append("=== end")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "ReportRecord":
        lines = [ln for ln in text.splitlines() if ln]
        if not lines or not lines[0].startswith("=== report ") or lines[-1] != "=== end":
            raise ParseError("not a report record")
        fields: dict[str, list[str]] = {}
        for ln in lines[1:-1]:
            key, _, value = ln.partition(": ")
            fields.setdefault(key, []).append(value)
        elapsed = fields["elapsed"][0]
        cert = fields["certificate"][0]
        return cls(
            command=lines[0][len("=== report "):],
            digest=fields["input"][0].removeprefix("sha256:"),
            verdict=fields["verdict"][0],
            certificate=None if cert == "-" else cert,
            elapsed=None if elapsed == "-" else float(elapsed.rstrip("s")),
            details=fields.get("result", []),
        )


def digest(*blobs: bytes) -> str:
    h = hashlib.sha256()
    for b in blobs:
        h.update(b)
    return h.hexdigest()
