"""Text matrix files.

Sparse form (what the writer emits)::

    R C M
    i j v        one line per nonzero entry, 1-based, row-major order
    0 0 0        terminator

Dense form (accepted on read)::

    R C D
    R lines of C whitespace-separated integers
"""
from __future__ import annotations

import io
import os
import re
from typing import IO, Iterator, Union

import gmpy2

from .matrix import ExactMatrix

# CPython refuses int<->str conversion past a few thousand digits; gmpy2 has no
# such limit and is faster on long inputs anyway.
_LONG = 3000
_INT_RE = re.compile(r"-?[0-9]+\Z")

PathOrStream = Union[str, "os.PathLike[str]", IO[str]]


class MatrixFormatError(ValueError):
    """Malformed matrix file; ``lineno`` is 1-based (0 when unknown)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


def _numbered_lines(stream: IO[str]) -> Iterator[tuple[int, list[str]]]:
    for lineno, line in enumerate(stream, start=1):
        fields = line.split()
        if fields:
            yield lineno, fields


def _int(token: str, lineno: int) -> int:
    if not _INT_RE.match(token):
        raise MatrixFormatError(f"not an integer: {token!r}", lineno)
    if len(token) > _LONG:
        return int(gmpy2.mpz(token, 10))
    return int(token, 10)


def _parse(stream: IO[str]) -> ExactMatrix:
    lines = _numbered_lines(stream)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise MatrixFormatError("empty file") from None
    if len(header) != 3 or header[2] not in ("M", "D"):
        raise MatrixFormatError("header must be 'R C M' or 'R C D'", lineno)
    nrows, ncols = _int(header[0], lineno), _int(header[1], lineno)
    if nrows < 0 or ncols < 0:
        raise MatrixFormatError("negative dimension", lineno)
    m = ExactMatrix.zeros(nrows, ncols)

    if header[2] == "D":
        for r in range(nrows):
            try:
                lineno, fields = next(lines)
            except StopIteration:
                raise MatrixFormatError(
                    f"truncated dense matrix: {r} of {nrows} rows read", lineno) from None
            if len(fields) != ncols:
                raise MatrixFormatError(f"expected {ncols} entries, got {len(fields)}", lineno)
            m.rows[r] = [_int(t, lineno) for t in fields]
        extra = next(lines, None)
        if extra is not None:
            raise MatrixFormatError("trailing data after dense matrix", extra[0])
        return m

    seen = set()
    for lineno, fields in lines:
        if len(fields) != 3:
            raise MatrixFormatError("expected 'i j v'", lineno)
        i, j, v = (_int(t, lineno) for t in fields)
        if i == 0 and j == 0 and v == 0:
            extra = next(lines, None)
            if extra is not None:
                raise MatrixFormatError("data after terminator", extra[0])
            return m
        if not (1 <= i <= nrows and 1 <= j <= ncols):
            raise MatrixFormatError(
                f"entry ({i},{j}) outside declared {nrows}x{ncols} bounds", lineno)
        if (i, j) in seen:
            raise MatrixFormatError(f"duplicate entry ({i},{j})", lineno)
        seen.add((i, j))
        m.rows[i - 1][j - 1] = v
    raise MatrixFormatError("missing '0 0 0' terminator (truncated file?)", lineno if seen else 1)


def read_matrix(source: PathOrStream) -> ExactMatrix:
    if hasattr(source, "read"):
        return _parse(source)  # type: ignore[arg-type]
    with open(source, encoding="ascii") as fh:
        return _parse(fh)


def format_int(v: int) -> str:
    if v.bit_length() > 3 * _LONG:
        return gmpy2.mpz(v).digits(10)
    return str(v)


def _emit(m: ExactMatrix, out: IO[str]) -> None:
    out.write(f"{m.nrows} {m.ncols} M\n")
    for i, row in enumerate(m.rows, start=1):
        for j, v in enumerate(row, start=1):
            if v:
                out.write(f"{i} {j} {format_int(v)}\n")
    out.write("0 0 0\n")


def write_matrix(m: ExactMatrix, target: PathOrStream) -> None:
    if hasattr(target, "write"):
        _emit(m, target)  # type: ignore[arg-type]
        return
    with open(target, "w", encoding="ascii", newline="\n") as fh:
        _emit(m, fh)


def dumps(m: ExactMatrix) -> str:
    buf = io.StringIO()
    _emit(m, buf)
    return buf.getvalue()


def loads(text: str) -> ExactMatrix:
    return _parse(io.StringIO(text))
