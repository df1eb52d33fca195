"""Plain-text matrix files.

    symtridiag n          densesym n
    d_1 ... d_n           a_11 ... a_1n
    e_1 ... e_(n-1)       ...
                          a_n1 ... a_nn

Entries are written with 17 significant digits, so a write/read round trip
reproduces every float exactly.
"""
import math
from typing import List, Optional, Union

import torch

from tridc.core.matrix import DenseSym, SymTridiag
from tridc.errors import ParseError
from tridc.globals import DTYPE

Matrix = Union[SymTridiag, DenseSym]

HEADER_TRIDIAG = "symtridiag"
HEADER_DENSE = "densesym"


def _fmt(values) -> str:
    return " ".join("%.17g" % v for v in values.tolist())


def format_matrix(matrix: Matrix) -> str:
    if isinstance(matrix, SymTridiag):
        lines = [f"{HEADER_TRIDIAG} {matrix.n}", _fmt(matrix.diag), _fmt(matrix.offdiag)]
    elif isinstance(matrix, DenseSym):
        lines = [f"{HEADER_DENSE} {matrix.n}"] + [_fmt(row) for row in matrix.entries]
    else:
        raise TypeError(f"cannot format {type(matrix).__name__}")
    return "\n".join(lines) + "\n"


def _parse_row(line: str, count: int, lineno: int, path: Optional[str]) -> List[float]:
    tokens = line.split()
    if len(tokens) != count:
        raise ParseError(f"expected {count} entries, found {len(tokens)}", path, lineno)
    values = []
    for tok in tokens:
        try:
            v = float(tok)
        except ValueError:
            raise ParseError(f"not a number: {tok!r}", path, lineno) from None
        if not math.isfinite(v):
            raise ParseError(f"non-finite entry: {tok!r}", path, lineno)
        values.append(v)
    return values


def parse_matrix(text: str, path: Optional[str] = None) -> Matrix:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty matrix file", path, 1)

    header = lines[0].split()
    if len(header) != 2 or header[0] not in (HEADER_TRIDIAG, HEADER_DENSE):
        raise ParseError(
            f"header must be '{HEADER_TRIDIAG} n' or '{HEADER_DENSE} n', got {lines[0]!r}", path, 1
        )
    try:
        n = int(header[1])
    except ValueError:
        raise ParseError(f"order is not an integer: {header[1]!r}", path, 1) from None
    if n < 1:
        raise ParseError(f"order must be positive, got {n}", path, 1)

    if header[0] == HEADER_TRIDIAG:
        expected = [n, n - 1]
    else:
        expected = [n] * n
    body = lines[1:]
    if len(body) > len(expected):
        raise ParseError("unexpected trailing content", path, len(expected) + 2)
    # a 1x1 tridiagonal file may omit its empty off-diagonal line
    if len(body) < len(expected) and not (header[0] == HEADER_TRIDIAG and n == 1 and len(body) == 1):
        raise ParseError(f"expected {len(expected)} data lines, found {len(body)}", path, len(lines) + 1)

    rows = [_parse_row(line, count, i + 2, path) for i, (line, count) in enumerate(zip(body, expected))]
    if header[0] == HEADER_TRIDIAG:
        off = rows[1] if len(rows) > 1 else []
        return SymTridiag(torch.tensor(rows[0], dtype=DTYPE), torch.tensor(off, dtype=DTYPE))
    return DenseSym(torch.tensor(rows, dtype=DTYPE))


def read_matrix(path: str) -> Matrix:
    with open(path, "r", encoding="utf-8") as f:
        try:
            text = f.read()
        except UnicodeDecodeError as e:
            raise ParseError(f"not valid UTF-8 text: {e.reason} at byte {e.start}", path) from e
    return parse_matrix(text, path)


def write_matrix(matrix: Matrix, path: str) -> None:
    with open(path, "w") as f:
        f.write(format_matrix(matrix))
