"""Plain-text matrix serialization: one row-major integer vector per line.

Lines of whitespace- or comma-separated integers round-trip bit-exactly;
'#' starts a comment, so enumeration headers never break a parser that just
wants the matrices.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .matrix import IntMatrix


class MatrixParseError(ValueError):
    """Malformed matrix line; message carries the line number when known."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class MatrixRecord:
    """One enumerated class as it appears on the wire."""

    n: int
    alpha: int
    beta: int
    positive: bool
    entries: tuple[int, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "alpha": self.alpha,
                "beta": self.beta,
                "positive": self.positive,
                "entries": list(self.entries),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "MatrixRecord":
        raw = json.loads(text)
        return cls(
            n=int(raw["n"]),
            alpha=int(raw["alpha"]),
            beta=int(raw["beta"]),
            positive=bool(raw["positive"]),
            entries=tuple(int(x) for x in raw["entries"]),
        )

    def matrix(self) -> IntMatrix:
        return IntMatrix(self.n, self.entries)


def format_matrix_line(m: IntMatrix) -> str:
    return " ".join(str(e) for e in m.entries)


def parse_matrix_line(
    text: str,
    *,
    line_no: int | None = None,
    expect_n: int | None = None,
    require_nonzero: bool = False,
) -> IntMatrix:
    """Parse one row-major vector into a square matrix.

    The dimension is inferred as the integer square root of the token count
    unless expect_n pins it.  Distinct diagnostics cover malformed tokens,
    non-square counts, and zero entries in zerofree contexts.
    """
    tokens = text.replace(",", " ").split()
    values = []
    for tok in tokens:
        try:
            values.append(int(tok))
        except ValueError:
            raise MatrixParseError(f"not an integer: {tok!r}", line_no) from None
    if not values:
        raise MatrixParseError("empty matrix line", line_no)
    if expect_n is not None:
        n = expect_n
        if len(values) != n * n:
            raise MatrixParseError(
                f"expected {n * n} entries for n={n}, got {len(values)}", line_no
            )
    else:
        n = math.isqrt(len(values))
        if n * n != len(values):
            raise MatrixParseError(
                f"{len(values)} entries do not form a square matrix", line_no
            )
    if require_nonzero and 0 in values:
        raise MatrixParseError("zero entry in a zerofree context", line_no)
    return IntMatrix(n, tuple(values))


def iter_matrix_lines(lines, *, expect_n: int | None = None, require_nonzero: bool = False):
    """Yield (line_no, IntMatrix) for every non-comment, non-blank line."""
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield line_no, parse_matrix_line(
            stripped, line_no=line_no, expect_n=expect_n, require_nonzero=require_nonzero
        )
