"""Dense exact integer matrices and the brute-force oracles used in tests.

Entries are plain Python ints, so there is no precision limit.  All public
index arguments are 1-based, matching the usual e_{i,j} notation; the raw
``rows`` attribute is an ordinary 0-based list of lists.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence


class ExactMatrix:
    """Rectangular matrix of arbitrary-precision integers, stored row-major."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, entries: Iterable[int]):
        entries = [int(x) for x in entries]
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(entries) != nrows * ncols:
            raise ValueError(
                f"expected {nrows * ncols} entries for a {nrows}x{ncols} matrix, "
                f"got {len(entries)}"
            )
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [entries[r * ncols:(r + 1) * ncols] for r in range(nrows)]

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int) -> "ExactMatrix":
        if not cols or not nrows:
            return cls.zeros(nrows, len(cols))
        return cls.from_rows([list(r) for r in zip(*cols)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "ExactMatrix":
        return cls(nrows, ncols, [0] * (nrows * ncols))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        m = cls.zeros(n, n)
        for i in range(n):
            m.rows[i][i] = 1
        return m

    @classmethod
    def diagonal_matrix(cls, nrows: int, ncols: int, diag: Sequence[int]) -> "ExactMatrix":
        if len(diag) > min(nrows, ncols):
            raise ValueError("diagonal longer than min(rows, cols)")
        m = cls.zeros(nrows, ncols)
        for i, d in enumerate(diag):
            m.rows[i][i] = int(d)
        return m

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def _check(self, i: int, j: int) -> None:
        if not (1 <= i <= self.nrows and 1 <= j <= self.ncols):
            raise IndexError(f"entry ({i},{j}) outside {self.nrows}x{self.ncols} matrix")

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        self._check(i, j)
        return self.rows[i - 1][j - 1]

    def __setitem__(self, ij: tuple[int, int], value: int) -> None:
        i, j = ij
        self._check(i, j)
        self.rows[i - 1][j - 1] = int(value)

    def entries(self) -> list[int]:
        return [x for r in self.rows for x in r]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def columns(self) -> list[list[int]]:
        if self.ncols == 0:
            return []
        if self.nrows == 0:
            return [[] for _ in range(self.ncols)]
        return [list(c) for c in zip(*self.rows)]

    def diagonal(self) -> list[int]:
        return [self.rows[i][i] for i in range(min(self.nrows, self.ncols))]

    def copy(self) -> "ExactMatrix":
        out = ExactMatrix.__new__(ExactMatrix)
        out.nrows, out.ncols = self.nrows, self.ncols
        out.rows = [list(r) for r in self.rows]
        return out

    def transpose(self) -> "ExactMatrix":
        if not self.nrows or not self.ncols:
            return ExactMatrix.zeros(self.ncols, self.nrows)
        return ExactMatrix.from_rows([list(c) for c in zip(*self.rows)])

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def is_diagonal(self) -> bool:
        for i, r in enumerate(self.rows):
            if any(r[:i]) or any(r[i + 1:]):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return matrix_product(self, other)

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}, {self.ncols}, {self.rows!r})"

    def __str__(self) -> str:
        if not self.nrows or not self.ncols:
            return f"<{self.nrows}x{self.ncols} matrix>"
        width = max(len(str(x)) for r in self.rows for x in r)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in self.rows)


def new_matrix(rows: int, cols: int, entries: Iterable[int]) -> ExactMatrix:
    """Build a ``rows x cols`` matrix from row-major ``entries`` (copied)."""
    return ExactMatrix(rows, cols, entries)


# -- elementary structural operations (1-based, in place) -----------------


def _row_index(m: ExactMatrix, i: int) -> int:
    if not 1 <= i <= m.nrows:
        raise IndexError(f"row {i} out of range 1..{m.nrows}")
    return i - 1


def _col_index(m: ExactMatrix, j: int) -> int:
    if not 1 <= j <= m.ncols:
        raise IndexError(f"column {j} out of range 1..{m.ncols}")
    return j - 1


def swap_rows(m: ExactMatrix, i: int, j: int) -> None:
    a, b = _row_index(m, i), _row_index(m, j)
    if a == b:
        raise ValueError("swap_rows needs two distinct rows")
    m.rows[a], m.rows[b] = m.rows[b], m.rows[a]


def swap_cols(m: ExactMatrix, i: int, j: int) -> None:
    a, b = _col_index(m, i), _col_index(m, j)
    if a == b:
        raise ValueError("swap_cols needs two distinct columns")
    for r in m.rows:
        r[a], r[b] = r[b], r[a]


def negate_row(m: ExactMatrix, i: int) -> None:
    a = _row_index(m, i)
    m.rows[a] = [-x for x in m.rows[a]]


def negate_col(m: ExactMatrix, j: int) -> None:
    b = _col_index(m, j)
    for r in m.rows:
        r[b] = -r[b]


def matrix_product(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact product ``a @ b``."""
    if a.ncols != b.nrows:
        raise ValueError(f"cannot multiply {a.nrows}x{a.ncols} by {b.nrows}x{b.ncols}")
    out = ExactMatrix.zeros(a.nrows, b.ncols)
    brows = b.rows
    for i, arow in enumerate(a.rows):
        acc = [0] * b.ncols
        for k, x in enumerate(arow):
            if x:
                acc = [s + x * y for s, y in zip(acc, brows[k])]
        out.rows[i] = acc
    return out


# -- oracles ----------------------------------------------------------------


def _bareiss(rows: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination on a scratch copy.  Returns (rank, signed
    last nonzero leading minor); the second value is the determinant when the
    matrix is square and nonsingular."""
    a = [list(r) for r in rows]
    n = len(a)
    m = len(a[0]) if n else 0
    prev = 1
    sign = 1
    rank = 0
    col = 0
    while rank < n and col < m:
        piv = next((r for r in range(rank, n) if a[r][col]), None)
        if piv is None:
            col += 1
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
            sign = -sign
        p = a[rank][col]
        for r in range(rank + 1, n):
            x = a[r][col]
            row_r, row_p = a[r], a[rank]
            for c in range(col + 1, m):
                row_r[c] = (p * row_r[c] - x * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
        col += 1
    return rank, sign * prev


def determinant(m: ExactMatrix) -> int:
    """Exact determinant of a square matrix (Bareiss)."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    if m.nrows == 0:
        return 1
    rank, d = _bareiss(m.rows)
    return d if rank == m.nrows else 0


def rank_oracle(m: ExactMatrix) -> int:
    """Rank over the rationals, by fraction-free elimination."""
    if not m.nrows or not m.ncols:
        return 0
    return _bareiss(m.rows)[0]


def minor_gcd_oracle(m: ExactMatrix, k: int) -> int:
    """GCD of the determinants of all k x k submatrices (0 if they all vanish).

    Combinatorial cost; meant for small matrices.  Stops early once the
    running GCD reaches 1.
    """
    if not 0 <= k <= min(m.nrows, m.ncols):
        raise ValueError(f"minor size {k} out of range for {m.nrows}x{m.ncols} matrix")
    if k == 0:
        return 1
    g = 0
    rows = m.rows
    for rsel in combinations(range(m.nrows), k):
        sub_rows = [rows[r] for r in rsel]
        for csel in combinations(range(m.ncols), k):
            sub = [[r[c] for c in csel] for r in sub_rows]
            rk, d = _bareiss(sub)
            if rk == k:
                g = gcd(g, d)
                if g == 1:
                    return 1
    return g


def density_stats(m: ExactMatrix) -> tuple[Fraction, Fraction]:
    """(fraction of zero entries, mean absolute value of the nonzero entries)."""
    total = m.nrows * m.ncols
    if total == 0:
        return Fraction(1), Fraction(0)
    nz = [abs(x) for r in m.rows for x in r if x]
    null_fraction = Fraction(total - len(nz), total)
    mean = Fraction(sum(nz), len(nz)) if nz else Fraction(0)
    return null_fraction, mean


def mean_digits(lines: Iterable[Sequence[int]]) -> float:
    """Average decimal digit count of the nonzero entries (diagnostics only)."""
    count = 0
    bits = 0
    for line in lines:
        for x in line:
            if x:
                count += 1
                bits += abs(x).bit_length()
    # log10(2) per bit; exact digit counts would cost a str() per entry
    return 0.0 if not count else bits * 0.30102999566398120 / count + 1.0
