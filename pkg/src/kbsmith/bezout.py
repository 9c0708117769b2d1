"""Extended GCD with minimal coefficients and the unimodular two-line
operations built on it: column/row Bezout mixes, column/row shears, and
pairwise divisor normalization of a diagonal.

Every mutator optionally appends an :class:`OperationRecord` to a log; the
record can rebuild its unimodular factor, so ``replay(log, original)``
reproduces the current matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .matrix import ExactMatrix, matrix_product, negate_col, negate_row, swap_cols, swap_rows


@dataclass(frozen=True)
class BezoutTriple:
    """a*p + b*q = r with r = gcd(a, b) > 0."""

    p: int
    q: int
    r: int
    a: int
    b: int

    @property
    def is_shear(self) -> bool:
        """True when a divides b: the mix degenerates to a column/row shear."""
        return self.p == (1 if self.a > 0 else -1) and self.q == 0


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def _plain_egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, rem = divmod(a, b)
        a, b = b, rem
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return x0, y0, a


def extended_gcd_minimal(a: int, b: int) -> BezoutTriple:
    """Bezout coefficients with |p| <= |b|/r and |q| < |a|/r.

    Degenerate cases are pinned so that the divisible case is a pure shear:
    ``b == 0`` or ``a | b`` gives ``(sign(a), 0, |a|)`` and ``a == 0`` gives
    ``(0, sign(b), |b|)``.  Among admissible pairs the smallest |p| wins, then
    the smallest |q|, then p >= 0, then q >= 0.
    """
    if a == 0 and b == 0:
        raise ValueError("extended_gcd_minimal(0, 0) is undefined")
    if a == 0:
        return BezoutTriple(0, _sign(b), abs(b), a, b)
    if b % a == 0:
        return BezoutTriple(_sign(a), 0, abs(a), a, b)
    p0, _, r = _plain_egcd(a, b)
    bb = abs(b) // r
    aa = abs(a) // r
    base = p0 % bb
    best = None
    for p in (base, base - bb, base + bb):
        if abs(p) > bb:
            continue
        num = r - a * p
        q = num // b
        if abs(q) >= aa:
            continue
        key = (abs(p), abs(q), p < 0, q < 0)
        if best is None or key < best[0]:
            best = (key, p, q)
    assert best is not None, (a, b)
    _, p, q = best
    return BezoutTriple(p, q, r, a, b)


# -- operation records --------------------------------------------------------

CB, RB, CO, RO = "CB", "RB", "CO", "RO"
SWAP_ROWS, SWAP_COLS, NEGATE_ROW, NEGATE_COL = "SwapRows", "SwapCols", "NegateRow", "NegateCol"
_RIGHT = {CB, CO, SWAP_COLS, NEGATE_COL}


@dataclass(frozen=True)
class OperationRecord:
    """One logged unimodular operation.

    ``params`` holds 1-based line indices followed by coefficients:
    CB/RB ``(i, j, p, q, c, d)`` meaning line_i <- p*line_i + q*line_j and
    line_j <- c*line_i + d*line_j; CO/RO ``(i, j, alpha)`` meaning
    line_j <- line_j - alpha*line_i; swaps ``(i, j)``; negations ``(i,)``.
    """

    kind: str
    params: tuple

    @property
    def side(self) -> str:
        return "right" if self.kind in _RIGHT else "left"

    def factor(self, size: int) -> ExactMatrix:
        """The unimodular matrix this record multiplies by (on its side)."""
        f = ExactMatrix.identity(size)
        rows = f.rows
        k = self.kind
        if k in (CB, RB):
            i, j, p, q, c, d = self.params
            i, j = i - 1, j - 1
            if k == CB:
                # right factor: column i of F holds (p, q), column j holds (c, d)
                rows[i][i], rows[j][i], rows[i][j], rows[j][j] = p, q, c, d
            else:
                rows[i][i], rows[i][j], rows[j][i], rows[j][j] = p, q, c, d
        elif k in (CO, RO):
            i, j, alpha = self.params
            if k == CO:
                rows[i - 1][j - 1] = -alpha
            else:
                rows[j - 1][i - 1] = -alpha
        elif k in (SWAP_ROWS, SWAP_COLS):
            i, j = self.params
            rows[i - 1], rows[j - 1] = rows[j - 1], rows[i - 1]
        elif k in (NEGATE_ROW, NEGATE_COL):
            (i,) = self.params
            rows[i - 1][i - 1] = -1
        else:
            raise ValueError(f"unknown operation kind {k!r}")
        return f


def replay(log: list[OperationRecord], original: ExactMatrix) -> ExactMatrix:
    """Rebuild every logged factor and apply it to ``original``."""
    cur = original.copy()
    for rec in log:
        if rec.side == "right":
            cur = matrix_product(cur, rec.factor(cur.ncols))
        else:
            cur = matrix_product(rec.factor(cur.nrows), cur)
    return cur


def _push(log: Optional[list], kind: str, *params: int) -> None:
    if log is not None:
        log.append(OperationRecord(kind, tuple(params)))


# -- in-place operations (1-based indices) -----------------------------------


def apply_column_bezout(
    m: ExactMatrix, i: int, j: int, t: BezoutTriple,
    log: Optional[list] = None, pivot_row: Optional[int] = None,
) -> None:
    """Right-multiply by CB: col_i <- p col_i + q col_j, col_j <- -(b/r) col_i + (a/r) col_j.

    ``t`` must come from a = m[pivot_row, i] and b = m[pivot_row, j]; afterwards
    m[pivot_row, i] == r and m[pivot_row, j] == 0.
    """
    if i == j:
        raise ValueError("column Bezout needs two distinct columns")
    pr = i if pivot_row is None else pivot_row
    ci, cj = i - 1, j - 1
    if not (0 <= ci < m.ncols and 0 <= cj < m.ncols):
        raise IndexError("column index out of range")
    assert m.rows[pr - 1][ci] == t.a and m.rows[pr - 1][cj] == t.b, "stale Bezout triple"
    p, q = t.p, t.q
    c, d = -t.b // t.r, t.a // t.r
    for row in m.rows:
        x, y = row[ci], row[cj]
        row[ci] = p * x + q * y
        row[cj] = c * x + d * y
    _push(log, CB, i, j, p, q, c, d)


def apply_row_bezout(
    m: ExactMatrix, i: int, j: int, t: BezoutTriple,
    log: Optional[list] = None, pivot_col: Optional[int] = None,
) -> None:
    """Left-multiply by RB: row_i <- p row_i + q row_j, row_j <- -(b/r) row_i + (a/r) row_j."""
    if i == j:
        raise ValueError("row Bezout needs two distinct rows")
    pc = i if pivot_col is None else pivot_col
    ri, rj = i - 1, j - 1
    if not (0 <= ri < m.nrows and 0 <= rj < m.nrows):
        raise IndexError("row index out of range")
    assert m.rows[ri][pc - 1] == t.a and m.rows[rj][pc - 1] == t.b, "stale Bezout triple"
    p, q = t.p, t.q
    c, d = -t.b // t.r, t.a // t.r
    x, y = m.rows[ri], m.rows[rj]
    m.rows[ri] = [p * u + q * v for u, v in zip(x, y)]
    m.rows[rj] = [c * u + d * v for u, v in zip(x, y)]
    _push(log, RB, i, j, p, q, c, d)


def column_shear(m: ExactMatrix, i: int, j: int, alpha: int, log: Optional[list] = None) -> None:
    """col_j <- col_j - alpha * col_i."""
    if i == j:
        raise ValueError("shear needs two distinct columns")
    ci, cj = i - 1, j - 1
    if not (0 <= ci < m.ncols and 0 <= cj < m.ncols):
        raise IndexError("column index out of range")
    if alpha:
        for row in m.rows:
            if row[ci]:
                row[cj] -= alpha * row[ci]
    _push(log, CO, i, j, alpha)


def row_shear(m: ExactMatrix, i: int, j: int, alpha: int, log: Optional[list] = None) -> None:
    """row_j <- row_j - alpha * row_i."""
    if i == j:
        raise ValueError("shear needs two distinct rows")
    ri, rj = i - 1, j - 1
    if not (0 <= ri < m.nrows and 0 <= rj < m.nrows):
        raise IndexError("row index out of range")
    if alpha:
        m.rows[rj] = [v - alpha * u for u, v in zip(m.rows[ri], m.rows[rj])]
    _push(log, RO, i, j, alpha)


def logged_swap_rows(m: ExactMatrix, i: int, j: int, log: Optional[list] = None) -> None:
    swap_rows(m, i, j)
    _push(log, SWAP_ROWS, i, j)


def logged_swap_cols(m: ExactMatrix, i: int, j: int, log: Optional[list] = None) -> None:
    swap_cols(m, i, j)
    _push(log, SWAP_COLS, i, j)


def logged_negate_row(m: ExactMatrix, i: int, log: Optional[list] = None) -> None:
    negate_row(m, i)
    _push(log, NEGATE_ROW, i)


def logged_negate_col(m: ExactMatrix, j: int, log: Optional[list] = None) -> None:
    negate_col(m, j)
    _push(log, NEGATE_COL, j)


def divisor_normalize_pair(m: ExactMatrix, i: int, j: int, log: Optional[list] = None) -> None:
    """Turn diagonal entries (a, b) at (i,i), (j,j) into (gcd, lcm).

    Three steps: a row shear copies b to (i, j), a column Bezout puts the gcd
    at (i, i), and a row shear clears the b*q left at (j, i).
    """
    if not i < j:
        raise ValueError("divisor_normalize_pair needs i < j")
    if not (1 <= i and j <= min(m.nrows, m.ncols)):
        raise IndexError("diagonal index out of range")
    ri, rj = i - 1, j - 1
    a, b = m.rows[ri][ri], m.rows[rj][rj]
    if a <= 0 or b <= 0:
        raise ValueError(f"divisor normalization needs positive entries, got ({a}, {b})")
    for r in (ri, rj):
        for c in (ri, rj):
            if r != c and m.rows[r][c]:
                raise ValueError("entries are not isolated on the diagonal")
        if any(m.rows[r][c] for c in range(m.ncols) if c not in (ri, rj)):
            raise ValueError("entries are not isolated on the diagonal")
    for c in (ri, rj):
        if any(m.rows[r][c] for r in range(m.nrows) if r not in (ri, rj)):
            raise ValueError("entries are not isolated on the diagonal")
    if b % a == 0:
        return
    row_shear(m, j, i, -1, log)
    t = extended_gcd_minimal(a, b)
    apply_column_bezout(m, i, j, t, log)
    row_shear(m, i, j, m.rows[rj][ri] // t.r, log)
