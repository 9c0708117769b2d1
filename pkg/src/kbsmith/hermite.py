"""Hermite reductions in Kannan-Bachem order, generalized to rectangular
matrices of any rank.

HNF-1 is column-style: right multiplications (column Bezout mixes and
shears) produce a lower triangle of rank k over an arbitrary rectangle; row
swaps are allowed to bring a nonzero pivot into place, so for rank-deficient
input the result is a Hermite form only in that extended sense.  HNF-2 is
the exact transpose mirror.

Internally both run one kernel over *lines*: the columns of the matrix for
HNF-1 and its rows for HNF-2.  A "position" is an index inside a line.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .bezout import (
    CB, CO, NEGATE_COL, NEGATE_ROW, RB, RO, SWAP_COLS, SWAP_ROWS,
    OperationRecord, extended_gcd_minimal,
)
from .matrix import ExactMatrix, mean_digits


class BudgetExhausted(RuntimeError):
    """A reduction ran out of its operation or time budget.

    ``diagnostics`` carries what was observed when it stopped: elementary
    operation count, elapsed seconds, mean digit count of the entries below
    the diagonal and how many diagonal columns had been finished.
    """

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


class _Budget:
    __slots__ = ("max_ops", "deadline", "ops", "t0")

    def __init__(self, max_ops: Optional[int] = None, max_seconds: Optional[float] = None):
        self.max_ops = max_ops
        self.t0 = time.perf_counter()
        self.deadline = None if max_seconds is None else self.t0 + max_seconds
        self.ops = 0

    def tick(self, n: int = 1) -> None:
        self.ops += n
        if self.max_ops is not None and self.ops > self.max_ops:
            raise _OutOfBudget(f"operation budget of {self.max_ops} exhausted")
        if self.deadline is not None and (self.ops & 7) == 0 \
                and time.perf_counter() > self.deadline:
            raise _OutOfBudget("time budget exhausted")

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.t0


class _OutOfBudget(Exception):
    pass


class _Side:
    """Accumulated unimodular transform on one side of the matrix.

    ``fwd`` lines follow every line operation exactly as the matrix lines
    do; ``inv`` lines hold the inverse transform and follow the inverse
    operation.  For the right transform u these are the columns of u and
    the rows of u^-1; for the left transform v the rows of v and the
    columns of v^-1.
    """

    __slots__ = ("fwd", "inv")

    def __init__(self, n: int, track_fwd: bool = True, track_inv: bool = False):
        self.fwd = _identity_lines(n) if track_fwd else None
        self.inv = _identity_lines(n) if track_inv else None

    def combine(self, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
        # L_i <- a L_i + b L_j,  L_j <- c L_i + d L_j,  with ad - bc = 1
        f = self.fwd
        if f is not None:
            x, y = f[i], f[j]
            f[i] = [a * u + b * v for u, v in zip(x, y)]
            f[j] = [c * u + d * v for u, v in zip(x, y)]
        g = self.inv
        if g is not None:
            x, y = g[i], g[j]
            g[i] = [d * u - c * v for u, v in zip(x, y)]
            g[j] = [a * v - b * u for u, v in zip(x, y)]

    def shear(self, src: int, dst: int, f: int) -> None:
        # L_dst <- L_dst - f L_src
        fw = self.fwd
        if fw is not None:
            fw[dst] = [y - f * x for x, y in zip(fw[src], fw[dst])]
        g = self.inv
        if g is not None:
            g[src] = [x + f * y for x, y in zip(g[src], g[dst])]

    def swap(self, i: int, j: int) -> None:
        for ls in (self.fwd, self.inv):
            if ls is not None:
                ls[i], ls[j] = ls[j], ls[i]

    def negate(self, i: int) -> None:
        for ls in (self.fwd, self.inv):
            if ls is not None:
                ls[i] = [-x for x in ls[i]]


def _identity_lines(n: int) -> list[list[int]]:
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        out[i][i] = 1
    return out


def _last_nonzero(line: list[int]) -> int:
    for k in range(len(line) - 1, -1, -1):
        if line[k]:
            return k
    return -1


def transpose_lines(lines: list[list[int]], length: int) -> list[list[int]]:
    if not lines:
        return [[] for _ in range(length)]
    return [list(t) for t in zip(*lines)] if length else []


class Engine:
    """Mutable reduction state shared by the Hermite and Smith drivers.

    The matrix is held as a list of lines.  In orientation 1 the lines are
    the columns (line operations are column operations, positions are rows);
    in orientation 2 they are the rows.  ``u_side`` and ``v_side`` are the
    right and left transforms, or None when not tracked.
    """

    def __init__(self, m: ExactMatrix, orientation: int = 1, *,
                 transforms: bool = False, inverses: bool = False,
                 log: bool = False, budget: Optional[_Budget] = None):
        self.nrows, self.ncols = m.nrows, m.ncols
        self.orientation = 1
        self.lines = m.columns()
        if transforms or inverses:
            self.u_side = _Side(m.ncols, transforms, inverses)
            self.v_side = _Side(m.nrows, transforms, inverses)
        else:
            self.u_side = self.v_side = None
        self.log: Optional[list] = [] if log else None
        self.budget = budget or _Budget()
        self.set_orientation(orientation)

    # -- orientation ----------------------------------------------------------

    @property
    def npos(self) -> int:
        return self.nrows if self.orientation == 1 else self.ncols

    @property
    def line_side(self) -> Optional[_Side]:
        return self.u_side if self.orientation == 1 else self.v_side

    @property
    def pos_side(self) -> Optional[_Side]:
        return self.v_side if self.orientation == 1 else self.u_side

    def set_orientation(self, orientation: int) -> None:
        if orientation not in (1, 2):
            raise ValueError("orientation must be 1 or 2")
        if orientation != self.orientation:
            self.lines = transpose_lines(self.lines, self.npos)
            self.orientation = orientation
        nlines = len(self.lines)
        # positions at or past ext are zero in every line; line operations
        # keep it that way, so they only touch [r:ext]
        self.ext = max((_last_nonzero(line) + 1 for line in self.lines), default=0)
        self._clock = 0
        self._mod = [0] * nlines
        self._red = [-1] * self.npos
        self._red_piv = [None] * self.npos

    def matrix(self) -> ExactMatrix:
        if self.orientation == 1:
            return ExactMatrix.from_columns(self.lines, self.nrows)
        if not self.lines:
            return ExactMatrix.zeros(0, self.ncols)
        return ExactMatrix.from_rows(self.lines)

    def is_diagonal(self) -> bool:
        for idx, line in enumerate(self.lines):
            if any(line[:idx]) or any(line[idx + 1:]):
                return False
        return True

    def diagonal(self) -> list[int]:
        return [self.lines[i][i] for i in range(min(len(self.lines), self.npos))]

    def below_diagonal_digits(self) -> float:
        """Mean digit count of nonzero entries strictly below the diagonal (HNF-1 view)."""
        if self.orientation == 1:
            return mean_digits(line[c + 1:] for c, line in enumerate(self.lines))
        return mean_digits(line[:r] for r, line in enumerate(self.lines))

    # -- logging helpers ------------------------------------------------------

    def _record(self, kind: str, *params: int) -> None:
        self.log.append(OperationRecord(kind, params))

    def _line_kinds(self) -> tuple[str, str, str, str]:
        # (mix, shear, swap, negate) for line ops in the current orientation
        if self.orientation == 1:
            return CB, CO, SWAP_COLS, NEGATE_COL
        return RB, RO, SWAP_ROWS, NEGATE_ROW

    def _pos_kinds(self) -> tuple[str, str, str]:
        if self.orientation == 1:
            return RB, RO, SWAP_ROWS
        return CB, CO, SWAP_COLS

    def _touch(self, *idx: int) -> None:
        self._clock += 1
        for c in idx:
            self._mod[c] = self._clock

    # -- line operations ------------------------------------------------------

    def cancel(self, r: int, i: int) -> bool:
        """Zero position r of line i using the pivot at (r, r) of line r.

        Both lines are zero above position r (KB order guarantees it), so
        only the tails from r on are touched.  Returns True when the pivot
        changed (a genuine Bezout mix rather than a shear).
        """
        lines = self.lines
        lr, li = lines[r], lines[i]
        a, b = lr[r], li[r]
        e = self.ext
        self.budget.tick()
        if b % a == 0:
            f = b // a
            li[r:e] = [y - f * x if x else y for x, y in zip(lr[r:e], li[r:e])]
            side = self.line_side
            if side is not None:
                side.shear(r, i, f)
            if self.log is not None:
                self._record(self._line_kinds()[1], r + 1, i + 1, f)
            self._touch(i)
            return False
        t = extended_gcd_minimal(a, b)
        p, q = t.p, t.q
        c, d = -b // t.r, a // t.r
        xs, ys = lr[r:e], li[r:e]
        lr[r:e] = [p * x + q * y for x, y in zip(xs, ys)]
        li[r:e] = [c * x + d * y for x, y in zip(xs, ys)]
        side = self.line_side
        if side is not None:
            side.combine(r, i, p, q, c, d)
        if self.log is not None:
            self._record(self._line_kinds()[0], r + 1, i + 1, p, q, c, d)
        self._touch(r, i)
        assert li[r] == 0 and lr[r] == t.r > 0
        return True

    def reduce_left(self, r: int, start: int) -> None:
        """Bring every entry of pivot row r left of the diagonal into [0, e_rr)."""
        if r <= start:
            return
        lines = self.lines
        lr = lines[r]
        piv = lr[r]
        if self._red_piv[r] == piv and self._red[r] >= max(self._mod[start:r]):
            return
        side = self.line_side
        shear_kind = self._line_kinds()[1]
        e = self.ext
        tail = lr[r:e]
        for c in range(start, r):
            lc = lines[c]
            x = lc[r]
            if x < 0 or x >= piv:
                f = x // piv
                lc[r:e] = [y - f * z if z else y for z, y in zip(tail, lc[r:e])]
                if side is not None:
                    side.shear(r, c, f)
                if self.log is not None:
                    self._record(shear_kind, r + 1, c + 1, f)
                self.budget.tick()
                self._touch(c)
        self._red[r] = self._clock
        self._red_piv[r] = piv

    def swap_lines(self, i: int, j: int) -> None:
        lines = self.lines
        lines[i], lines[j] = lines[j], lines[i]
        if self.line_side is not None:
            self.line_side.swap(i, j)
        if self.log is not None:
            self._record(self._line_kinds()[2], i + 1, j + 1)
        self._touch(i, j)

    def negate_line(self, i: int) -> None:
        self.lines[i] = [-x for x in self.lines[i]]
        if self.line_side is not None:
            self.line_side.negate(i)
        if self.log is not None:
            self._record(self._line_kinds()[3], i + 1)
        self._touch(i)

    # -- position operations (rows in orientation 1) ---------------------------

    def swap_positions(self, i: int, j: int) -> None:
        for line in self.lines:
            line[i], line[j] = line[j], line[i]
        if self.pos_side is not None:
            self.pos_side.swap(i, j)
        if self.log is not None:
            self._record(self._pos_kinds()[2], i + 1, j + 1)
        self._red[i] = self._red[j] = -1
        self._clock += 1
        if max(i, j) >= self.ext:
            self.ext = max(_last_nonzero(line) for line in self.lines) + 1

    def mix_positions(self, i: int, j: int, lo: int, hi: int) -> bool:
        """Zero position j of line i against the pivot at position i.

        Works on lines lo..hi-1 only (the caller guarantees positions i and
        j vanish elsewhere).  Returns True when the pivot changed.
        """
        lines = self.lines
        a, b = lines[i][i], lines[i][j]
        self.budget.tick()
        if b % a == 0:
            f = b // a
            for c in range(lo, hi):
                line = lines[c]
                x = line[i]
                if x:
                    line[j] -= f * x
            if self.pos_side is not None:
                self.pos_side.shear(i, j, f)
            if self.log is not None:
                self._record(self._pos_kinds()[1], i + 1, j + 1, f)
            self._clock += 1
            self._red[j] = -1
            return False
        t = extended_gcd_minimal(a, b)
        p, q = t.p, t.q
        c_, d = -b // t.r, a // t.r
        for c in range(lo, hi):
            line = lines[c]
            x, y = line[i], line[j]
            if x or y:
                line[i] = p * x + q * y
                line[j] = c_ * x + d * y
        if self.pos_side is not None:
            self.pos_side.combine(i, j, p, q, c_, d)
        if self.log is not None:
            self._record(self._pos_kinds()[0], i + 1, j + 1, p, q, c_, d)
        self._clock += 1
        self._red[i] = self._red[j] = -1
        return True

    def shear_position(self, src: int, dst: int, f: int, nz: list[tuple[int, int]]) -> None:
        """position dst <- dst - f * src on the lines listed in ``nz`` as (line, value_at_src)."""
        lines = self.lines
        for c, v in nz:
            lines[c][dst] -= f * v
        if dst >= self.ext and nz:
            self.ext = dst + 1
        if self.pos_side is not None:
            self.pos_side.shear(src, dst, f)
        if self.log is not None:
            self._record(self._pos_kinds()[1], src + 1, dst + 1, f)
        self.budget.tick()
        self._clock += 1
        self._red[dst] = -1

    # -- the Hermite pass ---------------------------------------------------------

    def hermite_pass(self, start: int = 0) -> int:
        """One KB-ordered Hermite reduction of the block from ``start`` on.

        Lines and positions before ``start`` must already be split off (zero
        outside the diagonal).  Returns the rank found.
        """
        lines = self.lines
        npos = self.npos
        nlines = len(lines)
        i = start
        rank = None
        while i < nlines:
            top = min(i, npos)
            for r in range(start, top):
                if lines[i][r]:
                    self.cancel(r, i)
                    self.reduce_left(r, start)
            if i >= npos:
                # every position has a pivot: this line is now null
                i += 1
                continue
            li = lines[i]
            if li[i] == 0:
                j = next((p for p in range(i + 1, self.ext) if li[p]), None)
                if j is not None:
                    self.swap_positions(i, j)
                else:
                    j = next((c for c in range(i + 1, nlines) if any(lines[c])), None)
                    if j is None:
                        rank = i
                        break
                    self.swap_lines(i, j)
                    continue
            if lines[i][i] < 0:
                self.negate_line(i)
            i += 1
        if rank is None:
            rank = min(nlines, npos)
        for r in range(start + 1, rank):
            self.reduce_left(r, start)
        return rank


def kb_cancel_order(n: int) -> list[tuple[int, int]]:
    """Positions above the diagonal in Kannan-Bachem order (1-based)."""
    if n < 1:
        raise ValueError("n must be positive")
    return [(i, j) for j in range(2, n + 1) for i in range(1, j)]


@dataclass
class HermiteResult:
    matrix: ExactMatrix
    rank: int
    style: int
    op_log: Optional[list] = None
    left_transform: Optional[ExactMatrix] = None
    right_transform: Optional[ExactMatrix] = None
    elapsed: float = field(default=0.0, repr=False)


def _hermite(m: ExactMatrix, style: int, with_transforms: bool, log: bool) -> HermiteResult:
    eng = Engine(m, style, transforms=with_transforms, log=log)
    t0 = time.perf_counter()
    rank = eng.hermite_pass()
    elapsed = time.perf_counter() - t0
    left = right = None
    if with_transforms:
        left = ExactMatrix.from_rows(eng.v_side.fwd) if m.nrows else ExactMatrix.zeros(0, 0)
        right = ExactMatrix.from_columns(eng.u_side.fwd, m.ncols)
    return HermiteResult(eng.matrix(), rank, style, eng.log, left, right, elapsed)


def hnf1(m: ExactMatrix, with_transforms: bool = False, log: bool = False) -> HermiteResult:
    """Column-style reduction: lower triangle of rank k above a rectangle.

    With transforms, ``left @ m @ right == result.matrix``; ``left`` only
    records row swaps.
    """
    return _hermite(m, 1, with_transforms, log)


def hnf2(m: ExactMatrix, with_transforms: bool = False, log: bool = False) -> HermiteResult:
    """Row-style reduction, the transpose mirror of :func:`hnf1`."""
    return _hermite(m, 2, with_transforms, log)
