"""Smith reduction by three organizations of the Kannan-Bachem algorithm.

* KB1 - one HNF-1, then diagonal positions are cleared one at a time: row
  Bezout mixes empty the column under the pivot, HNF-1 repairs the fill-in
  on the pivot row, repeat until both are clear.
* KB2 - KB1 plus, after each finished column, row shears that bring every
  entry under a remaining pivot into [0, pivot).  This keeps the rows below
  the triangle from growing without bound.
* KB3 - HNF-1, HNF-2, HNF-1, ... until a pass returns a diagonal matrix.

All three end with divisor normalization, and with ``with_transforms`` they
return unimodular u, v such that ``s == v @ d @ u``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb, gcd, prod
from typing import Callable, Iterator, Optional, Sequence, Union

from .bezout import (
    divisor_normalize_pair, extended_gcd_minimal, logged_negate_col, logged_swap_cols,
    logged_swap_rows,
)
from .hermite import BudgetExhausted, Engine, _Budget, _OutOfBudget
from .matrix import ExactMatrix, determinant, matrix_product, minor_gcd_oracle

KB1, KB2, KB3 = "kb1", "kb2", "kb3"
VARIANTS = (KB1, KB2, KB3)
DEFAULT_KB1_OPS = 10**8


# -- run-length form -----------------------------------------------------------


@dataclass(frozen=True)
class RunLengthDiagonal:
    """Invariant factors grouped as (multiplicity, value) runs."""

    runs: tuple[tuple[int, int], ...]
    rank: int
    total_slots: int

    def render(self) -> str:
        return "(" + " ".join(f"({n} * {v})" for n, v in self.runs) + ")"

    def values(self) -> list[int]:
        return [v for n, v in self.runs for _ in range(n)]

    def __str__(self) -> str:
        return self.render()


def _check_canonical(diag: Sequence[int]) -> int:
    k = 0
    while k < len(diag) and diag[k] != 0:
        k += 1
    if any(diag[k:]):
        raise ValueError("zero invariant before a nonzero one")
    for i in range(k):
        if diag[i] < 0:
            raise ValueError(f"negative invariant {diag[i]}")
        if i + 1 < k and diag[i + 1] % diag[i]:
            raise ValueError(f"divisor condition fails: {diag[i]} does not divide {diag[i + 1]}")
    return k


def run_length(source: Union["SmithDecomposition", ExactMatrix, Sequence[int]]) -> RunLengthDiagonal:
    """Group a canonical Smith diagonal into runs.

    >>> run_length([1, 1, 2]).render()
    '((2 * 1) (1 * 2))'
    """
    if isinstance(source, SmithDecomposition):
        source = source.s
    if isinstance(source, ExactMatrix):
        if not source.is_diagonal():
            raise ValueError("matrix is not diagonal")
        diag = source.diagonal()
    else:
        diag = list(source)
    k = _check_canonical(diag)
    runs: list[tuple[int, int]] = []
    for v in diag[:k]:
        if runs and runs[-1][1] == v:
            runs[-1] = (runs[-1][0] + 1, v)
        else:
            runs.append((1, v))
    return RunLengthDiagonal(tuple(runs), k, len(diag))


# -- results -------------------------------------------------------------------------


@dataclass
class SmithStats:
    hnf_invocations: int = 0
    per_pass_durations: list[float] = field(default_factory=list)
    peak_mean_digits: float = 0.0
    elementary_ops: int = 0
    total_seconds: float = 0.0


@dataclass
class SmithDecomposition:
    """``s == v @ d @ u`` when the transforms were requested."""

    s: ExactMatrix
    rank: int
    run_length: RunLengthDiagonal
    variant: str
    stats: SmithStats
    u: Optional[ExactMatrix] = None
    v: Optional[ExactMatrix] = None
    u_inv: Optional[ExactMatrix] = None
    v_inv: Optional[ExactMatrix] = None

    @property
    def invariants(self) -> list[int]:
        return self.s.diagonal()[: self.rank]


# -- divisor normalization ------------------------------------------------------------


def _normalization_steps(diag: list[int]) -> Iterator[tuple]:
    """Yield ('negate', i), ('swap', i, j), ('pair', i, j) steps, 0-based,
    updating ``diag`` as they are produced."""
    for i, x in enumerate(diag):
        if x < 0:
            diag[i] = -x
            yield ("negate", i)
    j = 0
    for i in range(len(diag)):
        if diag[i]:
            if i != j:
                diag[i], diag[j] = diag[j], diag[i]
                yield ("swap", j, i)
            j += 1
    k = j
    changed = True
    while changed:
        changed = False
        for i in range(k - 1):
            a, b = diag[i], diag[i + 1]
            if b % a:
                yield ("pair", i, i + 1)
                g = gcd(a, b)
                diag[i], diag[i + 1] = g, a // g * b
                changed = True


def canonical_diagonal(values: Sequence[int]) -> list[int]:
    """Smith form of a diagonal given as a list, by gcd/lcm exchanges."""
    work = list(values)
    for _ in _normalization_steps(work):
        pass
    return work


def divisor_normalize(d: ExactMatrix, log: Optional[list] = None) -> None:
    """Put a diagonal matrix into canonical Smith form in place.

    Signs are fixed by column negation, zeros move to the tail through
    symmetric row/column swaps, then adjacent pairs are replaced by
    (gcd, lcm) until every entry divides the next.
    """
    if not d.is_diagonal():
        raise ValueError("divisor_normalize needs a diagonal matrix")
    for step in _normalization_steps(d.diagonal()):
        if step[0] == "negate":
            logged_negate_col(d, step[1] + 1, log)
        elif step[0] == "swap":
            logged_swap_rows(d, step[1] + 1, step[2] + 1, log)
            logged_swap_cols(d, step[1] + 1, step[2] + 1, log)
        else:
            divisor_normalize_pair(d, step[1] + 1, step[2] + 1, log)


def _normalize_engine(diag: list[int], eng: Engine) -> list[int]:
    """Canonicalize ``diag`` while replaying each step on the tracked transforms."""
    us, vs = eng.u_side, eng.v_side
    work = list(diag)
    for step in _normalization_steps(work):
        if us is None:
            continue
        kind = step[0]
        if kind == "negate":
            us.negate(step[1])
        elif kind == "swap":
            us.swap(step[1], step[2])
            vs.swap(step[1], step[2])
        else:
            # yielded before the update, so work still holds (a, b)
            i, j = step[1], step[2]
            a, b = work[i], work[j]
            t = extended_gcd_minimal(a, b)
            vs.shear(j, i, -1)
            us.combine(i, j, t.p, t.q, -b // t.r, a // t.r)
            vs.shear(i, j, t.q * b // t.r)
    return work


# -- drivers ----------------------------------------------------------------------------

Hook = Callable[[Engine, int], None]


def _finish(eng: Engine, variant: str, stats: SmithStats, t0: float) -> SmithDecomposition:
    eng.set_orientation(1)
    diag = _normalize_engine(eng.diagonal(), eng)
    n, m = eng.nrows, eng.ncols
    s = ExactMatrix.diagonal_matrix(n, m, diag)
    rl = run_length(diag)
    stats.elementary_ops = eng.budget.ops
    stats.total_seconds = time.perf_counter() - t0
    dec = SmithDecomposition(s, rl.rank, rl, variant, stats)
    us, vs = eng.u_side, eng.v_side
    if us is not None and us.fwd is not None:
        dec.u = ExactMatrix.from_columns(us.fwd, m)
        dec.v = ExactMatrix.from_rows(vs.fwd) if n else ExactMatrix.zeros(0, 0)
    if us is not None and us.inv is not None:
        dec.u_inv = ExactMatrix.from_rows(us.inv) if m else ExactMatrix.zeros(0, 0)
        dec.v_inv = ExactMatrix.from_columns(vs.inv, n)
    return dec


def _exhausted(exc: Exception, eng: Engine, variant: str, columns_done: int,
               stats: SmithStats) -> BudgetExhausted:
    diag = {
        "variant": variant,
        "elementary_ops": eng.budget.ops,
        "elapsed_seconds": eng.budget.elapsed,
        "mean_digits_below_diagonal": eng.below_diagonal_digits(),
        "columns_processed": columns_done,
        "hnf_invocations": stats.hnf_invocations,
    }
    return BudgetExhausted(f"{variant}: {exc}", diag)


def _timed_pass(eng: Engine, stats: SmithStats, start: int = 0) -> int:
    t = time.perf_counter()
    k = eng.hermite_pass(start)
    stats.per_pass_durations.append(time.perf_counter() - t)
    stats.hnf_invocations += 1
    return k


def _bound_columns(eng: Engine, lo: int, k: int) -> None:
    """Row shears putting every entry under pivots lo..k-1 into [0, pivot).

    Columns go right to left: row c is zero right of the diagonal, so
    reducing column c never disturbs a column already handled.
    """
    lines = eng.lines
    n = eng.npos
    for c in range(k - 1, lo - 1, -1):
        lc = lines[c]
        e = lc[c]
        tail = lc[c + 1:]
        bad = [r for r, x in enumerate(tail, c + 1) if x < 0 or x >= e]
        if not bad:
            continue
        nz = [(c2, lines[c2][c]) for c2 in range(lo, c + 1) if lines[c2][c]]
        for r in bad:
            eng.shear_position(c, r, lc[r] // e, nz)


def _smith_kb12(m: ExactMatrix, variant: str, with_transforms: bool, with_inverses: bool,
                max_ops: Optional[int], max_seconds: Optional[float],
                hook: Optional[Hook]) -> SmithDecomposition:
    t0 = time.perf_counter()
    budget = _Budget(max_ops, max_seconds)
    eng = Engine(m, 1, transforms=with_transforms, inverses=with_inverses, budget=budget)
    stats = SmithStats()
    done = 0
    try:
        k = _timed_pass(eng, stats)
        stats.peak_mean_digits = eng.below_diagonal_digits()
        lines = eng.lines
        n = eng.npos
        for i in range(k):
            while True:
                for r in range(i + 1, n):
                    if lines[i][r]:
                        eng.mix_positions(i, r, i, k)
                if not any(lines[c][i] for c in range(i + 1, k)):
                    break
                k2 = _timed_pass(eng, stats, start=i)
                assert k2 == k, "rank changed during repair pass"
            done = i + 1
            if variant == KB2:
                _bound_columns(eng, i + 1, k)
            if hook is not None:
                hook(eng, i)
            if (i & 31) == 31:
                stats.peak_mean_digits = max(stats.peak_mean_digits, eng.below_diagonal_digits())
    except _OutOfBudget as exc:
        raise _exhausted(exc, eng, variant, done, stats) from None
    return _finish(eng, variant, stats, t0)


def smith_kb1(m: ExactMatrix, with_transforms: bool = False, *, with_inverses: bool = False,
              max_ops: Optional[int] = DEFAULT_KB1_OPS, max_seconds: Optional[float] = None,
              hook: Optional[Hook] = None) -> SmithDecomposition:
    """Naive rectangular KB.  Raises :class:`BudgetExhausted` past ``max_ops``
    elementary operations or ``max_seconds`` of wall time."""
    return _smith_kb12(m, KB1, with_transforms, with_inverses, max_ops, max_seconds, hook)


def smith_kb2(m: ExactMatrix, with_transforms: bool = False, *, with_inverses: bool = False,
              max_ops: Optional[int] = None, max_seconds: Optional[float] = None,
              hook: Optional[Hook] = None) -> SmithDecomposition:
    """KB1 with the lower rectangle kept bounded by row shears.

    ``hook(engine, i)`` runs after column i and its bounding sweep.
    """
    return _smith_kb12(m, KB2, with_transforms, with_inverses, max_ops, max_seconds, hook)


def smith_kb3(m: ExactMatrix, with_transforms: bool = False, *, with_inverses: bool = False,
              max_ops: Optional[int] = None, max_seconds: Optional[float] = None,
              hook: Optional[Hook] = None) -> SmithDecomposition:
    """Alternate HNF-1 and HNF-2 until a pass leaves the matrix diagonal.

    ``hook(engine, pass_index)`` runs after every pass.
    """
    t0 = time.perf_counter()
    budget = _Budget(max_ops, max_seconds)
    eng = Engine(m, 1, transforms=with_transforms, inverses=with_inverses, budget=budget)
    stats = SmithStats()
    orientation = 1
    try:
        while True:
            eng.set_orientation(orientation)
            _timed_pass(eng, stats)
            stats.peak_mean_digits = max(stats.peak_mean_digits, eng.below_diagonal_digits())
            if hook is not None:
                hook(eng, stats.hnf_invocations - 1)
            if eng.is_diagonal():
                break
            orientation = 3 - orientation
    except _OutOfBudget as exc:
        raise _exhausted(exc, eng, KB3, 0, stats) from None
    return _finish(eng, KB3, stats, t0)


_DRIVERS = {KB1: smith_kb1, KB2: smith_kb2, KB3: smith_kb3}


def smith(m: ExactMatrix, variant: str = KB3, with_transforms: bool = False,
          **kwargs) -> SmithDecomposition:
    """Dispatch to one of the three variants by name."""
    try:
        fn = _DRIVERS[variant.lower()]
    except KeyError:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}") from None
    return fn(m, with_transforms, **kwargs)


# -- verification --------------------------------------------------------------------

# minor enumeration is combinatorial; only attempted below this many minors
MINOR_CHECK_LIMIT = 20000


@dataclass
class VerificationReport:
    """One entry per check; None means skipped (matrix too large)."""

    checks: dict[str, Optional[bool]]

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.checks.values())

    def lines(self) -> list[str]:
        word = {True: "pass", False: "FAIL", None: "skipped"}
        return [f"{name}: {word[v]}" for name, v in self.checks.items()]


def _minor_count(n: int, m: int, k: int) -> int:
    return comb(n, k) * comb(m, k)


def verify_decomposition(d: ExactMatrix, dec: SmithDecomposition,
                         check_minors: Optional[bool] = None) -> VerificationReport:
    """Independent checks of a decomposition against its source matrix."""
    if dec.u is None or dec.v is None:
        raise ValueError("decomposition carries no transforms; rerun with with_transforms=True")
    checks: dict[str, Optional[bool]] = {}
    checks["equivalence"] = (
        dec.v.shape == (d.nrows, d.nrows) and dec.u.shape == (d.ncols, d.ncols)
        and matrix_product(matrix_product(dec.v, d), dec.u) == dec.s
    )
    try:
        checks["unimodular"] = abs(determinant(dec.u)) == 1 and abs(determinant(dec.v)) == 1
    except ValueError:
        checks["unimodular"] = False
    try:
        k = _check_canonical(dec.s.diagonal()) if dec.s.is_diagonal() else None
    except ValueError:
        k = None
    checks["divisor_chain"] = k is not None and k == dec.rank
    if check_minors is None:
        check_minors = _minor_count(d.nrows, d.ncols, dec.rank) <= MINOR_CHECK_LIMIT
    if check_minors and k is not None:
        checks["minor_gcd"] = prod(dec.s.diagonal()[:k]) == minor_gcd_oracle(d, k)
    else:
        checks["minor_gcd"] = None
    return VerificationReport(checks)
