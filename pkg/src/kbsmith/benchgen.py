"""Benchmark matrices with planted Smith forms, and the experiment runner.

A generated instance starts as a diagonal matrix of random positive
integers (the planted invariants) and is scrambled by repeated elementary
steps, each made of five equivalence-preserving substeps.  The Smith form
of the result is therefore known in advance.

Randomness comes from SplitMix64 (Steele, Lea and Flood 2014)::

    state += 0x9E3779B97F4A7C15                       (mod 2**64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9           (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB           (mod 2**64)
    return z ^ (z >> 31)

Bounded integers use rejection sampling, so streams are bit-identical on
every platform.  Instance ``i`` of an experiment seeded with ``s`` draws
from ``SplitMix64(mix64(s + 0x9E3779B97F4A7C15 * (i + 1)))``, where
``mix64`` is the output function above.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .hermite import BudgetExhausted
from .matrix import ExactMatrix, density_stats
from .smith import KB1, KB3, VARIANTS, RunLengthDiagonal, canonical_diagonal, run_length, smith

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Deterministic 64-bit generator; see the module docstring."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends included."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        if span > MASK64 + 1:
            raise ValueError("range wider than 2**64")
        limit = ((MASK64 + 1) // span) * span
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + x % span

    def distinct_pair(self, n: int) -> tuple[int, int]:
        """Two different indices in [0, n), drawn by rejection."""
        i = self.randint(0, n - 1)
        while True:
            j = self.randint(0, n - 1)
            if j != i:
                return i, j


def seeded_rng(seed: int) -> SplitMix64:
    return SplitMix64(seed)


def derive_seed(seed: int, instance_index: int) -> int:
    return mix64(seed + GOLDEN_GAMMA * (instance_index + 1))


@dataclass(frozen=True)
class ExperimentConfig:
    """The 7-tuple (repetitions rows cols rank diag_max steps alpha_max)."""

    repetitions: int
    rows: int
    cols: int
    rank: int
    diag_max: int
    steps: int
    alpha_max: int

    def __post_init__(self):
        for name in ("repetitions", "rows", "cols", "diag_max", "alpha_max"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.steps < 0 or self.rank < 0:
            raise ValueError("steps and rank must be nonnegative")
        if self.rank > min(self.rows, self.cols):
            raise ValueError(f"rank {self.rank} exceeds min(rows, cols)")

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        parts = text.replace("(", " ").replace(")", " ").replace(",", " ").split()
        if len(parts) != 7:
            raise ValueError(f"expected 7 comma-separated integers, got {text!r}")
        return cls(*(int(p) for p in parts))

    def as_tuple(self) -> tuple[int, ...]:
        return (self.repetitions, self.rows, self.cols, self.rank,
                self.diag_max, self.steps, self.alpha_max)

    def __str__(self) -> str:
        return "(" + " ".join(map(str, self.as_tuple())) + ")"

    def label(self) -> str:
        return ",".join(map(str, self.as_tuple()))


def elementary_step(m: ExactMatrix, rng: SplitMix64, alpha_max: int) -> None:
    """The five substeps, in order, in place."""
    n, c = m.nrows, m.ncols
    if n < 2 or c < 2:
        raise ValueError("elementary steps need at least 2 rows and 2 columns")
    rows = m.rows
    # 1. swap two columns
    i, j = rng.distinct_pair(c)
    for r in rows:
        r[i], r[j] = r[j], r[i]
    # 2. negate a column and a row
    col = rng.randint(0, c - 1)
    row = rng.randint(0, n - 1)
    for r in rows:
        r[col] = -r[col]
    rows[row] = [-x for x in rows[row]]
    # 3. second row += alpha * first row
    i, j = rng.distinct_pair(n)
    alpha = rng.randint(-alpha_max, alpha_max)
    if alpha:
        rows[j] = [y + alpha * x for x, y in zip(rows[i], rows[j])]
    # 4. swap two rows
    i, j = rng.distinct_pair(n)
    rows[i], rows[j] = rows[j], rows[i]
    # 5. second column += alpha * first column
    i, j = rng.distinct_pair(c)
    alpha = rng.randint(-alpha_max, alpha_max)
    if alpha:
        for r in rows:
            if r[i]:
                r[j] += alpha * r[i]


@dataclass
class GeneratedInstance:
    matrix: ExactMatrix
    planted_diagonal: list[int]
    planted_smith: RunLengthDiagonal
    seed: int


def generate_instance(config: ExperimentConfig, seed: int, instance_index: int = 0) -> GeneratedInstance:
    iseed = derive_seed(seed, instance_index)
    rng = SplitMix64(iseed)
    diag = [rng.randint(1, config.diag_max) for _ in range(config.rank)]
    m = ExactMatrix.diagonal_matrix(config.rows, config.cols, diag)
    for _ in range(config.steps):
        elementary_step(m, rng, config.alpha_max)
    planted = run_length(canonical_diagonal(diag + [0] * (min(config.rows, config.cols) - len(diag))))
    return GeneratedInstance(m, diag, planted, iseed)


# -- experiments ---------------------------------------------------------------


@dataclass
class RunRecord:
    config: str
    seed: int
    instance: int
    variant: str
    wall_ms: float
    hnf_count: int
    smith_runlength: Optional[str]
    verified: bool
    budget_exhausted: bool = False
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    seed: int
    variants: tuple[str, ...]
    first_null_fraction: Fraction
    first_mean_abs: Fraction
    first_smith: str
    records: list[RunRecord]

    def total_seconds(self, variant: str) -> float:
        return sum(r.wall_ms for r in self.records if r.variant == variant) / 1000.0

    def exhausted(self, variant: str) -> int:
        return sum(r.budget_exhausted for r in self.records if r.variant == variant)

    def failures(self) -> list[RunRecord]:
        """Finished runs whose Smith form differs from the planted one."""
        return [r for r in self.records if not r.budget_exhausted and not r.verified]

    def hnf_histogram(self, variant: str = KB3) -> dict[int, int]:
        hist: dict[int, int] = {}
        for r in self.records:
            if r.variant == variant and not r.budget_exhausted:
                hist[r.hnf_count] = hist.get(r.hnf_count, 0) + 1
        return dict(sorted(hist.items()))

    def text_lines(self, timing: bool = True) -> list[str]:
        out = [
            f"experiment {self.config} seed {self.seed}",
            f"first matrix: {float(self.first_null_fraction) * 100:.3f}% null entries, "
            f"mean |nonzero| = {float(self.first_mean_abs):.4g}",
            f"first matrix Smith form: {self.first_smith}",
        ]
        for v in self.variants:
            mine = [r for r in self.records if r.variant == v]
            parts = [f"{sum(r.verified for r in mine)} of {len(mine)} verified"]
            n_ex = self.exhausted(v)
            if n_ex:
                parts.append(f"budget exhausted on {n_ex}")
            if timing:
                parts.append(f"total runtime = {self.total_seconds(v):.2f} seconds (per matrix: "
                             + " ".join(f"{r.wall_ms / 1000:.2f}" for r in mine) + ")")
            if v == KB3:
                parts.append("HNF reductions: " + ", ".join(
                    f"{h} x{cnt}" for h, cnt in self.hnf_histogram(v).items()))
            out.append(f"{v.upper()}: " + "; ".join(parts))
        bad = self.failures()
        out.append("verification: " + ("all Smith forms match the planted forms" if not bad
                                       else f"{len(bad)} MISMATCHES"))
        return out


def _run_one(config: ExperimentConfig, seed: int, index: int, variant: str,
             max_ops: Optional[int], max_seconds: Optional[float]) -> RunRecord:
    inst = generate_instance(config, seed, index)
    kwargs = {"max_ops": max_ops, "max_seconds": max_seconds}
    t0 = time.perf_counter()
    try:
        dec = smith(inst.matrix, variant, **kwargs)
    except BudgetExhausted as exc:
        wall = (time.perf_counter() - t0) * 1000.0
        return RunRecord(config.label(), seed, index, variant, wall, exc.diagnostics["hnf_invocations"],
                         None, False, True, exc.diagnostics)
    wall = (time.perf_counter() - t0) * 1000.0
    return RunRecord(config.label(), seed, index, variant, wall, dec.stats.hnf_invocations,
                     dec.run_length.render(), dec.run_length == inst.planted_smith)


def run_experiment(config: ExperimentConfig, seed: int, variants: Sequence[str] = VARIANTS,
                   budgets: Optional[dict] = None, jobs: int = 1) -> ExperimentReport:
    """Generate ``config.repetitions`` instances and reduce each with every variant.

    ``budgets`` maps a variant name to ``(max_ops, max_seconds)``; KB1 gets
    its default operation budget when absent.
    """
    variants = tuple(v.lower() for v in variants)
    for v in variants:
        if v not in VARIANTS:
            raise ValueError(f"unknown variant {v!r}")
    budgets = dict(budgets or {})
    tasks = []
    for v in variants:
        max_ops, max_seconds = budgets.get(v, (None, None))
        if v == KB1 and max_ops is None and max_seconds is None:
            from .smith import DEFAULT_KB1_OPS
            max_ops = DEFAULT_KB1_OPS
        for i in range(config.repetitions):
            tasks.append((config, seed, i, v, max_ops, max_seconds))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_one_packed, tasks))
    else:
        records = [_run_one(*t) for t in tasks]
    first = generate_instance(config, seed, 0)
    nf, mean = density_stats(first.matrix)
    computed = next((r.smith_runlength for r in records
                     if r.instance == 0 and r.smith_runlength is not None), None)
    return ExperimentReport(config, seed, variants, nf, mean,
                            computed or first.planted_smith.render(), records)


def _run_one_packed(task: tuple) -> RunRecord:
    return _run_one(*task)


def write_records(records: Iterable[RunRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")
