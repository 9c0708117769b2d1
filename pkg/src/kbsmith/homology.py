"""Constructive homology of a pair of boundary matrices.

Given d' (m x n) and d (n x p) with d' d = 0, compute H = ker d' / im d
together with integer cycles generating it.  With s' = v' d' u' the Smith
form of d', the kernel of d' is spanned by the last k = n - rank(d')
columns of u'.  In those coordinates im d is the column span of the last k
rows of u'^-1 d (the first rank(d') rows vanish because s' u'^-1 d =
v' d' d = 0).  A second Smith form s = v A u of that k x p block reads off
the quotient: coordinate t of Z^k / im s has order s_t, or is free past
rank(A).  Its generator pulls back to u' [0; v^-1 e_t].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .matrix import ExactMatrix, matrix_product
from .smith import KB3, smith


@dataclass
class HomologyResult:
    """Invariants of ker d' / im d plus one cycle per cyclic factor.

    ``orders[i]`` is the order of ``generators[i]`` (0 for a free
    generator).  ``witnesses[i]``, for torsion generators, is an integer
    vector x with d x = orders[i] * generators[i].
    """

    free_rank: int
    torsion: list[int]
    generators: list[list[int]] = field(default_factory=list)
    orders: list[int] = field(default_factory=list)
    witnesses: list[Optional[list[int]]] = field(default_factory=list)

    def group_string(self) -> str:
        return group_string(self.torsion, self.free_rank)


def group_string(torsion: list[int], free_rank: int) -> str:
    """Render as e.g. ``(Z/2)^3 + Z/8 + Z^5``; the trivial group is ``0``."""
    parts = []
    i = 0
    while i < len(torsion):
        j = i
        while j < len(torsion) and torsion[j] == torsion[i]:
            j += 1
        cnt = j - i
        parts.append(f"Z/{torsion[i]}" if cnt == 1 else f"(Z/{torsion[i]})^{cnt}")
        i = j
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    return " + ".join(parts) if parts else "0"


def format_vector(vec: list[int]) -> str:
    """Sparse ``index:value`` pairs, 1-based; an all-zero vector prints as ``0``."""
    pairs = [f"{i}:{v}" for i, v in enumerate(vec, start=1) if v]
    return " ".join(pairs) if pairs else "0"


def _column(m: ExactMatrix, j: int) -> list[int]:
    return [row[j] for row in m.rows]


def _mat_vec(m: ExactMatrix, x: list[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x) if a and b) for row in m.rows]


def homology_group(dprime: ExactMatrix, d: ExactMatrix, variant: str = KB3) -> HomologyResult:
    """H = ker dprime / im d with explicit generating cycles.

    ``dprime`` is m x n and ``d`` is n x p; their product must vanish.
    """
    n = dprime.ncols
    if d.nrows != n:
        raise ValueError(f"dimension mismatch: d' is {dprime.nrows}x{n}, d is {d.nrows}x{d.ncols}")
    if not matrix_product(dprime, d).is_zero():
        raise ValueError("d' d is not zero")

    first = smith(dprime, variant, True, with_inverses=True)
    r1 = first.rank
    k = n - r1
    # u'^-1 d; its first r1 rows must vanish
    full = matrix_product(first.u_inv, d) if n else ExactMatrix.zeros(0, d.ncols)
    if any(any(row) for row in full.rows[:r1]):
        raise AssertionError("image of u'^-1 d leaves the kernel coordinates")
    block = ExactMatrix.from_rows(full.rows[r1:]) if k else ExactMatrix.zeros(0, d.ncols)

    if block.ncols == 0 or k == 0:
        invariants: list[int] = []
        rank2 = 0
        v_inv = ExactMatrix.identity(k)
        u2 = ExactMatrix.identity(block.ncols)
    else:
        second = smith(block, variant, True, with_inverses=True)
        invariants = second.invariants
        rank2 = second.rank
        v_inv = second.v_inv
        u2 = second.u

    u1 = first.u
    gens, orders, witnesses = [], [], []
    for t in range(k):
        order = invariants[t] if t < rank2 else 0
        if order == 1:
            continue
        local = [0] * r1 + _column(v_inv, t)
        g = _mat_vec(u1, local)
        if any(_mat_vec(dprime, g)):
            raise AssertionError("generator is not a cycle")
        gens.append(g)
        orders.append(order)
        witnesses.append(_column(u2, t) if order else None)
    torsion = [o for o in orders if o]
    return HomologyResult(k - rank2, torsion, gens, orders, witnesses)
