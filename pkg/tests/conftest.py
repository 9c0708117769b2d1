import random
import sys

import pytest

from kbsmith.matrix import ExactMatrix

# the scrambled 4x5 matrix printed for the worked example
TOY_ROWS = [
    [37584, 4383, 29997, -54, 11688],
    [308, 36, 250, 0, 96],
    [-40316, -4707, -33907, -153, -12552],
    [5626, 657, 4778, 27, 1752],
]


@pytest.fixture
def toy():
    return ExactMatrix.from_rows(TOY_ROWS)


def random_matrix(rng: random.Random, nrows: int, ncols: int, lo: int = -9, hi: int = 9,
                  zero_bias: float = 0.0) -> ExactMatrix:
    rows = []
    for _ in range(nrows):
        rows.append([0 if rng.random() < zero_bias else rng.randint(lo, hi) for _ in range(ncols)])
    return ExactMatrix(nrows, ncols, [x for r in rows for x in r])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
