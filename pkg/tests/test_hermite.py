import random
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_matrix
from kbsmith.bezout import replay
from kbsmith.hermite import hnf1, hnf2, kb_cancel_order
from kbsmith.matrix import ExactMatrix, determinant, matrix_product, minor_gcd_oracle, rank_oracle

# the HNF-1 display printed for the worked example
TOY_HNF1 = [
    [3, 0, 0, 0, 0],
    [0, 2, 0, 0, 0],
    [180, 49, 3087, 0, 0],
    [-30, -8, -513, 0, 0],
]


def assert_hnf1_shape(h: ExactMatrix, k: int):
    n, m = h.shape
    for i in range(k):
        e = h.rows[i][i]
        assert e > 0
        assert not any(h.rows[i][i + 1:]), "nonzero above the diagonal"
        assert all(0 <= h.rows[i][c] < e for c in range(i)), "unreduced row"
    for r in range(n):
        assert not any(h.rows[r][k:]), "trailing columns must be null"


def test_cancel_order():
    assert kb_cancel_order(2) == [(1, 2)]
    assert kb_cancel_order(3) == [(1, 2), (1, 3), (2, 3)]
    assert kb_cancel_order(5) == [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4),
                                  (1, 5), (2, 5), (3, 5), (4, 5)]
    with pytest.raises(ValueError):
        kb_cancel_order(0)


def test_worked_example_hnf1(toy):
    res = hnf1(toy, with_transforms=True)
    assert res.matrix.tolist() == TOY_HNF1
    assert res.rank == 3
    assert prod(res.matrix.diagonal()[:3]) == 18522 == 686 * 27
    assert matrix_product(matrix_product(res.left_transform, toy), res.right_transform) == res.matrix


def test_worked_example_hnf2_after_hnf1():
    res = hnf2(ExactMatrix.from_rows(TOY_HNF1))
    assert res.matrix.diagonal() == [3, 1, 9, 0]
    assert res.rank == 3
    assert res.matrix.is_diagonal()


def test_zero_matrix():
    for fn in (hnf1, hnf2):
        res = fn(ExactMatrix.zeros(3, 4))
        assert res.rank == 0 and res.matrix.is_zero()
    assert hnf1(ExactMatrix.zeros(0, 3)).rank == 0
    assert hnf2(ExactMatrix.zeros(2, 0)).rank == 0


def test_zero_pivot_row_swap():
    # column 1 is zero in row 1, so a row swap brings the pivot up
    m = ExactMatrix.from_rows([[0, 2], [3, 1]])
    res = hnf1(m, with_transforms=True)
    assert_hnf1_shape(res.matrix, 2)
    assert matrix_product(matrix_product(res.left_transform, m), res.right_transform) == res.matrix


def test_null_column_swap():
    m = ExactMatrix.from_rows([[2, 0, 4], [0, 0, 6], [0, 0, 0]])
    res = hnf1(m)
    assert res.rank == 2
    assert_hnf1_shape(res.matrix, 2)


def test_op_log_replays(toy):
    res = hnf1(toy, log=True)
    assert replay(res.op_log, toy) == res.matrix
    res2 = hnf2(toy, log=True)
    assert replay(res2.op_log, toy) == res2.matrix


def test_random_rectangles():
    rng = random.Random(7)
    for _ in range(200):
        n, m = rng.randint(1, 8), rng.randint(1, 10)
        a = random_matrix(rng, n, m, zero_bias=rng.choice([0, 0.4, 0.8]))
        res = hnf1(a, with_transforms=True)
        assert res.rank == rank_oracle(a)
        assert_hnf1_shape(res.matrix, res.rank)
        assert matrix_product(matrix_product(res.left_transform, a), res.right_transform) == res.matrix
        assert abs(determinant(res.left_transform)) == 1
        assert abs(determinant(res.right_transform)) == 1
        # the mirror
        res2 = hnf2(a.transpose())
        assert res2.matrix == res.matrix.transpose()
        assert res2.rank == res.rank


def test_g_divides_diagonal_product():
    rng = random.Random(3)
    for _ in range(150):
        a = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 6))
        for fn in (hnf1, hnf2):
            res = fn(a)
            k = res.rank
            g = minor_gcd_oracle(a, k)
            assert prod(res.matrix.diagonal()[:k]) % g == 0


def test_triangular_input_keeps_diagonal_product():
    rng = random.Random(4)
    for _ in range(150):
        n = rng.randint(1, 8)
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = rng.randint(1, 12)
            for j in range(i):
                rows[i][j] = rng.randint(-20, 20)
        lower = ExactMatrix.from_rows(rows)
        want = prod(lower.diagonal())
        for m in (lower, lower.transpose()):
            for fn in (hnf1, hnf2):
                assert prod(fn(m).matrix.diagonal()) == want


def test_fixed_point():
    rng = random.Random(9)
    for _ in range(100):
        a = random_matrix(rng, rng.randint(1, 7), rng.randint(1, 7))
        h = hnf1(a).matrix
        again = hnf1(h, log=True)
        assert again.matrix == h


@given(st.integers(1, 6).flatmap(lambda n: st.integers(1, 6).flatmap(
    lambda m: st.lists(st.integers(-50, 50), min_size=n * m, max_size=n * m).map(
        lambda e: ExactMatrix(n, m, e)))))
@settings(max_examples=150, deadline=None)
def test_hnf_property(a):
    res = hnf1(a, with_transforms=True)
    assert res.rank == rank_oracle(a)
    assert_hnf1_shape(res.matrix, res.rank)
    assert matrix_product(matrix_product(res.left_transform, a), res.right_transform) == res.matrix
    assert hnf2(a.transpose()).matrix == res.matrix.transpose()
