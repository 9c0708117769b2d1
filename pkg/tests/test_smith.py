import random
from math import gcd, prod

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_matrix
from kbsmith.benchgen import ExperimentConfig, generate_instance
from kbsmith.hermite import BudgetExhausted
from kbsmith.matrix import ExactMatrix, minor_gcd_oracle, rank_oracle
from kbsmith.smith import (
    KB1, KB2, KB3, VARIANTS, canonical_diagonal, divisor_normalize, run_length, smith, smith_kb1,
    smith_kb2, smith_kb3, verify_decomposition,
)


def determinantal_invariants(m: ExactMatrix) -> list[int]:
    """d_j = D_j / D_{j-1} with D_j the gcd of all j x j minors."""
    k = rank_oracle(m)
    ds = [minor_gcd_oracle(m, j) for j in range(k + 1)]
    return [ds[j] // ds[j - 1] for j in range(1, k + 1)]


@pytest.mark.parametrize("variant", VARIANTS)
def test_worked_example(toy, variant):
    dec = smith(toy, variant)
    assert dec.run_length.render() == "((1 * 1) (1 * 3) (1 * 9))"
    assert dec.rank == 3
    assert dec.s.diagonal() == [1, 3, 9, 0]


def test_worked_example_kb3_passes(toy):
    seen = []
    dec = smith_kb3(toy, hook=lambda eng, p: seen.append(eng.diagonal()))
    assert seen[1] == [3, 1, 9, 0]
    assert dec.stats.hnf_invocations == 2


@pytest.mark.parametrize("variant", VARIANTS)
def test_diag_6_4(variant):
    dec = smith(ExactMatrix.diagonal_matrix(2, 2, [6, 4]), variant)
    assert dec.s.diagonal() == [2, 12]


@pytest.mark.parametrize("variant", VARIANTS)
def test_zero_matrix(variant):
    dec = smith(ExactMatrix.zeros(3, 2), variant)
    assert dec.rank == 0 and dec.s.is_zero()
    assert dec.run_length.render() == "()"


@pytest.mark.parametrize("variant", VARIANTS)
def test_empty_shapes(variant):
    for shape in ((0, 0), (0, 3), (3, 0)):
        dec = smith(ExactMatrix.zeros(*shape), variant, True)
        assert dec.rank == 0 and dec.s.shape == shape


def test_diagonal_input_needs_one_pass():
    dec = smith_kb3(ExactMatrix.diagonal_matrix(2, 2, [2, 4]))
    assert dec.stats.hnf_invocations == 1
    assert dec.s.diagonal() == [2, 4]


def test_sympy_example():
    # invariants of this matrix are 1, 10, 30 (sympy prints -30)
    m = ExactMatrix.from_rows([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]])
    for v in VARIANTS:
        assert smith(m, v).s.diagonal() == [1, 10, 30, 0]


def test_divisor_normalize_examples():
    for diag, want in (([9, 3, 1, 0], [1, 3, 9, 0]), ([4, 6], [2, 12]), ([1, 1, 1], [1, 1, 1]),
                       ([0, -4, 6], [2, 12, 0]), ([0, 0], [0, 0])):
        d = ExactMatrix.diagonal_matrix(len(diag), len(diag), diag)
        divisor_normalize(d)
        assert d.diagonal() == want
        assert canonical_diagonal(diag) == want
    with pytest.raises(ValueError):
        divisor_normalize(ExactMatrix.from_rows([[1, 1], [0, 1]]))


@given(st.lists(st.integers(-40, 40), min_size=1, max_size=7))
@settings(max_examples=200, deadline=None)
def test_divisor_normalize_property(diag):
    n = len(diag)
    d = ExactMatrix.diagonal_matrix(n, n, diag)
    log = []
    divisor_normalize(d, log)
    out = d.diagonal()
    assert d.is_diagonal()
    nz = [x for x in out if x]
    assert out[: len(nz)] == nz and all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert prod(nz) == prod(abs(x) for x in diag if x)
    assert out == canonical_diagonal(diag)


def test_run_length():
    assert run_length([1, 1, 2]).render() == "((2 * 1) (1 * 2))"
    t9 = [1] * 1218 + [2] * 253 + [4] * 9 + [8]
    assert run_length(t9).render() == "((1218 * 1) (253 * 2) (9 * 4) (1 * 8))"
    assert run_length([1, 3, 9, 0]).rank == 3
    with pytest.raises(ValueError):
        run_length([2, 3])
    with pytest.raises(ValueError):
        run_length([0, 1])


def test_invariants_match_determinantal_divisors():
    rng = random.Random(21)
    for _ in range(120):
        a = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 6))
        want = determinantal_invariants(a)
        for v in VARIANTS:
            assert smith(a, v).invariants == want


def test_transforms_and_inverses():
    rng = random.Random(8)
    for _ in range(40):
        a = random_matrix(rng, rng.randint(1, 7), rng.randint(1, 8), zero_bias=0.3)
        for v in VARIANTS:
            dec = smith(a, v, True, with_inverses=True)
            rep = verify_decomposition(a, dec)
            assert rep.passed, rep.lines()
            assert dec.u @ dec.u_inv == ExactMatrix.identity(a.ncols)
            assert dec.v @ dec.v_inv == ExactMatrix.identity(a.nrows)


def test_verification_negative_control(toy):
    dec = smith(toy, KB3, True)
    dec.u.rows[0][0] += 1
    rep = verify_decomposition(toy, dec)
    assert rep.checks["equivalence"] is False and not rep.passed


def test_verification_needs_transforms(toy):
    with pytest.raises(ValueError):
        verify_decomposition(toy, smith(toy))


def test_identity_verifies():
    i3 = ExactMatrix.identity(3)
    dec = smith(i3, KB3, True)
    assert dec.s == i3 and dec.u == i3 and dec.v == i3
    assert verify_decomposition(i3, dec).passed


def test_kb1_budget():
    inst = generate_instance(ExperimentConfig.parse("1,12,16,10,20,100,10"), 4)
    with pytest.raises(BudgetExhausted) as info:
        smith_kb1(inst.matrix, max_ops=50)
    diag = info.value.diagnostics
    assert diag["elementary_ops"] > 50
    assert {"mean_digits_below_diagonal", "columns_processed"} <= set(diag)


def test_kb2_columns_stay_bounded():
    inst = generate_instance(ExperimentConfig.parse("1,20,30,15,20,150,10"), 2)
    checked = []

    def hook(eng, i):
        k = 15
        for c in range(i + 1, k):
            line = eng.lines[c]
            e = line[c]
            assert all(0 <= x < e for x in line[c + 1:]), (i, c)
        checked.append(i)

    dec = smith_kb2(inst.matrix, hook=hook)
    assert dec.run_length == inst.planted_smith
    assert checked


def test_kb3_diagonal_product_settles_after_second_pass():
    rng = random.Random(12)
    for _ in range(40):
        a = random_matrix(rng, rng.randint(2, 6), rng.randint(2, 7))
        k = rank_oracle(a)
        g = minor_gcd_oracle(a, k)
        prods = []
        smith_kb3(a, hook=lambda eng, p: prods.append(prod(eng.diagonal()[:k])))
        assert prods[0] % g == 0
        assert all(p == g for p in prods[1:])


def test_unknown_variant(toy):
    with pytest.raises(ValueError):
        smith(toy, "kb4")


def test_planted_instances_agree():
    for seed in range(15):
        inst = generate_instance(ExperimentConfig.parse("1,9,11,7,20,60,10"), seed)
        forms = {smith(inst.matrix, v).run_length for v in (KB1, KB2, KB3)}
        assert forms == {inst.planted_smith}
