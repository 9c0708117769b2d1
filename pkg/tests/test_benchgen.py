import json
from collections import Counter

import pytest

from kbsmith.benchgen import (
    ExperimentConfig, SplitMix64, derive_seed, elementary_step, generate_instance, mix64,
    run_experiment, seeded_rng, write_records,
)
from kbsmith.fileio import dumps
from kbsmith.matrix import ExactMatrix, density_stats, rank_oracle
from kbsmith.smith import KB1, smith


def test_splitmix_reference_values():
    # published SplitMix64 outputs for seed 1234567
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(3)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_same_seed_same_stream():
    a, b = seeded_rng(99), seeded_rng(99)
    assert [a.randint(-10, 10) for _ in range(1000)] == [b.randint(-10, 10) for _ in range(1000)]
    c = seeded_rng(100)
    assert [seeded_rng(99).next_u64() for _ in range(3)] != [c.next_u64() for _ in range(3)]


def test_randint_covers_both_ends():
    rng = seeded_rng(5)
    counts = Counter(rng.randint(-10, 10) for _ in range(100_000))
    assert set(counts) == set(range(-10, 11))
    # roughly uniform: each of 21 values near 4762
    assert all(4000 < c < 5600 for c in counts.values())
    with pytest.raises(ValueError):
        rng.randint(3, 2)


def test_distinct_pair():
    rng = seeded_rng(1)
    for _ in range(500):
        i, j = rng.distinct_pair(2)
        assert {i, j} == {0, 1}


def test_derive_seed_is_documented_mix():
    assert derive_seed(7, 0) == mix64(7 + 0x9E3779B97F4A7C15)
    assert derive_seed(7, 0) != derive_seed(7, 1)


def test_config_parse():
    cfg = ExperimentConfig.parse("10,100,300,80,20,300,10")
    assert cfg.as_tuple() == (10, 100, 300, 80, 20, 300, 10)
    assert str(cfg) == "(10 100 300 80 20 300 10)"
    assert ExperimentConfig.parse("(1 4 5 3 9 10 10)").rank == 3
    for bad in ("1,2,3", "1,4,5,6,9,10,10", "0,4,5,3,9,10,10", "1,4,5,3,0,10,10"):
        with pytest.raises(ValueError):
            ExperimentConfig.parse(bad)


def test_zero_steps_gives_raw_diagonal():
    inst = generate_instance(ExperimentConfig.parse("1,4,5,3,9,0,10"), 3)
    assert inst.matrix == ExactMatrix.diagonal_matrix(4, 5, inst.planted_diagonal)
    assert all(1 <= x <= 9 for x in inst.planted_diagonal)


def test_elementary_step_preserves_smith_form():
    m = ExactMatrix.diagonal_matrix(4, 5, [1, 3, 9])
    rng = seeded_rng(42)
    for _ in range(10):
        elementary_step(m, rng, 10)
        assert smith(m).s.diagonal() == [1, 3, 9, 0]
        assert rank_oracle(m) == 3
    with pytest.raises(ValueError):
        elementary_step(ExactMatrix.zeros(1, 3), rng, 10)


def test_zero_alpha_is_legal():
    m = ExactMatrix.diagonal_matrix(3, 3, [2, 4, 8])
    before = smith(m).s
    elementary_step(m, seeded_rng(0), 1)
    assert smith(m).s == before


def test_planted_forms_match():
    for cfg in ("5,6,8,5,20,40,10", "5,12,16,10,20,100,10", "5,10,10,10,5,60,3"):
        c = ExperimentConfig.parse(cfg)
        for i in range(c.repetitions):
            inst = generate_instance(c, 11, i)
            assert smith(inst.matrix).run_length == inst.planted_smith


def test_generation_is_reproducible():
    c = ExperimentConfig.parse("2,8,9,6,20,50,10")
    a = [dumps(generate_instance(c, 5, i).matrix) for i in range(2)]
    b = [dumps(generate_instance(c, 5, i).matrix) for i in range(2)]
    assert a == b and a[0] != a[1]


def test_density_of_larger_config():
    inst = generate_instance(ExperimentConfig.parse("1,100,300,80,20,300,10"), 1)
    nf, _ = density_stats(inst.matrix)
    assert 0.85 <= nf <= 0.97


def test_tiny_experiment(tmp_path):
    rep = run_experiment(ExperimentConfig.parse("3,10,15,8,9,30,5"), 1)
    assert not rep.failures()
    assert all(r.verified for r in rep.records)
    assert len(rep.records) == 9
    lines = rep.text_lines(timing=False)
    assert lines[0] == "experiment (3 10 15 8 9 30 5) seed 1"
    assert all("seconds" not in line for line in lines)
    path = tmp_path / "r.jsonl"
    write_records(rep.records, path)
    recs = [json.loads(line) for line in path.read_text().splitlines()]
    assert {"config", "seed", "variant", "wall_ms", "hnf_count", "smith_runlength", "verified"} <= set(recs[0])


def test_forced_budget_is_recorded():
    rep = run_experiment(ExperimentConfig.parse("1,40,60,30,20,200,10"), 1, [KB1],
                         budgets={KB1: (1000, None)})
    assert rep.exhausted(KB1) == 1
    assert rep.records[0].budget_exhausted and not rep.failures()


def test_parallel_matches_serial():
    cfg = ExperimentConfig.parse("2,8,10,6,9,30,5")
    a = run_experiment(cfg, 3, jobs=1)
    b = run_experiment(cfg, 3, jobs=2)
    assert [r.smith_runlength for r in a.records] == [r.smith_runlength for r in b.records]
