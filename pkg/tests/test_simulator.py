import csv
import math
from fractions import Fraction

import numpy as np
import pytest

from lmcdist import gadgets
from lmcdist.core import ProblemInstance, disjoint_union
from lmcdist.simulator import (
    GAMMA, SamplingTables, estimate_distance_mc, likelihood_trajectory, mix64, run_key,
    sample_ratios, uniform, write_trajectories_csv,
)


@pytest.fixture
def example1():
    return gadgets.generate(gadgets.Example1())


def test_mix64_reference_values():
    # first outputs of the splitmix64 stream seeded with 0
    assert mix64(GAMMA) == 0xE220A8397B1DCDAF
    assert mix64(2 * GAMMA) == 0x6E789E6AA1B965F4


def test_uniform_range():
    key = run_key(7, 1, 0)
    us = [uniform(key, j) for j in range(1000)]
    assert all(0.0 <= u < 1.0 for u in us)
    assert 0.4 < sum(us) / len(us) < 0.6


def test_trajectory_examples(example1):
    assert likelihood_trajectory(example1, []).ratios == (1.0,)
    traj = likelihood_trajectory(example1, ["a", "c"])
    assert traj.ratios[-1] == 0.5
    assert not traj.truncated


def test_truncated_trajectory():
    # r1 only loops on a while r2 only loops on b
    inst = gadgets.generate(gadgets.BernoulliChain(Fraction(2), Fraction(0)))
    lmc = inst.lmc
    only = inst.with_initial(lmc.dirac("r1"), lmc.dirac("r2"))
    traj = likelihood_trajectory(only, ["b"])
    assert traj.truncated
    assert traj.ratios == (1.0,)


def test_sampled_words_follow_support():
    inst = gadgets.generate(gadgets.Irrational(Fraction(1, 4)))
    tables = SamplingTables(inst)
    for run in range(50):
        word = tables.sample_word(11, 1, run, 30)
        # once c is emitted the run is absorbed in r
        if "c" in word:
            assert set(word[word.index("c"):]) == {"c"}


def test_batches_do_not_change_runs():
    inst = gadgets.generate(gadgets.Irrational(Fraction(1, 4)))
    a = sample_ratios(inst, 1, 50, 1000, seed=3, batch=1000)
    b = sample_ratios(inst, 1, 50, 1000, seed=3, batch=37)
    c = sample_ratios(inst, 1, 50, 1000, seed=3, batch=100, jobs=4)
    assert np.array_equal(a, b) and np.array_equal(a, c)


def test_kernel_agrees_with_exact_trajectory():
    inst = gadgets.generate(gadgets.Irrational(Fraction(3, 8)))
    tables = SamplingTables(inst)
    fast = sample_ratios(inst, 2, 25, 40, seed=9)
    for run in range(40):
        exact = likelihood_trajectory(inst, tables.sample_word(9, 2, run, 25))
        if exact.truncated:
            assert math.isinf(fast[run])
        else:
            assert fast[run] == pytest.approx(exact.ratios[-1], rel=1e-9)


def test_reproducible(example1):
    a = estimate_distance_mc(example1, 40, 2000, seed=5)
    b = estimate_distance_mc(example1, 40, 2000, seed=5)
    assert a == b
    c = estimate_distance_mc(example1, 40, 2000, seed=6)
    assert c != a


def test_nontrivial_equivalent_pair():
    base = gadgets.generate(gadgets.Irrational(Fraction(1, 4))).lmc
    inst = disjoint_union((base, base.dirac("q1")), (base, base.dirac("q1")))
    lmc = inst.lmc
    split = lmc.subdistribution({"q1.1": Fraction(1, 2), "q1.2": Fraction(1, 2)})
    est = estimate_distance_mc(ProblemInstance(lmc, inst.pi1, split), 200, 20000, seed=17)
    assert abs(est.estimate) <= 0.02


def test_martingale_short_horizon():
    inst = gadgets.generate(gadgets.Irrational(Fraction(1, 8)))
    est = estimate_distance_mc(inst, 20, 50000, seed=23)
    assert abs(est.ratio_mean - 1.0) <= 5 * est.ratio_stderr


def test_two_state_separates():
    est = estimate_distance_mc(gadgets.generate(gadgets.TwoState()), 200, 5000, seed=1)
    assert est.estimate >= 0.9
    assert est.stderr >= 0


def test_argument_errors(example1):
    with pytest.raises(ValueError):
        estimate_distance_mc(example1, 0, 10, seed=1)


def test_trajectory_csv(tmp_path, example1):
    path = tmp_path / "t.csv"
    write_trajectories_csv(example1, path, run_length=5, runs=3, seed=2)
    rows = list(csv.DictReader(open(path)))
    assert set(rows[0]) == {"side", "run", "step", "letter", "ratio"}
    assert {r["side"] for r in rows} == {"1", "2"}
    assert all(r["ratio"] for r in rows)
