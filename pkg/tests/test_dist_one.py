import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from instances import random_instance
from lmcdist import gadgets
from lmcdist.core import ProblemInstance, disjoint_union, make_lmc
from lmcdist.dist_one import distance_one, distance_one_bruteforce, reach_set


def test_two_state_distance_one():
    inst = gadgets.generate(gadgets.TwoState())
    assert distance_one(inst)
    assert distance_one_bruteforce(inst)


def test_example1_not_distance_one():
    assert not distance_one(gadgets.generate(gadgets.Example1()))


@pytest.mark.parametrize("x", [Fraction(1, 8), Fraction(1, 4), Fraction(3, 8), Fraction(1, 100)])
def test_irrational_gadget_below_one(x):
    assert not distance_one(gadgets.generate(gadgets.Irrational(x)))


def test_equal_initials_not_distance_one():
    inst = gadgets.generate(gadgets.TwoState())
    assert not distance_one(ProblemInstance(inst.lmc, inst.pi1, inst.pi1))


def test_reach_set_two_state():
    inst = gadgets.generate(gadgets.TwoState())
    r = reach_set(inst)
    # the two copies move in lockstep on opposite states, so they never meet
    assert r.pairs == {(0, 1), (1, 0)}
    assert r.projection(0) == {1}


def test_disjoint_letters_give_distance_one():
    # left side only ever emits a, right side only b
    left = make_lmc(["s"], ["a", "b"], [("s", "a", "s", 1)])
    right = make_lmc(["t"], ["a", "b"], [("t", "b", "t", 1)])
    inst = disjoint_union((left, left.dirac("s")), (right, right.dirac("t")))
    assert distance_one(inst)


def test_parallel_jobs_agree():
    for spec in (gadgets.TwoState(), gadgets.Example1(), gadgets.Irrational(Fraction(1, 4))):
        inst = gadgets.generate(spec)
        assert distance_one(inst, jobs=3) == distance_one(inst)


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_matches_support_pair_oracle(seed):
    inst = random_instance(random.Random(seed), max_states=4, letters=2, denom=3)
    assert distance_one(inst) == distance_one_bruteforce(inst)
