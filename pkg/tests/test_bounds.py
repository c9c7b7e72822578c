import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from instances import random_instance
from oracles import coupled_mass_by_words, per_word_bounds, word_functionals
from lmcdist import gadgets
from lmcdist.bounds import (
    ApproxStatus, BracketSequence, approximate, bracket_history, coupled_mass, initial_classes,
    level_bounds, naive_level_bounds, refine_classes,
)
from lmcdist.core import LmcError, ProblemInstance
from lmcdist.linalg import equivalence_basis


def test_equivalent_pair_exact_zero():
    inst = gadgets.generate(gadgets.Example1())
    lmc = inst.lmc
    rep = approximate(inst.with_initial(lmc.dirac("r1"), lmc.dirac("r2")), Fraction(1, 10))
    assert rep.status is ApproxStatus.EXACT
    assert (rep.bracket.lower, rep.bracket.upper) == (0, 0)


def test_two_state_exact_one():
    rep = approximate(gadgets.generate(gadgets.TwoState()), Fraction(1, 10))
    assert rep.status is ApproxStatus.EXACT
    assert (rep.bracket.lower, rep.bracket.upper) == (1, 1)


def test_irrational_converges_around_closed_form():
    spec = gadgets.Irrational(Fraction(1, 4))
    rep = approximate(gadgets.generate(spec), Fraction(1, 100))
    assert rep.status is ApproxStatus.CONVERGED
    assert rep.bracket.width <= Fraction(1, 100)
    cf = gadgets.closed_form(spec)
    assert cf >= rep.bracket.lower and cf <= rep.bracket.upper


@pytest.mark.parametrize("x", [Fraction(1, 8), Fraction(1, 4), Fraction(3, 8)])
def test_every_depth_contains_closed_form(x):
    spec = gadgets.Irrational(x)
    cf = gadgets.closed_form(spec)
    for br in bracket_history(gadgets.generate(spec), 12):
        assert cf >= br.lower and cf <= br.upper


def test_example1_first_levels():
    # depth 0: single pair of Diracs, min = 1 and nothing couples
    hist = bracket_history(gadgets.generate(gadgets.Example1()), 2)
    assert (hist[0].lower, hist[0].upper) == (0, 1)
    assert all(b.lower <= b.upper for b in hist)
    # distance is at most 15/16 (the c-suffix is shared)
    assert hist[1].upper <= Fraction(15, 16)


def test_depth_capped_status():
    rep = approximate(gadgets.generate(gadgets.Irrational(Fraction(1, 4))), Fraction(1, 10**6), max_depth=3)
    assert rep.status is ApproxStatus.DEPTH_CAPPED
    assert rep.bracket.depth == 3
    assert len(rep.history) == 4


def test_classify():
    rep = approximate(gadgets.generate(gadgets.Irrational(Fraction(1, 4))), Fraction(1, 100))
    assert rep.classify(Fraction(1, 3)) == "above"
    assert rep.classify(Fraction(1, 2)) == "below"
    assert rep.classify(Fraction(71, 200)) == "undecided"


def test_bad_eps():
    with pytest.raises(LmcError):
        approximate(gadgets.generate(gadgets.TwoState()), 0)


def test_coupled_mass_small_cases():
    inst = gadgets.generate(gadgets.Example1())
    vecs = equivalence_basis(inst).vectors
    F = Fraction
    # r1 and r2 are equivalent, so their masses couple fully up to the smaller side
    assert coupled_mass((0, F(1, 3), 0, 0), (0, 0, 0, F(1, 2)), vecs) == F(1, 3)
    assert coupled_mass((F(1), 0, 0, 0), (0, 0, F(1), 0), vecs) == 0
    assert coupled_mass((0, 0, 0, 0), (0, 0, F(1), 0), vecs) == 0


def test_weights_cover_combined_mass():
    inst = gadgets.generate(gadgets.Irrational(Fraction(1, 4)))
    classes = initial_classes(inst)
    for _ in range(5):
        assert sum(c.weight for c in classes) == 2
        classes = refine_classes(classes, inst.lmc)


def test_level_bounds_without_retirement_match():
    inst = gadgets.generate(gadgets.Parallel((Fraction(1, 8), Fraction(1, 4))))
    basis = equivalence_basis(inst)
    seq = BracketSequence(inst, basis)
    classes = initial_classes(inst)
    for _ in range(6):
        assert seq.level() == level_bounds(classes, basis)
        seq.advance()
        classes = refine_classes(classes, inst.lmc)


def test_naive_matches_independent_oracle():
    inst = gadgets.generate(gadgets.Example1())
    for k in range(4):
        assert naive_level_bounds(inst, k) == per_word_bounds(inst, k)


def test_process_pool_matches_serial():
    inst = gadgets.generate(gadgets.Parallel((Fraction(1, 8), Fraction(3, 8))))
    serial = approximate(inst, Fraction(1, 20), max_depth=12)
    pooled = approximate(inst, Fraction(1, 20), max_depth=12, jobs=2)
    assert serial == pooled


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_coupled_mass_matches_word_lp(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, max_states=3, letters=2)
    basis = equivalence_basis(inst)
    funcs = word_functionals(inst, inst.lmc.n)
    n = inst.lmc.n
    u = tuple(Fraction(rng.randint(0, 3), 4) for _ in range(n))
    v = tuple(Fraction(rng.randint(0, 3), 4) for _ in range(n))
    assert coupled_mass(u, v, basis.vectors) == coupled_mass_by_words(u, v, funcs)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_brackets_nest(seed):
    inst = random_instance(random.Random(seed), max_states=4, letters=2)
    hist = bracket_history(inst, 6)
    for a, b in zip(hist, hist[1:]):
        assert 0 <= a.lower <= b.lower <= b.upper <= a.upper <= 1


def test_irrational_depth_one_classes():
    inst = gadgets.generate(gadgets.Irrational(Fraction(1, 4)))
    classes = refine_classes(initial_classes(inst), inst.lmc)
    assert len(classes) == 3
    F = Fraction
    by_pair = {c.pair: c.weight for c in classes}
    assert by_pair[((F(2, 3), 0, 0), (0, F(1, 3), 0))] == F(3, 4)
    assert by_pair[((F(1, 3), 0, 0), (0, F(2, 3), 0))] == F(3, 4)
    assert by_pair[((0, 0, F(1, 2)), (0, 0, F(1, 2)))] == F(1, 2)


def test_irrational_depth_two_merges_ab_and_ba():
    inst = gadgets.generate(gadgets.Irrational(Fraction(1, 4)))
    classes = initial_classes(inst)
    for _ in range(2):
        classes = refine_classes(classes, inst.lmc)
    # aa, ab = ba, bb, ac, bc, cc; words ca and cb die on both sides
    assert len(classes) == 6
