"""Random instance generators with small denominators, shared by the tests."""
from __future__ import annotations

import random
from fractions import Fraction

from lmcdist.core import ProblemInstance, disjoint_union, make_lmc


def _composition(rng: random.Random, total: int, parts: int) -> list[int]:
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0] + cuts + [total]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]


def random_lmc(rng: random.Random, n: int, k: int, denom: int = 4, density: float = 0.5):
    states = [f"s{i}" for i in range(n)]
    letters = "abcd"[:k]
    slots = [(a, t) for a in letters for t in states]
    trans = []
    for s in states:
        chosen = [sl for sl in slots if rng.random() < density] or [rng.choice(slots)]
        chosen = chosen[:denom]
        weights = _composition(rng, denom - len(chosen), len(chosen))
        for (a, t), w in zip(chosen, weights):
            trans.append((s, a, t, Fraction(w + 1, denom)))
    return make_lmc(states, list(letters), trans)


def random_distribution(rng: random.Random, lmc, denom: int = 4):
    if rng.random() < 0.5:
        return lmc.dirac(rng.choice(lmc.states))
    support = rng.sample(lmc.states, rng.randint(1, min(2, lmc.n)))
    weights = _composition(rng, denom - len(support), len(support))
    return lmc.subdistribution({s: Fraction(w + 1, denom) for s, w in zip(support, weights)})


def random_instance(rng: random.Random, max_states: int = 4, letters: int = 2,
                    denom: int = 4) -> ProblemInstance:
    """Mostly plain random chains; a share are self-unions carrying an equivalent pair."""
    if rng.random() < 0.35 and max_states >= 2:
        base = random_lmc(rng, rng.randint(1, max_states // 2), letters, denom)
        inst = disjoint_union((base, random_distribution(rng, base, denom)),
                              (base, random_distribution(rng, base, denom)))
        if rng.random() < 0.6:
            # same distribution split across both copies: equivalent by construction
            w = inst.pi1.weights
            half = [(a + b) / 2 for a, b in zip(w, inst.pi1.weights[base.n:] + inst.pi1.weights[:base.n])]
            mixed = inst.lmc.subdistribution(
                {inst.lmc.states[i]: half[i] for i in range(inst.lmc.n) if half[i]})
            return ProblemInstance(inst.lmc, inst.pi1, mixed)
        return inst
    if rng.random() < 0.3 and max_states >= 2:
        # two unrelated chains side by side, often distance 1
        left = random_lmc(rng, rng.randint(1, max_states // 2), letters, denom, density=0.3)
        right = random_lmc(rng, rng.randint(1, max_states // 2), letters, denom, density=0.3)
        return disjoint_union((left, random_distribution(rng, left, denom)),
                              (right, random_distribution(rng, right, denom)))
    lmc = random_lmc(rng, rng.randint(1, max_states), letters, denom)
    return ProblemInstance(lmc, random_distribution(rng, lmc, denom),
                           random_distribution(rng, lmc, denom))


def instances(seed: int, count: int, **kw) -> list[ProblemInstance]:
    rng = random.Random(seed)
    return [random_instance(rng, **kw) for _ in range(count)]
