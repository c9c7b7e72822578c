"""Polynomial-time decision of whether two initial distributions have distance 1."""
from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import ProblemInstance
from .linalg import EquivalenceBasis, equivalence_basis
from .lp import lp_feasible

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class ReachSet:
    """Pairs ``(r1, r2)`` of state indices jointly reachable by some word."""

    pairs: frozenset[tuple[int, int]]
    n: int

    def projection(self, r1: int) -> frozenset[int]:
        return frozenset(r2 for q, r2 in self.pairs if q == r1)

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self):
        return len(self.pairs)


def _successors(inst: ProblemInstance):
    lmc = inst.lmc
    succ = []
    for a in lmc.alphabet:
        m = lmc.matrices[a]
        succ.append([[j for j, p in enumerate(row) if p > 0] for row in m])
    return succ


def reach_set(inst: ProblemInstance) -> ReachSet:
    """BFS over the product graph seeded with ``supp(pi1) x supp(pi2)``."""
    succ = _successors(inst)
    seeds = [(q1, q2) for q1 in sorted(inst.pi1.support) for q2 in sorted(inst.pi2.support)]
    seen = set(seeds)
    queue = deque(seeds)
    while queue:
        q1, q2 = queue.popleft()
        for s in succ:
            for r1 in s[q1]:
                for r2 in s[q2]:
                    if (r1, r2) not in seen:
                        seen.add((r1, r2))
                        queue.append((r1, r2))
    return ReachSet(frozenset(seen), inst.lmc.n)


def _coupling_program(left: Iterable[int], right: Iterable[int], basis: EquivalenceBasis,
                      pin: int | None):
    """Equality rows for ``mu1`` over ``left``, ``mu2`` over ``right`` with ``(mu1 mu2).b = 0``.

    With ``pin`` set, ``mu1(pin) = 1``; otherwise ``|mu1| = 1``.
    """
    n = basis.source.lmc.n
    left = list(left)
    right = list(right)
    A = []
    for b in basis.vectors:
        A.append([b[q] for q in left] + [b[n + q] for q in right])
    if pin is None:
        A.append([_ONE] * len(left) + [_ZERO] * len(right))
    else:
        A.append([_ONE if q == pin else _ZERO for q in left] + [_ZERO] * len(right))
    rhs = [_ZERO] * len(basis.vectors) + [_ONE]
    return A, rhs, len(left) + len(right)


def coupling_feasible(r1: int, targets: Iterable[int], basis: EquivalenceBasis) -> bool:
    """Is there ``mu1 >= 0`` with ``mu1(r1) = 1`` and ``mu2 >= 0`` on ``targets`` with ``mu1 == mu2``?"""
    targets = sorted(targets)
    if not targets:
        return False
    n = basis.source.lmc.n
    A, rhs, nvars = _coupling_program(range(n), targets, basis, pin=r1)
    feasible, _ = lp_feasible(A, rhs, nvars)
    return feasible


def distance_one(inst: ProblemInstance, basis: EquivalenceBasis | None = None,
                 jobs: int = 1) -> bool:
    """True iff the distance between ``pi1`` and ``pi2`` equals 1."""
    if basis is None:
        basis = equivalence_basis(inst)
    reach = reach_set(inst)
    candidates = [(r1, reach.projection(r1)) for r1 in range(inst.lmc.n)]
    candidates = [(r1, t) for r1, t in candidates if t]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(lambda c: coupling_feasible(c[0], c[1], basis), candidates)
            return not any(results)
    for r1, targets in candidates:
        if coupling_feasible(r1, targets, basis):
            return False
    return True


def distance_one_bruteforce(inst: ProblemInstance, basis: EquivalenceBasis | None = None) -> bool:
    """Exhaustive check over all reachable support pairs ``(supp(pi1^w), supp(pi2^w))``.

    Exponential in |Q|; used as a test oracle for :func:`distance_one`.
    """
    if basis is None:
        basis = equivalence_basis(inst)
    succ = _successors(inst)

    def image(support, s):
        return frozenset(r for q in support for r in s[q])

    start = (inst.pi1.support, inst.pi2.support)
    seen = {start}
    queue = deque([start])
    while queue:
        s1, s2 = queue.popleft()
        A, rhs, nvars = _coupling_program(sorted(s1), sorted(s2), basis, pin=None)
        if lp_feasible(A, rhs, nvars)[0]:
            return False
        for s in succ:
            nxt = (image(s1, s), image(s2, s))
            if nxt[0] and nxt[1] and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True
