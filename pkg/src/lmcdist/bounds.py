"""Certified rational brackets around the total variation distance.

At depth k the distance lies in ``[1 - min(k), 1 - con(k)]`` where
``min(k)`` sums ``min(|pi1^w|, |pi2^w|)`` and ``con(k)`` sums the largest
equivalently coupled sub-mass over all words of length k.  Both quantities
are positively homogeneous in the pair ``(pi1^w, pi2^w)``, so words whose
pairs agree after normalization are merged into one weighted class.
"""
from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Lmc, LmcError, ProblemInstance
from .dist_one import distance_one
from .linalg import EquivalenceBasis, equivalence_basis, is_equivalent
from .lp import LinearProgram, lp_maximize

_ZERO = Fraction(0)
_ONE = Fraction(1)

Pair = tuple[tuple[Fraction, ...], tuple[Fraction, ...]]


@dataclass(frozen=True)
class PrefixClass:
    """Normalized pair (combined mass 1) standing for ``weight`` units of combined mass."""

    pair: Pair
    weight: Fraction

    @property
    def masses(self) -> tuple[Fraction, Fraction]:
        return sum(self.pair[0], _ZERO), sum(self.pair[1], _ZERO)


@dataclass(frozen=True)
class Bracket:
    lower: Fraction
    upper: Fraction
    depth: int

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper


class ApproxStatus(enum.Enum):
    EXACT = "Exact"
    CONVERGED = "Converged"
    DEPTH_CAPPED = "DepthCapped"


@dataclass(frozen=True)
class ApproxReport:
    bracket: Bracket
    status: ApproxStatus
    history: tuple[Bracket, ...] = field(default=())

    def classify(self, threshold: Fraction) -> str:
        """Sound comparison of the distance against ``threshold``."""
        if self.bracket.lower >= threshold:
            return "above"
        if self.bracket.upper < threshold:
            return "below"
        return "undecided"


def _normalize(u: Sequence[Fraction], v: Sequence[Fraction]):
    total = sum(u, _ZERO) + sum(v, _ZERO)
    if total == 0:
        return None
    inv = 1 / total
    return (tuple(x * inv for x in u), tuple(x * inv for x in v)), total


def initial_classes(inst: ProblemInstance) -> list[PrefixClass]:
    pair, total = _normalize(inst.pi1.weights, inst.pi2.weights)
    return [PrefixClass(pair, total)]


def _mul(vec: Sequence[Fraction], m) -> tuple[Fraction, ...]:
    n = len(vec)
    out = [_ZERO] * n
    for i, w in enumerate(vec):
        if w:
            row = m[i]
            for j in range(n):
                if row[j]:
                    out[j] += w * row[j]
    return tuple(out)


def refine_classes(classes: Iterable[PrefixClass], lmc: Lmc) -> list[PrefixClass]:
    """Extend every class by every letter, renormalize and merge equal pairs."""
    merged: dict[Pair, Fraction] = {}
    for cls in classes:
        u, v = cls.pair
        for a in lmc.alphabet:
            m = lmc.matrices[a]
            res = _normalize(_mul(u, m), _mul(v, m))
            if res is None:
                continue
            pair, scale = res
            merged[pair] = merged.get(pair, _ZERO) + cls.weight * scale
    return [PrefixClass(p, w) for p, w in merged.items()]


def coupled_mass(u: Sequence[Fraction], v: Sequence[Fraction],
                 vectors: Sequence[Sequence[Fraction]]) -> Fraction:
    """``max |mu1|`` over ``0 <= mu1 <= u``, ``0 <= mu2 <= v`` with ``(mu1 mu2).b = 0``."""
    if tuple(u) == tuple(v):
        return sum(u, _ZERO)
    n = len(u)
    left = [q for q in range(n) if u[q] > 0]
    right = [q for q in range(n) if v[q] > 0]
    if not left or not right:
        return _ZERO
    k1, k2 = len(left), len(right)
    nvars = 2 * (k1 + k2)
    A = []
    b = []
    for vec in vectors:
        row = [vec[q] for q in left] + [vec[n + q] for q in right] + [_ZERO] * (k1 + k2)
        if any(row):
            A.append(row)
            b.append(_ZERO)
    # x <= bound  as  x + slack = bound
    for i, q in enumerate(left):
        row = [_ZERO] * nvars
        row[i] = _ONE
        row[k1 + k2 + i] = _ONE
        A.append(row)
        b.append(u[q])
    for i, q in enumerate(right):
        row = [_ZERO] * nvars
        row[k1 + i] = _ONE
        row[2 * k1 + k2 + i] = _ONE
        A.append(row)
        b.append(v[q])
    objective = [_ONE] * k1 + [_ZERO] * (nvars - k1)
    out = lp_maximize(LinearProgram(tuple(objective), tuple(map(tuple, A)), tuple(b)))
    if not out.optimal:
        raise ArithmeticError(f"coupling program not optimal: {out.status}")
    return out.optimum


def _class_bounds(cls: PrefixClass, vectors) -> tuple[Fraction, Fraction]:
    m1, m2 = cls.masses
    lo = min(m1, m2)
    if lo == 0:
        return _ZERO, _ZERO
    return lo, coupled_mass(cls.pair[0], cls.pair[1], vectors)


def level_bounds(classes: Iterable[PrefixClass], basis: EquivalenceBasis) -> tuple[Fraction, Fraction]:
    """Return ``(min_k, con_k)`` for classes at a common depth."""
    min_k = _ZERO
    con_k = _ZERO
    for cls in classes:
        lo, co = _class_bounds(cls, basis.vectors)
        if not (_ONE >= lo >= co >= 0):
            raise ArithmeticError(f"per-class bound ordering violated: min={lo} con={co}")
        min_k += cls.weight * lo
        con_k += cls.weight * co
    return min_k, con_k


def _solve_one(args):
    u, v, vectors = args
    return coupled_mass(u, v, vectors)


class BracketSequence:
    """Depth-by-depth brackets with class merging, LP caching and settled-mass retirement.

    A class whose min and con parts agree contributes the same amount to
    every deeper level (min can only shrink and con only grow under
    refinement), so it is folded into ``settled`` and not refined further.
    The emitted values equal the plain per-word sums exactly.
    """

    def __init__(self, inst: ProblemInstance, basis: EquivalenceBasis | None = None,
                 jobs: int = 1):
        self.inst = inst
        self.basis = basis if basis is not None else equivalence_basis(inst)
        self.jobs = jobs
        self.depth = 0
        self.active = initial_classes(inst)
        self.settled = _ZERO
        self._cache: dict[Pair, Fraction] = {}

    def _solve(self, pairs: list[Pair]) -> None:
        todo = [p for p in dict.fromkeys(pairs) if p not in self._cache]
        if not todo:
            return
        vectors = self.basis.vectors
        if self.jobs > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                values = list(pool.map(_solve_one, [(u, v, vectors) for u, v in todo],
                                       chunksize=max(1, len(todo) // (4 * self.jobs))))
        else:
            values = [coupled_mass(u, v, vectors) for u, v in todo]
        self._cache.update(zip(todo, values))

    def level(self) -> tuple[Fraction, Fraction]:
        """``(min_k, con_k)`` at the current depth; retires settled classes."""
        need = [c.pair for c in self.active if min(c.masses) > 0]
        self._solve(need)
        min_k = con_k = self.settled
        still = []
        for cls in self.active:
            lo = min(cls.masses)
            co = self._cache[cls.pair] if lo > 0 else _ZERO
            if not (_ONE >= lo >= co >= 0):
                raise ArithmeticError(f"per-class bound ordering violated: min={lo} con={co}")
            min_k += cls.weight * lo
            con_k += cls.weight * co
            if lo == co:
                self.settled += cls.weight * lo
            else:
                still.append(cls)
        self.active = still
        return min_k, con_k

    def bracket(self) -> Bracket:
        min_k, con_k = self.level()
        return Bracket(_ONE - min_k, _ONE - con_k, self.depth)

    def advance(self) -> None:
        self.active = refine_classes(self.active, self.inst.lmc)
        self.depth += 1

    def __iter__(self):
        while True:
            yield self.bracket()
            self.advance()


def bracket_history(inst: ProblemInstance, max_depth: int,
                    basis: EquivalenceBasis | None = None) -> list[Bracket]:
    """Brackets at depths ``0..max_depth`` (no decision fast paths)."""
    seq = BracketSequence(inst, basis)
    out = []
    for br in seq:
        out.append(br)
        if br.depth >= max_depth:
            break
    return out


def approximate(inst: ProblemInstance, eps, max_depth: int = 30, jobs: int = 1) -> ApproxReport:
    eps = Fraction(eps)
    if eps <= 0:
        raise LmcError("eps must be positive")
    basis = equivalence_basis(inst)
    if is_equivalent(inst.pi1, inst.pi2, basis):
        br = Bracket(_ZERO, _ZERO, 0)
        return ApproxReport(br, ApproxStatus.EXACT, (br,))
    if distance_one(inst, basis):
        br = Bracket(_ONE, _ONE, 0)
        return ApproxReport(br, ApproxStatus.EXACT, (br,))
    history = []
    for br in BracketSequence(inst, basis, jobs=jobs):
        history.append(br)
        if br.width <= eps:
            return ApproxReport(br, ApproxStatus.CONVERGED, tuple(history))
        if br.depth >= max_depth:
            return ApproxReport(br, ApproxStatus.DEPTH_CAPPED, tuple(history))
    raise AssertionError("unreachable")


def naive_level_bounds(inst: ProblemInstance, k: int,
                       basis: EquivalenceBasis | None = None) -> tuple[Fraction, Fraction]:
    """Per-word enumeration of ``(min(k), con(k))`` without any merging."""
    import itertools

    if basis is None:
        basis = equivalence_basis(inst)
    lmc = inst.lmc
    min_k = con_k = _ZERO
    for word in itertools.product(lmc.alphabet, repeat=k):
        u, v = inst.pi1.weights, inst.pi2.weights
        for a in word:
            u = _mul(u, lmc.matrices[a])
            v = _mul(v, lmc.matrices[a])
        lo = min(sum(u, _ZERO), sum(v, _ZERO))
        min_k += lo
        if lo > 0:
            con_k += coupled_mass(u, v, basis.vectors)
    return min_k, con_k
