"""Exact vector algebra and language equivalence.

Two subdistributions are equivalent when every finite word has the same
probability under both.  The word functionals ``blockdiag(M(w), M(w)) . eta``
with ``eta = (1,..,1,-1,..,-1)`` span a space of dimension at most 2|Q|;
equivalence is orthogonality of the glued row vector to a basis of it.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Lmc, LmcError, ProblemInstance, SubDistribution

RationalVector = tuple[Fraction, ...]

_ZERO = Fraction(0)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise LmcError(f"dimension mismatch: {len(u)} vs {len(v)}")
    total = _ZERO
    for x, y in zip(u, v):
        if x and y:
            total += x * y
    return total


class EchelonSet:
    """Row-echelon set of rational vectors for incremental independence tests.

    ``rows[k]`` has its leading nonzero entry at ``pivots[k]``; every later
    row is zero there.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def reduce(self, vec: Sequence[Fraction]) -> list[Fraction]:
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p] / row[p]
                for j in range(p, self.dim):
                    if row[j]:
                        v[j] -= f * row[j]
        return v

    def insert(self, vec: Sequence[Fraction]) -> bool:
        """Add ``vec`` if independent of the current set; report whether it was."""
        if len(vec) != self.dim:
            raise LmcError("dimension mismatch")
        v = self.reduce(vec)
        for p, x in enumerate(v):
            if x:
                self.rows.append(v)
                self.pivots.append(p)
                return True
        return False

    def __len__(self):
        return len(self.rows)


@dataclass(frozen=True)
class EquivalenceBasis:
    vectors: tuple[RationalVector, ...]
    source: ProblemInstance

    @property
    def dim(self) -> int:
        return 2 * self.source.lmc.n

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def _block_apply(m, v: RationalVector, n: int) -> RationalVector:
    """``blockdiag(m, m) . v`` for a column vector ``v`` of length 2n."""
    out = []
    for half in (v[:n], v[n:]):
        for i in range(n):
            row = m[i]
            s = _ZERO
            for j in range(n):
                if row[j] and half[j]:
                    s += row[j] * half[j]
            out.append(s)
    return tuple(out)


def equivalence_basis(inst: ProblemInstance) -> EquivalenceBasis:
    """Worklist closure of ``{eta}`` under the per-letter block matrices.

    Letters are processed in alphabet order from a FIFO queue, so the
    returned vectors are deterministic.
    """
    lmc = inst.lmc
    n = lmc.n
    eta = tuple([Fraction(1)] * n + [Fraction(-1)] * n)
    ech = EchelonSet(2 * n)
    basis = []
    queue = deque()
    if ech.insert(eta):
        basis.append(eta)
        queue.append(eta)
    while queue:
        v = queue.popleft()
        for a in lmc.alphabet:
            u = _block_apply(lmc.matrices[a], v, n)
            if ech.insert(u):
                basis.append(u)
                queue.append(u)
    return EquivalenceBasis(tuple(basis), inst)


def glue(mu1: Sequence[Fraction], mu2: Sequence[Fraction]) -> RationalVector:
    return tuple(mu1) + tuple(mu2)


def is_equivalent(mu1: SubDistribution, mu2: SubDistribution, basis: EquivalenceBasis) -> bool:
    n = basis.source.lmc.n
    if len(mu1) != n or len(mu2) != n:
        raise LmcError(f"dimension mismatch: expected {n} states")
    g = glue(mu1.weights, mu2.weights)
    return all(dot(g, b) == 0 for b in basis.vectors)


def _masses_by_word(mu: SubDistribution, lmc: Lmc, length: int):
    """Yield ``(word, mass)`` for every word of ``length`` in lexicographic order."""
    n = lmc.n
    mats = [lmc.matrices[a] for a in lmc.alphabet]

    def rec(vec, depth):
        if depth == length:
            yield sum(vec, _ZERO)
            return
        for m in mats:
            nxt = [_ZERO] * n
            for i, w in enumerate(vec):
                if w:
                    row = m[i]
                    for j in range(n):
                        if row[j]:
                            nxt[j] += w * row[j]
            yield from rec(nxt, depth + 1)

    return rec(list(mu.weights), 0)


class InstanceTooLargeError(LmcError):
    pass


def is_equivalent_bruteforce(mu1: SubDistribution, mu2: SubDistribution, lmc: Lmc,
                             max_words: int = 1 << 18) -> bool:
    """Compare the masses of every word of length exactly 2|Q|."""
    length = 2 * lmc.n
    count = len(lmc.alphabet) ** length
    if count > max_words:
        raise InstanceTooLargeError(f"{count} words of length {length} exceed the cap {max_words}")
    for m1, m2 in zip(_masses_by_word(mu1, lmc, length), _masses_by_word(mu2, lmc, length)):
        if m1 != m2:
            return False
    return True


def words(alphabet: Sequence[str], length: int):
    return itertools.product(alphabet, repeat=length)


def distance_zero(inst: ProblemInstance, basis: EquivalenceBasis | None = None) -> bool:
    if basis is None:
        basis = equivalence_basis(inst)
    return is_equivalent(inst.pi1, inst.pi2, basis)
