"""Exact two-phase simplex over rationals.

Programs are in equality standard form: maximize ``c.x`` subject to
``A x = b`` and ``x >= 0``.  Pivoting follows Bland's least-index rule, so
degenerate programs cannot cycle.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

_ZERO = Fraction(0)


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LinearProgram:
    objective: tuple[Fraction, ...]
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.objective)
        if len(self.A) != len(self.b):
            raise ValueError("A and b have different row counts")
        if any(len(row) != n for row in self.A):
            raise ValueError("constraint row length differs from the variable count")

    @property
    def n(self) -> int:
        return len(self.objective)

    @classmethod
    def build(cls, objective, A, b) -> "LinearProgram":
        return cls(tuple(Fraction(x) for x in objective),
                   tuple(tuple(Fraction(x) for x in row) for row in A),
                   tuple(Fraction(x) for x in b))


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    optimum: Fraction | None = None
    witness: tuple[Fraction, ...] | None = None

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def _pivot(T: list[list[Fraction]], z: list[Fraction], basis: list[int], r: int, c: int) -> None:
    prow = T[r]
    piv = prow[c]
    if piv != 1:
        inv = 1 / piv
        for k, x in enumerate(prow):
            if x:
                prow[k] = x * inv
    nz = [k for k, x in enumerate(prow) if x]
    for i, row in enumerate(T):
        if i != r:
            f = row[c]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
    f = z[c]
    if f:
        for k in nz:
            z[k] -= f * prow[k]
    basis[r] = c


def _run(T, z, basis, ncols: int) -> bool:
    """Bland-rule simplex on columns ``< ncols``; False when unbounded."""
    while True:
        enter = -1
        for j in range(ncols):
            if z[j] > 0:
                enter = j
                break
        if enter < 0:
            return True
        best = None
        leave = -1
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            return False
        _pivot(T, z, basis, leave, enter)


def _phase_one(A, b, n: int):
    """Return ``(T, basis)`` with a feasible basis over the first n columns, or None."""
    rows = []
    rhs = []
    for row, bi in zip(A, b):
        row = [Fraction(x) for x in row]
        bi = Fraction(bi)
        if not any(row):
            if bi != 0:
                return None
            continue
        if bi < 0:
            rows.append([-x for x in row])
            rhs.append(-bi)
        else:
            rows.append(row)
            rhs.append(bi)
    m = len(rows)
    width = n + m
    T = []
    for i, row in enumerate(rows):
        art = [_ZERO] * m
        art[i] = Fraction(1)
        T.append(row + art + [rhs[i]])
    basis = [n + i for i in range(m)]
    # maximize -(sum of artificials); z[-1] holds minus the objective value
    z = [_ZERO] * (width + 1)
    for row in T:
        for k in range(n):
            if row[k]:
                z[k] += row[k]
        z[-1] += row[-1]
    _run(T, z, basis, width)
    if z[-1] != 0:
        return None
    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j]), -1)
            if col < 0:
                del T[i]
                del basis[i]
                continue
            _pivot(T, z, basis, i, col)
        i += 1
    for row in T:
        del row[n:width]
    return T, basis


def _witness(T, basis, n: int) -> tuple[Fraction, ...]:
    x = [_ZERO] * n
    for row, j in zip(T, basis):
        x[j] = row[-1]
    return tuple(x)


def lp_feasible(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], n: int | None = None):
    """Phase-1 test of ``{x >= 0 | A x = b}``; returns ``(feasible, witness)``."""
    if n is None:
        n = len(A[0]) if A else 0
    res = _phase_one(A, b, n)
    if res is None:
        return False, None
    T, basis = res
    return True, _witness(T, basis, n)


def lp_maximize(lp: LinearProgram) -> LpOutcome:
    n = lp.n
    res = _phase_one(lp.A, lp.b, n)
    if res is None:
        return LpOutcome(LpStatus.INFEASIBLE)
    T, basis = res
    c = [Fraction(x) for x in lp.objective]
    z = c + [_ZERO]
    for row, j in zip(T, basis):
        cb = c[j]
        if cb:
            for k, x in enumerate(row):
                if x:
                    z[k] -= cb * x
    if not _run(T, z, basis, n):
        return LpOutcome(LpStatus.UNBOUNDED)
    x = _witness(T, basis, n)
    return LpOutcome(LpStatus.OPTIMAL, -z[-1], x)
