"""Example chains with known distances, and exact surd arithmetic for their closed forms."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import LmcError, ProblemInstance, check_lmc, disjoint_union, make_lmc

_HALF = Fraction(1, 2)
_ONE = Fraction(1)


# -- surds ------------------------------------------------------------------

def _square_split(n: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``n = s*s*r`` and ``r`` squarefree."""
    s, r = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            r *= p
        p += 1 if p == 2 else 2
    return s, r * n


@dataclass(frozen=True)
class SurdSum:
    """Exact value ``sum(c * sqrt(r))`` with rational ``c`` and squarefree natural ``r``."""

    terms: tuple[tuple[Fraction, int], ...]

    @classmethod
    def of(cls, pairs) -> "SurdSum":
        acc: dict[int, Fraction] = {}
        for c, radicand in pairs:
            radicand = Fraction(radicand)
            c = Fraction(c)
            if radicand < 0:
                raise ValueError("negative radicand")
            # sqrt(p/q) = sqrt(p*q)/q
            num = radicand.numerator * radicand.denominator
            s, r = _square_split(num)
            coeff = c * s / radicand.denominator
            if coeff and num:
                acc[r] = acc.get(r, Fraction(0)) + coeff
        return cls(tuple(sorted(((c, r) for r, c in acc.items() if c), key=lambda t: t[1])))

    @classmethod
    def rational(cls, value) -> "SurdSum":
        return cls.of([(value, 1)])

    def is_rational(self) -> bool:
        return all(r == 1 for _, r in self.terms)

    def __float__(self) -> float:
        return math.fsum(float(c) * math.sqrt(r) for c, r in self.terms)

    def _enclose(self, bits: int) -> tuple[Fraction, Fraction]:
        lo = hi = Fraction(0)
        scale = 1 << bits
        for c, r in self.terms:
            root = math.isqrt(r * scale * scale)
            a, b = Fraction(root, scale), Fraction(root + (root * root != r * scale * scale), scale)
            if c >= 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi

    def compare(self, q) -> int:
        """Exact sign of ``self - q``."""
        q = Fraction(q)
        if self.is_rational():
            v = sum((c for c, _ in self.terms), Fraction(0))
            return (v > q) - (v < q)
        # square roots of distinct squarefree naturals are linearly independent
        # over the rationals, so an irrational sum never equals q
        bits = 64
        while True:
            lo, hi = self._enclose(bits)
            if lo > q:
                return 1
            if hi < q:
                return -1
            bits *= 2

    def __lt__(self, q):
        return self.compare(q) < 0

    def __le__(self, q):
        return self.compare(q) <= 0

    def __gt__(self, q):
        return self.compare(q) > 0

    def __ge__(self, q):
        return self.compare(q) >= 0

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, r in self.terms:
            parts.append(str(c) if r == 1 else (f"sqrt({r})" if c == 1 else f"{c}*sqrt({r})"))
        return " + ".join(parts)


# -- specs ------------------------------------------------------------------

def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _check_x(x: Fraction) -> None:
    if not 0 < x < _HALF:
        raise LmcError(f"parameter x={x} must lie strictly between 0 and 1/2")


@dataclass(frozen=True)
class Example1:
    """Two 4-transition chains (q1, r1) and (q2, r2), placed side by side."""


@dataclass(frozen=True)
class TwoState:
    """Two states swapping on b; the pair has distance 1."""


@dataclass(frozen=True)
class Irrational:
    x: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", _frac(self.x))
        _check_x(self.x)


@dataclass(frozen=True)
class Parallel:
    xs: tuple[Fraction, ...]

    def __post_init__(self):
        xs = tuple(_frac(x) for x in self.xs)
        if not xs:
            raise LmcError("Parallel needs at least one parameter")
        for x in xs:
            _check_x(x)
        object.__setattr__(self, "xs", xs)


@dataclass(frozen=True)
class BernoulliChain:
    theta: Fraction
    x: Fraction

    def __post_init__(self):
        object.__setattr__(self, "theta", _frac(self.theta))
        object.__setattr__(self, "x", _frac(self.x))
        if self.theta <= 1:
            raise LmcError("theta must exceed 1")
        if not -_HALF <= self.x <= _HALF:
            raise LmcError("x must lie in [-1/2, 1/2]")


@dataclass(frozen=True)
class SqrtSum:
    """Square-root-sum instance ``sum(sqrt(s_i)) >= t`` encoded as a parallel gadget."""

    s: tuple[int, ...]
    t: int

    def __post_init__(self):
        s = tuple(int(v) for v in self.s)
        if not s or any(v < 1 for v in s) or int(self.t) < 1:
            raise LmcError("SqrtSum needs s_i >= 1 and t >= 1")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", int(self.t))

    @property
    def h(self) -> int:
        return 3 * max(self.s)

    @property
    def xs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(2 * v, self.h ** 2) for v in self.s)

    @property
    def tau(self) -> Fraction:
        return Fraction(self.t, len(self.s) * self.h)

    def as_parallel(self) -> Parallel:
        return Parallel(self.xs)


GadgetSpec = Example1 | TwoState | Irrational | Parallel | BernoulliChain | SqrtSum


# -- generators -------------------------------------------------------------

def _example1() -> ProblemInstance:
    q = make_lmc(["q1", "r1"], ["a", "b", "c"], [
        ("q1", "a", "q1", _HALF), ("q1", "b", "q1", Fraction(1, 4)),
        ("q1", "c", "r1", Fraction(1, 4)), ("r1", "c", "r1", _ONE)])
    r = make_lmc(["q2", "r2"], ["a", "b", "c"], [
        ("q2", "a", "q2", Fraction(1, 4)), ("q2", "b", "q2", _HALF),
        ("q2", "c", "r2", Fraction(1, 4)), ("r2", "c", "r2", _ONE)])
    return disjoint_union((q, q.dirac("q1")), (r, r.dirac("q2")))


def _two_state() -> ProblemInstance:
    lmc = make_lmc(["q1", "q2"], ["a", "b"], [
        ("q1", "a", "q1", Fraction(1, 3)), ("q1", "b", "q2", Fraction(2, 3)),
        ("q2", "a", "q2", Fraction(2, 3)), ("q2", "b", "q1", Fraction(1, 3))])
    return ProblemInstance(lmc, lmc.dirac("q1"), lmc.dirac("q2"))


def _irrational(x: Fraction) -> ProblemInstance:
    lmc = make_lmc(["q1", "q2", "r"], ["a", "b", "c"], [
        ("q1", "a", "q1", _HALF), ("q1", "b", "q1", _HALF - x), ("q1", "c", "r", x),
        ("q2", "a", "q2", _HALF - x), ("q2", "b", "q2", _HALF), ("q2", "c", "r", x),
        ("r", "c", "r", _ONE)])
    return ProblemInstance(lmc, lmc.dirac("q1"), lmc.dirac("q2"))


def _parallel(xs: Sequence[Fraction]) -> ProblemInstance:
    n = len(xs)
    picks = [f"c{i}" for i in range(1, n + 1)]
    states = ["p1", "p2"] + [f"q1_{i}" for i in range(1, n + 1)] \
        + [f"q2_{i}" for i in range(1, n + 1)] + ["r"]
    share = Fraction(1, n)
    trans = []
    for i, x in enumerate(xs, start=1):
        trans += [
            ("p1", f"c{i}", f"q1_{i}", share), ("p2", f"c{i}", f"q2_{i}", share),
            (f"q1_{i}", "a", f"q1_{i}", _HALF), (f"q1_{i}", "b", f"q1_{i}", _HALF - x),
            (f"q1_{i}", "c", "r", x),
            (f"q2_{i}", "a", f"q2_{i}", _HALF - x), (f"q2_{i}", "b", f"q2_{i}", _HALF),
            (f"q2_{i}", "c", "r", x),
        ]
    trans.append(("r", "c", "r", _ONE))
    lmc = make_lmc(states, picks + ["a", "b", "c"], [t for t in trans if t[3]])
    return ProblemInstance(lmc, lmc.dirac("p1"), lmc.dirac("p2"))


def _bernoulli(theta: Fraction, x: Fraction) -> ProblemInstance:
    lo = 1 / (2 * theta)
    cross = _HALF - lo
    trans = [
        ("p1", "a", "q1", _HALF - x), ("p1", "b", "r1", _HALF + x),
        ("p2", "a", "q2", _HALF + x), ("p2", "b", "r2", _HALF - x),
        ("q1", "a", "q1", _HALF), ("q1", "b", "q1", lo), ("q1", "a", "q2", cross),
        ("q2", "b", "q2", _HALF), ("q2", "a", "q2", lo), ("q2", "b", "q1", cross),
        ("r1", "a", "r1", _ONE), ("r2", "b", "r2", _ONE),
    ]
    lmc = make_lmc(["p1", "p2", "q1", "q2", "r1", "r2"], ["a", "b"],
                   [t for t in trans if t[3]])
    return ProblemInstance(lmc, lmc.dirac("p1"), lmc.dirac("p2"))


def generate(spec: GadgetSpec) -> ProblemInstance:
    if isinstance(spec, Example1):
        inst = _example1()
    elif isinstance(spec, TwoState):
        inst = _two_state()
    elif isinstance(spec, Irrational):
        inst = _irrational(spec.x)
    elif isinstance(spec, Parallel):
        inst = _parallel(spec.xs)
    elif isinstance(spec, SqrtSum):
        inst = _parallel(spec.xs)
    elif isinstance(spec, BernoulliChain):
        inst = _bernoulli(spec.theta, spec.x)
    else:
        raise TypeError(f"unknown gadget spec {spec!r}")
    check_lmc(inst.lmc)
    return inst


def closed_form(spec: GadgetSpec) -> SurdSum:
    """Exact distance between the two initial states of ``generate(spec)``."""
    if isinstance(spec, TwoState):
        return SurdSum.rational(1)
    if isinstance(spec, Example1):
        return SurdSum.of([(Fraction(1, 4), 2)])
    if isinstance(spec, Irrational):
        return SurdSum.of([(_HALF, 2 * spec.x)])
    if isinstance(spec, Parallel):
        n = len(spec.xs)
        return SurdSum.of([(_HALF / n, 2 * x) for x in spec.xs])
    if isinstance(spec, SqrtSum):
        scale = Fraction(1, len(spec.s) * spec.h)
        return SurdSum.of([(scale, v) for v in spec.s])
    if isinstance(spec, BernoulliChain):
        raise LmcError("no closed form for the Bernoulli chain; use lmcdist.bernoulli.d_theta")
    raise TypeError(f"unknown gadget spec {spec!r}")
