"""Labelled Markov chains over exact rationals.

An :class:`Lmc` holds one |Q| x |Q| matrix per letter; the sum over all
letters is a stochastic matrix.  Subdistributions are dense tuples of
:class:`~fractions.Fraction` indexed by state declaration order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Matrix = tuple[tuple[Fraction, ...], ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class LmcError(ValueError):
    """Base class for model and input errors."""


class LmcSyntaxError(LmcError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownStateError(LmcSyntaxError):
    pass


class UnknownLetterError(LmcError):
    pass


class AlphabetMismatchError(LmcError):
    pass


class InvalidModelError(LmcError):
    """Raised when a chain fails :func:`validate_lmc`."""

    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(str(issue) for issue in report.issues))
        self.report = report


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer literal (optionally signed)."""
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"not a rational literal: {text!r}")
    value = Fraction(text)
    return value


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class Lmc:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    matrices: Mapping[str, Matrix]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise LmcError("duplicate state")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise LmcError("duplicate letter")
        n = len(self.states)
        mats = {}
        for a in self.alphabet:
            if a not in self.matrices:
                raise LmcError(f"missing matrix for letter {a!r}")
            rows = tuple(tuple(Fraction(x) for x in row) for row in self.matrices[a])
            if len(rows) != n or any(len(row) != n for row in rows):
                raise LmcError(f"matrix for letter {a!r} is not {n}x{n}")
            mats[a] = rows
        if set(self.matrices) - set(self.alphabet):
            raise LmcError("matrix given for a letter outside the alphabet")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "_index", {q: i for i, q in enumerate(self.states)})

    @property
    def n(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise LmcError(f"unknown state {state!r}") from None

    def matrix(self, letter: str) -> Matrix:
        try:
            return self.matrices[letter]
        except KeyError:
            raise UnknownLetterError(f"unknown letter {letter!r}") from None

    def transitions(self):
        """Yield ``(source, letter, target, probability)`` for nonzero entries."""
        for i, q in enumerate(self.states):
            for a in self.alphabet:
                row = self.matrices[a][i]
                for j, p in enumerate(row):
                    if p != 0:
                        yield q, a, self.states[j], p

    def subdistribution(self, weights: Mapping[str, Fraction] | None = None) -> "SubDistribution":
        vec = [_ZERO] * self.n
        for q, w in (weights or {}).items():
            vec[self.index(q)] += Fraction(w)
        return SubDistribution(tuple(vec))

    def dirac(self, state: str) -> "SubDistribution":
        return self.subdistribution({state: _ONE})


@dataclass(frozen=True)
class SubDistribution:
    weights: tuple[Fraction, ...]

    @property
    def mass(self) -> Fraction:
        return sum(self.weights, _ZERO)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, w in enumerate(self.weights) if w > 0)

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i: int) -> Fraction:
        return self.weights[i]

    def scaled(self, factor: Fraction) -> "SubDistribution":
        return SubDistribution(tuple(w * factor for w in self.weights))

    def as_dict(self, lmc: Lmc) -> dict[str, Fraction]:
        return {lmc.states[i]: w for i, w in enumerate(self.weights) if w != 0}


@dataclass(frozen=True)
class ProblemInstance:
    lmc: Lmc
    pi1: SubDistribution
    pi2: SubDistribution

    def __post_init__(self):
        for name, pi in (("init1", self.pi1), ("init2", self.pi2)):
            if len(pi) != self.lmc.n:
                raise LmcError(f"{name} has wrong dimension")
            if any(w < 0 for w in pi.weights):
                raise LmcError(f"{name} has a negative weight")
            if pi.mass != 1:
                raise LmcError(f"{name} has mass {pi.mass}, expected 1")

    def with_initial(self, pi1: SubDistribution, pi2: SubDistribution) -> "ProblemInstance":
        return ProblemInstance(self.lmc, pi1, pi2)


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class NotStochastic:
    state: str
    row_sum: Fraction

    def __str__(self):
        return f"state {self.state}: outgoing probabilities sum to {self.row_sum}"


@dataclass(frozen=True)
class NegativeProbability:
    state: str
    letter: str
    target: str
    value: Fraction

    def __str__(self):
        return f"negative probability {self.value} on {self.state} -{self.letter}-> {self.target}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self):
        return self.ok


def validate_lmc(lmc: Lmc) -> ValidationReport:
    issues = []
    for i, q in enumerate(lmc.states):
        total = _ZERO
        for a in lmc.alphabet:
            for j, p in enumerate(lmc.matrices[a][i]):
                if p < 0:
                    issues.append(NegativeProbability(q, a, lmc.states[j], p))
                total += p
        if total != 1:
            issues.append(NotStochastic(q, total))
    return ValidationReport(tuple(issues))


def check_lmc(lmc: Lmc) -> Lmc:
    report = validate_lmc(lmc)
    if not report.ok:
        raise InvalidModelError(report)
    return lmc


# -- dynamics ---------------------------------------------------------------

def step(mu: SubDistribution, a: str, lmc: Lmc) -> SubDistribution:
    """Return ``mu * M(a)``."""
    m = lmc.matrix(a)
    n = lmc.n
    if len(mu) != n:
        raise LmcError("subdistribution dimension does not match the chain")
    out = [_ZERO] * n
    for i, w in enumerate(mu.weights):
        if w == 0:
            continue
        row = m[i]
        for j in range(n):
            p = row[j]
            if p:
                out[j] += w * p
    return SubDistribution(tuple(out))


def apply_word(mu: SubDistribution, word: Iterable[str], lmc: Lmc) -> SubDistribution:
    for a in word:
        mu = step(mu, a, lmc)
    return mu


def word_mass(mu: SubDistribution, word: Iterable[str], lmc: Lmc) -> Fraction:
    return apply_word(mu, word, lmc).mass


def make_lmc(states: Sequence[str], alphabet: Sequence[str],
             transitions: Iterable[tuple[str, str, str, Fraction]]) -> Lmc:
    """Build a chain from ``(source, letter, target, p)`` entries; missing entries are 0."""
    idx = {q: i for i, q in enumerate(states)}
    n = len(states)
    mats = {a: [[_ZERO] * n for _ in range(n)] for a in alphabet}
    for q, a, t, p in transitions:
        if a not in mats:
            raise UnknownLetterError(f"unknown letter {a!r}")
        if q not in idx or t not in idx:
            raise LmcError(f"unknown state in transition {q} {a} {t}")
        mats[a][idx[q]][idx[t]] += Fraction(p)
    return Lmc(tuple(states), tuple(alphabet), {a: tuple(map(tuple, m)) for a, m in mats.items()})


def disjoint_union(inst1: tuple[Lmc, SubDistribution],
                   inst2: tuple[Lmc, SubDistribution]) -> ProblemInstance:
    """Place two chains side by side with block-diagonal matrices.

    State names are kept when the two state sets are disjoint; otherwise
    every state gets a ``.1`` / ``.2`` suffix.
    """
    (m1, p1), (m2, p2) = inst1, inst2
    if set(m1.alphabet) != set(m2.alphabet):
        raise AlphabetMismatchError(
            f"alphabets differ: {sorted(m1.alphabet)} vs {sorted(m2.alphabet)}")
    if set(m1.states) & set(m2.states):
        names1 = tuple(f"{q}.1" for q in m1.states)
        names2 = tuple(f"{q}.2" for q in m2.states)
    else:
        names1, names2 = m1.states, m2.states
    n1, n2 = m1.n, m2.n
    mats = {}
    for a in m1.alphabet:
        rows = [tuple(r) + (_ZERO,) * n2 for r in m1.matrices[a]]
        rows += [(_ZERO,) * n1 + tuple(r) for r in m2.matrices[a]]
        mats[a] = tuple(rows)
    lmc = Lmc(names1 + names2, m1.alphabet, mats)
    pi1 = SubDistribution(tuple(p1.weights) + (_ZERO,) * n2)
    pi2 = SubDistribution((_ZERO,) * n1 + tuple(p2.weights))
    return ProblemInstance(lmc, pi1, pi2)


# -- text format ------------------------------------------------------------

_KEYS = ("states", "alphabet", "init1", "init2", "trans")


def parse_lmc(text: str) -> ProblemInstance:
    """Parse the line-oriented ``.lmc`` format into a validated instance."""
    states: list[str] | None = None
    alphabet: list[str] | None = None
    inits: dict[str, tuple[int, list]] = {}
    trans: list[tuple[int, list]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key_s = key.strip()
        if not sep or key_s not in _KEYS:
            raise LmcSyntaxError(f"expected one of {', '.join(k + ':' for k in _KEYS)}",
                                 lineno, len(line) - len(line.lstrip()) + 1)
        offset = len(key) + 1
        tokens = [(m.group(), offset + m.start() + 1) for m in re.finditer(r"\S+", rest)]
        if key_s in ("states", "alphabet"):
            if (states if key_s == "states" else alphabet) is not None:
                raise LmcSyntaxError(f"repeated {key_s}: line", lineno)
            names = [t for t, _ in tokens]
            seen = set()
            for name, col in tokens:
                if name in seen:
                    kind = "state" if key_s == "states" else "letter"
                    raise LmcSyntaxError(f"duplicate {kind} {name!r}", lineno, col)
                seen.add(name)
            if not names:
                raise LmcSyntaxError(f"empty {key_s}: line", lineno)
            if key_s == "states":
                states = names
            else:
                alphabet = names
        elif key_s in ("init1", "init2"):
            if key_s in inits:
                raise LmcSyntaxError(f"repeated {key_s}: line", lineno)
            inits[key_s] = (lineno, tokens)
        else:
            trans.append((lineno, tokens))

    if states is None:
        raise LmcSyntaxError("missing states: line", 1)
    if alphabet is None:
        raise LmcSyntaxError("missing alphabet: line", 1)
    for k in ("init1", "init2"):
        if k not in inits:
            raise LmcSyntaxError(f"missing {k}: line", 1)

    known = set(states)
    letters = set(alphabet)

    def _rational(tok: str, lineno: int, col: int) -> Fraction:
        try:
            return parse_rational(tok)
        except (ValueError, ZeroDivisionError):
            raise LmcSyntaxError(f"invalid probability literal {tok!r}", lineno, col) from None

    def _state(tok: str, lineno: int, col: int) -> str:
        if tok not in known:
            raise UnknownStateError(f"unknown state {tok!r}", lineno, col)
        return tok

    entries = []
    seen_edges = set()
    for lineno, tokens in trans:
        if len(tokens) != 4:
            col = tokens[min(len(tokens), 4) - 1][1] if tokens else 1
            raise LmcSyntaxError("trans: expects <source> <letter> <target> <probability>",
                                 lineno, col)
        (src, c0), (a, c1), (dst, c2), (p, c3) = tokens
        _state(src, lineno, c0)
        if a not in letters:
            raise LmcSyntaxError(f"unknown letter {a!r}", lineno, c1)
        _state(dst, lineno, c2)
        if (src, a, dst) in seen_edges:
            raise LmcSyntaxError(f"duplicate transition {src} {a} {dst}", lineno, c0)
        seen_edges.add((src, a, dst))
        entries.append((src, a, dst, _rational(p, lineno, c3)))

    lmc = check_lmc(make_lmc(states, alphabet, entries))

    pis = []
    for k in ("init1", "init2"):
        lineno, tokens = inits[k]
        weights: dict[str, Fraction] = {}
        for tok, col in tokens:
            name, eq, val = tok.partition("=")
            if not eq:
                raise LmcSyntaxError(f"expected state=rational, got {tok!r}", lineno, col)
            _state(name, lineno, col)
            if name in weights:
                raise LmcSyntaxError(f"state {name!r} listed twice", lineno, col)
            w = _rational(val, lineno, col + len(name) + 1)
            if w < 0:
                raise LmcSyntaxError(f"negative initial weight {val}", lineno, col)
            weights[name] = w
        total = sum(weights.values(), _ZERO)
        if total != 1:
            raise LmcSyntaxError(f"{k} weights sum to {total}, expected 1", lineno)
        pis.append(lmc.subdistribution(weights))
    return ProblemInstance(lmc, pis[0], pis[1])


def format_lmc(inst: ProblemInstance) -> str:
    lmc = inst.lmc
    lines = [
        "states: " + " ".join(lmc.states),
        "alphabet: " + " ".join(lmc.alphabet),
    ]
    for key, pi in (("init1", inst.pi1), ("init2", inst.pi2)):
        pairs = [f"{q}={format_rational(w)}" for q, w in pi.as_dict(lmc).items()]
        lines.append(f"{key}: " + " ".join(pairs))
    for q, a, t, p in lmc.transitions():
        lines.append(f"trans: {q} {a} {t} {format_rational(p)}")
    return "\n".join(lines) + "\n"


def read_lmc(path) -> ProblemInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_lmc(fh.read())


def write_lmc(inst: ProblemInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_lmc(inst))
