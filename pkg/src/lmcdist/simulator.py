"""Monte-Carlo estimate of the distance through the likelihood ratio.

Along a run ``r`` the ratio ``L_i = |pi2^{r_i}| / |pi1^{r_i}|`` converges
almost surely, and the event ``{lim L <= 1}`` is a maximizer of
``pi1(E) - pi2(E)``.  The estimator replaces the limit with ``L_n`` at a
fixed horizon and reports ``P1(L_n <= 1) - P2(L_n <= 1)``.

Random numbers come from a counter-based generator, so every run is a pure
function of ``(seed, side, run index, step)``:

    mix64(z):  z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
               z ^= z >> 27; z *= 0x94D049BB133111EB
               z ^= z >> 31                       (all mod 2**64)
    side_key   = mix64(seed + side * GAMMA)       side 1 samples pi1, side 2 pi2
    run_key    = mix64(side_key + (run + 1) * GAMMA)
    u(run, j)  = (mix64(run_key + (j + 1) * GAMMA) >> 11) * 2**-53
    GAMMA      = 0x9E3779B97F4A7C15

Draw ``j = 0`` picks the initial state, draw ``j = i`` the i-th transition.
A state's outgoing transitions are ordered by (letter, target) declaration
order and the first one whose cumulative probability exceeds ``u`` is taken.
Batches therefore give the same runs regardless of how work is split.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _backend
from .core import ProblemInstance, step

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15

# L_n within this relative slack of 1 counts as a tie (L_n <= 1)
TIE_SLACK = 1e-9


def mix64(z: int) -> int:
    z &= MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def side_key(seed: int, side: int) -> int:
    return mix64(seed + side * GAMMA)


def run_key(seed: int, side: int, run: int) -> int:
    return mix64(side_key(seed, side) + (run + 1) * GAMMA)


def uniform(key: int, j: int) -> float:
    return (mix64(key + (j + 1) * GAMMA) >> 11) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class Trajectory:
    word: tuple[str, ...]
    ratios: tuple[float, ...]
    truncated: bool


def likelihood_trajectory(inst: ProblemInstance, word: Sequence[str]) -> Trajectory:
    """Exact prefix masses rendered to floats; stops where ``|pi1^{r_i}|`` hits 0."""
    mu1, mu2 = inst.pi1, inst.pi2
    ratios = [float(mu2.mass / mu1.mass)]
    for i, a in enumerate(word):
        mu1 = step(mu1, a, inst.lmc)
        mu2 = step(mu2, a, inst.lmc)
        m1 = mu1.mass
        if m1 == 0:
            return Trajectory(tuple(word[:i + 1]), tuple(ratios), True)
        ratios.append(float(mu2.mass / m1))
    return Trajectory(tuple(word), tuple(ratios), False)


class SamplingTables:
    """Float views of an instance laid out for the sampling kernels."""

    def __init__(self, inst: ProblemInstance):
        lmc = inst.lmc
        n = lmc.n
        self.inst = inst
        self.letters = lmc.alphabet
        self.mats = np.array([[[float(p) for p in row] for row in lmc.matrices[a]]
                              for a in lmc.alphabet], dtype=np.float64).reshape(len(lmc.alphabet), n, n)
        self.pi = [np.array([float(w) for w in pi.weights]) for pi in (inst.pi1, inst.pi2)]
        self.init_cum = [self._cumulative([w for w in pi.weights], n) for pi in (inst.pi1, inst.pi2)]
        rows = []
        for i in range(n):
            out = []
            for ai, a in enumerate(lmc.alphabet):
                for j, p in enumerate(lmc.matrices[a][i]):
                    if p > 0:
                        out.append((ai, j, p))
            rows.append(out)
        width = max(len(r) for r in rows)
        self.row_cum = np.full((n, width), 2.0)
        self.row_letter = np.zeros((n, width), dtype=np.int64)
        self.row_target = np.zeros((n, width), dtype=np.int64)
        for i, out in enumerate(rows):
            cum = self._cumulative([p for _, _, p in out], len(out))
            self.row_cum[i, :len(out)] = cum
            for k, (ai, j, _) in enumerate(out):
                self.row_letter[i, k] = ai
                self.row_target[i, k] = j

    @staticmethod
    def _cumulative(ps: list[Fraction], width: int) -> np.ndarray:
        # exact partial sums rounded once; the last entry is a sentinel above any draw
        out = np.full(width, 2.0)
        acc = Fraction(0)
        last = max((k for k, p in enumerate(ps) if p > 0), default=width - 1)
        for k, p in enumerate(ps):
            acc += p
            out[k] = float(acc)
        out[last:] = 2.0
        return out

    def sample_word(self, seed: int, side: int, run: int, run_length: int) -> tuple[str, ...]:
        """Regenerate the letters of one run with the scalar generator."""
        key = run_key(seed, side, run)
        u = uniform(key, 0)
        state = int(np.sum(u >= self.init_cum[side - 1]))
        word = []
        for j in range(1, run_length + 1):
            u = uniform(key, j)
            k = int(np.sum(u >= self.row_cum[state]))
            word.append(self.letters[self.row_letter[state, k]])
            state = int(self.row_target[state, k])
        return tuple(word)

    def final_ratios(self, seed: int, side: int, run_length: int, start: int, count: int,
                     backend=None) -> np.ndarray:
        kernels = backend or _backend.kernels
        skey = side_key(seed, side)
        keys = np.array([mix64(skey + (r + 1) * GAMMA) for r in range(start, start + count)],
                        dtype=np.uint64)
        return kernels.final_ratios(keys, self.init_cum[side - 1], self.row_cum, self.row_letter,
                                    self.row_target, self.mats, self.pi[0], self.pi[1], run_length)


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float
    p1: float
    p2: float
    samples: int
    run_length: int
    ratio_mean: float
    ratio_stderr: float


def _batches(samples: int, batch: int):
    return [(s, min(batch, samples - s)) for s in range(0, samples, batch)]


def sample_ratios(inst: ProblemInstance, side: int, run_length: int, samples: int, seed: int,
                  jobs: int = 1, batch: int = 8192, backend=None,
                  tables: SamplingTables | None = None) -> np.ndarray:
    """``L_{run_length}`` for ``samples`` runs drawn from ``pi1`` (side 1) or ``pi2`` (side 2)."""
    tables = tables or SamplingTables(inst)
    chunks = _batches(samples, batch)

    def work(chunk):
        return tables.final_ratios(seed, side, run_length, chunk[0], chunk[1], backend)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    return np.concatenate(parts) if parts else np.zeros(0)


def estimate_distance_mc(inst: ProblemInstance, run_length: int, samples: int, seed: int,
                         jobs: int = 1, backend=None) -> McEstimate:
    if run_length < 1 or samples < 1:
        raise ValueError("run_length and samples must be at least 1")
    seed = int(seed) & MASK64
    tables = SamplingTables(inst)
    l1 = sample_ratios(inst, 1, run_length, samples, seed, jobs, backend=backend, tables=tables)
    l2 = sample_ratios(inst, 2, run_length, samples, seed, jobs, backend=backend, tables=tables)
    cut = 1.0 + TIE_SLACK
    p1 = float(np.count_nonzero(l1 <= cut)) / samples
    p2 = float(np.count_nonzero(l2 <= cut)) / samples
    se = math.sqrt(p1 * (1 - p1) / samples + p2 * (1 - p2) / samples)
    finite = l1[np.isfinite(l1)]
    mean = float(np.mean(finite)) if finite.size else math.inf
    sd = float(np.std(finite, ddof=1)) if finite.size > 1 else 0.0
    return McEstimate(p1 - p2, se, p1, p2, samples, run_length, mean, sd / math.sqrt(max(finite.size, 1)))


def write_trajectories_csv(inst: ProblemInstance, path, run_length: int, runs: int, seed: int) -> None:
    """Write ``side,run,step,letter,ratio`` rows for the first ``runs`` runs of each side."""
    tables = SamplingTables(inst)
    seed = int(seed) & MASK64
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["side", "run", "step", "letter", "ratio"])
        for side in (1, 2):
            for r in range(runs):
                word = tables.sample_word(seed, side, r, run_length)
                traj = likelihood_trajectory(inst, word)
                for i, ratio in enumerate(traj.ratios):
                    w.writerow([side, r, i, word[i - 1] if i else "", repr(ratio)])
                if traj.truncated:
                    w.writerow([side, r, len(traj.ratios), word[len(traj.ratios) - 1], "inf"])
