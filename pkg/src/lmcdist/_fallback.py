"""Pure-numpy kernels; same arithmetic order as ``_kernels.pyx`` so results agree bit for bit."""
import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(k) for k in (30, 27, 31, 11))
_TWO_M53 = 1.0 / (1 << 53)


def mix64(z):
    z = z ^ (z >> _S30)
    z = z * _M1
    z = z ^ (z >> _S27)
    z = z * _M2
    return z ^ (z >> _S31)


def _uniform(keys, j):
    with np.errstate(over="ignore"):
        bits = mix64(keys + np.uint64(j + 1) * GAMMA)
    return (bits >> _S11).astype(np.float64) * _TWO_M53


def bernoulli_operator(g, theta, h):
    """One application of the fixed-point map on the half grid ``x_j = j*h``."""
    g = np.asarray(g, dtype=np.float64)
    K = g.shape[0] - 1
    x = np.arange(K + 1, dtype=np.float64) * h
    shift = (theta - 1.0) * 0.5
    denom = 2.0 * theta
    acc = _extend(g, np.abs(theta * x - shift), h, K) + _extend(g, np.abs(theta * x + shift), h, K)
    out = acc / denom
    out[K] = 1.0
    return out


def _extend(g, y, h, K):
    t = y / h
    i = np.minimum(t.astype(np.int64), K - 1)
    frac = t - i
    inner = (1.0 - frac) * g[i] + frac * g[i + 1]
    return np.where(y >= 0.5, 2.0 * y, inner)


def final_ratios(run_keys, init_cum, row_cum, row_letter, row_target,
                 mats, pi1, pi2, run_length):
    """Sample one run per key and return ``|pi2^w| / |pi1^w|`` at ``run_length``."""
    R = run_keys.shape[0]
    n = mats.shape[1]
    u = _uniform(run_keys, 0)
    state = (u[:, None] >= init_cum[None, :]).sum(axis=1)
    v1 = np.repeat(pi1[None, :], R, axis=0)
    v2 = np.repeat(pi2[None, :], R, axis=0)
    for step in range(1, run_length + 1):
        u = _uniform(run_keys, step)
        k = (u[:, None] >= row_cum[state]).sum(axis=1)
        letter = row_letter[state, k]
        state = row_target[state, k]
        w1 = np.zeros((R, n))
        w2 = np.zeros((R, n))
        for i in range(n):
            rows = mats[letter, i, :]
            w1 = w1 + v1[:, i, None] * rows
            w2 = w2 + v2[:, i, None] * rows
        s = np.zeros(R)
        for j in range(n):
            s = s + w1[:, j]
        for j in range(n):
            s = s + w2[:, j]
        v1 = w1 / s[:, None]
        v2 = w2 / s[:, None]
    s1 = np.zeros(R)
    s2 = np.zeros(R)
    for j in range(n):
        s1 = s1 + v1[:, j]
        s2 = s2 + v2[:, j]
    with np.errstate(divide="ignore"):
        return np.where(s1 > 0, s2 / np.where(s1 > 0, s1, 1.0), np.inf)
