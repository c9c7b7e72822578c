# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the Bernoulli fixed-point map and Monte-Carlo run sampling.

Floating-point operations are issued in the same order as ``_fallback.py``.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.math cimport fabs, INFINITY

cnp.import_array()

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = z ^ (z >> 30)
    z = z * 0xBF58476D1CE4E5B9ULL
    z = z ^ (z >> 27)
    z = z * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double uniform(uint64_t key, int64_t j) nogil:
    return <double>(mix64(key + <uint64_t>(j + 1) * GAMMA) >> 11) * (1.0 / 9007199254740992.0)


cdef inline double extend(const double[::1] g, double y, double h, Py_ssize_t K) nogil:
    cdef double t, frac
    cdef Py_ssize_t i
    if y >= 0.5:
        return 2.0 * y
    t = y / h
    i = <Py_ssize_t>t
    if i > K - 1:
        i = K - 1
    frac = t - <double>i
    return (1.0 - frac) * g[i] + frac * g[i + 1]


def bernoulli_operator(g_in, double theta, double h):
    cdef const double[::1] g = np.ascontiguousarray(g_in, dtype=np.float64)
    cdef Py_ssize_t K = g.shape[0] - 1
    out_arr = np.empty(K + 1, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double shift = (theta - 1.0) * 0.5
    cdef double denom = 2.0 * theta
    cdef double x, acc
    cdef Py_ssize_t j
    with nogil:
        for j in range(K + 1):
            x = <double>j * h
            acc = extend(g, fabs(theta * x - shift), h, K) + extend(g, fabs(theta * x + shift), h, K)
            out[j] = acc / denom
        out[K] = 1.0
    return out_arr


def final_ratios(run_keys_in, init_cum_in, row_cum_in, row_letter_in, row_target_in,
                 mats_in, pi1_in, pi2_in, Py_ssize_t run_length):
    cdef const uint64_t[::1] keys = np.ascontiguousarray(run_keys_in, dtype=np.uint64)
    cdef const double[::1] init_cum = np.ascontiguousarray(init_cum_in, dtype=np.float64)
    cdef const double[:, ::1] row_cum = np.ascontiguousarray(row_cum_in, dtype=np.float64)
    cdef const int64_t[:, ::1] row_letter = np.ascontiguousarray(row_letter_in, dtype=np.int64)
    cdef const int64_t[:, ::1] row_target = np.ascontiguousarray(row_target_in, dtype=np.int64)
    cdef const double[:, :, ::1] mats = np.ascontiguousarray(mats_in, dtype=np.float64)
    cdef const double[::1] pi1 = np.ascontiguousarray(pi1_in, dtype=np.float64)
    cdef const double[::1] pi2 = np.ascontiguousarray(pi2_in, dtype=np.float64)
    cdef Py_ssize_t R = keys.shape[0]
    cdef Py_ssize_t n = mats.shape[1]
    cdef Py_ssize_t width = row_cum.shape[1]
    out_arr = np.empty(R, dtype=np.float64)
    cdef double[::1] out = out_arr
    buf = np.zeros((4, n), dtype=np.float64)
    cdef double[:, ::1] b = buf
    cdef Py_ssize_t r, step, i, j, k, state, letter
    cdef double u, s, acc1, acc2, s1, s2
    cdef uint64_t key
    with nogil:
        for r in range(R):
            key = keys[r]
            u = uniform(key, 0)
            state = 0
            for k in range(n):
                if u >= init_cum[k]:
                    state = k + 1
            for j in range(n):
                b[0, j] = pi1[j]
                b[1, j] = pi2[j]
            for step in range(1, run_length + 1):
                u = uniform(key, step)
                k = 0
                while k < width and u >= row_cum[state, k]:
                    k += 1
                letter = row_letter[state, k]
                state = row_target[state, k]
                for j in range(n):
                    acc1 = 0.0
                    acc2 = 0.0
                    for i in range(n):
                        acc1 = acc1 + b[0, i] * mats[letter, i, j]
                        acc2 = acc2 + b[1, i] * mats[letter, i, j]
                    b[2, j] = acc1
                    b[3, j] = acc2
                s = 0.0
                for j in range(n):
                    s = s + b[2, j]
                for j in range(n):
                    s = s + b[3, j]
                for j in range(n):
                    b[0, j] = b[2, j] / s
                    b[1, j] = b[3, j] / s
            s1 = 0.0
            s2 = 0.0
            for j in range(n):
                s1 = s1 + b[0, j]
                s2 = s2 + b[1, j]
            if s1 > 0:
                out[r] = s2 / s1
            else:
                out[r] = INFINITY
    return out_arr
