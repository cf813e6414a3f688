# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Poisson photon-count kernel.

Same counter-based splitmix64 streams and inversion/PTRS sampling as the
pure-Python module (_poisson_py); both call the platform libm, so counts
are bit-identical between backends.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, floor, lgamma, log, sqrt

cnp.import_array()

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t sm64_mix(uint64_t *state) {
        *state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = *state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    """
    unsigned long long sm64_mix(unsigned long long *state) nogil

DEF INVERSION_CUTOFF = 30.0


cdef inline unsigned long long _stream_state(
    unsigned long long seed, unsigned long long trial, unsigned long long m
) nogil:
    cdef unsigned long long s = seed
    cdef unsigned long long z = sm64_mix(&s)
    s = z ^ trial
    z = sm64_mix(&s)
    s = z ^ m
    return sm64_mix(&s)


cdef inline double _next_uniform(unsigned long long *state) nogil:
    cdef unsigned long long z = sm64_mix(state)
    return ((z >> 11) + 0.5) * (1.0 / 9007199254740992.0)


cdef long long _draw(unsigned long long seed, unsigned long long trial,
                     unsigned long long m, double mean) nogil:
    cdef unsigned long long state
    cdef double u, v, us, p, s, b, a, inv_alpha, v_r, smu, log_mean, k
    cdef long long ki
    if mean == 0.0:
        return 0
    state = _stream_state(seed, trial, m)
    if mean < INVERSION_CUTOFF:
        u = _next_uniform(&state)
        p = exp(-mean)
        s = p
        ki = 0
        while u > s:
            ki += 1
            p *= mean / ki
            s += p
        return ki
    smu = sqrt(mean)
    b = 0.931 + 2.53 * smu
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    log_mean = log(mean)
    while True:
        u = _next_uniform(&state) - 0.5
        v = _next_uniform(&state)
        us = 0.5 - fabs(u)
        k = floor((2.0 * a / us + b) * u + mean + 0.43)
        if us >= 0.07 and v <= v_r:
            return <long long> k
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (log(v) + log(inv_alpha) - log(a / (us * us) + b)
                <= k * log_mean - mean - lgamma(k + 1.0)):
            return <long long> k


def poisson_draw(seed, trial, m, double mean):
    if mean < 0.0:
        raise ValueError("Poisson mean must be non-negative")
    return int(_draw(<unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF),
                     <unsigned long long> (trial & 0xFFFFFFFFFFFFFFFF),
                     <unsigned long long> (m & 0xFFFFFFFFFFFFFFFF), mean))


def poisson_counts(means, seed, trial):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mu = np.ascontiguousarray(
        means, dtype=np.float64)
    cdef Py_ssize_t n = mu.shape[0], i
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef unsigned long long s = <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef unsigned long long t = <unsigned long long> (trial & 0xFFFFFFFFFFFFFFFF)
    for i in range(n):
        if mu[i] < 0.0:
            raise ValueError("Poisson mean must be non-negative")
    with nogil:
        for i in range(n):
            out[i] = _draw(s, t, <unsigned long long> i, mu[i])
    return out


def poisson_trials(means, seed, long long trials):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mu = np.ascontiguousarray(
        means, dtype=np.float64)
    cdef Py_ssize_t n = mu.shape[0], i, k
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty(
        (trials, n), dtype=np.int64)
    cdef unsigned long long s = <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)
    for i in range(n):
        if mu[i] < 0.0:
            raise ValueError("Poisson mean must be non-negative")
    with nogil:
        for k in range(trials):
            for i in range(n):
                out[k, i] = _draw(s, <unsigned long long> k,
                                  <unsigned long long> i, mu[i])
    return out
