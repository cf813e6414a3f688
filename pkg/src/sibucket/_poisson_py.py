"""Pure-Python Poisson photon-count kernel.

Counter-based design: every (seed, trial, m) triple owns an independent
splitmix64 stream, so draws do not depend on evaluation order or thread
scheduling.  Small means use sequential inversion, large means the PTRS
transformed-rejection method of Hoermann; the crossover is at mean 30.

The compiled extension (_poisson_cy) implements the identical arithmetic
with the same libm calls, so both backends produce bit-identical counts.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
INVERSION_CUTOFF = 30.0


def _splitmix_next(state: int) -> tuple[int, int]:
    state = (state + _GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def stream_state(seed: int, trial: int, m: int) -> int:
    """Initial splitmix64 state for the (seed, trial, m) stream."""
    s = seed & MASK64
    s, z = _splitmix_next(s)
    s = (z ^ (trial & MASK64)) & MASK64
    s, z = _splitmix_next(s)
    s = (z ^ (m & MASK64)) & MASK64
    s, z = _splitmix_next(s)
    return z


class _Stream:
    __slots__ = ("state",)

    def __init__(self, seed: int, trial: int, m: int):
        self.state = stream_state(seed, trial, m)

    def next_uniform(self) -> float:
        """Uniform double in (0, 1), never exactly 0 or 1."""
        self.state, z = _splitmix_next(self.state)
        return ((z >> 11) + 0.5) * (1.0 / 9007199254740992.0)


def _poisson_inversion(stream: _Stream, mean: float) -> int:
    u = stream.next_uniform()
    p = math.exp(-mean)
    s = p
    k = 0
    while u > s:
        k += 1
        p *= mean / k
        s += p
    return k


def _poisson_ptrs(stream: _Stream, mean: float) -> int:
    smu = math.sqrt(mean)
    b = 0.931 + 2.53 * smu
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    log_mean = math.log(mean)
    while True:
        u = stream.next_uniform() - 0.5
        v = stream.next_uniform()
        us = 0.5 - abs(u)
        k = math.floor((2.0 * a / us + b) * u + mean + 0.43)
        if us >= 0.07 and v <= v_r:
            return int(k)
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (
            math.log(v) + math.log(inv_alpha) - math.log(a / (us * us) + b)
            <= k * log_mean - mean - math.lgamma(k + 1.0)
        ):
            return int(k)


def poisson_draw(seed: int, trial: int, m: int, mean: float) -> int:
    """One Poisson count from the (seed, trial, m) stream."""
    if mean < 0.0:
        raise ValueError("Poisson mean must be non-negative")
    if mean == 0.0:
        return 0
    stream = _Stream(seed, trial, m)
    if mean < INVERSION_CUTOFF:
        return _poisson_inversion(stream, mean)
    return _poisson_ptrs(stream, mean)


def poisson_counts(means: np.ndarray, seed: int, trial: int) -> np.ndarray:
    """Counts for one trial: element m is drawn from stream (seed, trial, m)."""
    means = np.asarray(means, dtype=np.float64)
    out = np.empty(means.shape[0], dtype=np.int64)
    for m in range(means.shape[0]):
        out[m] = poisson_draw(seed, trial, m, float(means[m]))
    return out


def poisson_trials(means: np.ndarray, seed: int, trials: int) -> np.ndarray:
    """(trials, M) count matrix; row k uses the (seed, k, m) streams."""
    means = np.asarray(means, dtype=np.float64)
    out = np.empty((trials, means.shape[0]), dtype=np.int64)
    for k in range(trials):
        for m in range(means.shape[0]):
            out[k, m] = poisson_draw(seed, k, m, float(means[m]))
    return out
