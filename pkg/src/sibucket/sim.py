"""Forward bucket-measurement model.

Deterministic part: transmission coefficients x_m = <X, T_m> and mean
counts a_bar_m = n_bar * x_m.  Stochastic part: independent Poisson draws
around the means, one counter-based stream per (seed, trial, m), so trial
results are identical no matter how the work is scheduled.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import ParameterError
from .grid import Field
from .patterns import PatternSet


@dataclass(frozen=True)
class ObjectSpec:
    """Object transmission function, bounded to [0, 1]."""

    X: Field
    label: str = "object"

    def __post_init__(self):
        v = self.X.values
        if v.min() < 0.0 or v.max() > 1.0:
            raise ParameterError("object transmission must lie in [0, 1]")


@dataclass(frozen=True)
class MeasurementRecord:
    """One exposure sequence: deterministic coefficients plus (optionally)
    sampled integer counts."""

    x: np.ndarray
    a_bar: np.ndarray
    n_bar: float
    N_bar: float
    N_t: float
    a: np.ndarray | None = None
    seed: int | None = None

    @property
    def M(self) -> int:
        return self.x.shape[0]

    @property
    def counts(self) -> np.ndarray:
        """Sampled counts, or the means when no sampling was done."""
        return self.a if self.a is not None else self.a_bar


def builtin_object(name: str, p: PatternSet) -> ObjectSpec:
    """Named test objects on the pattern grid."""
    grid = p.grid
    if name == "flat":
        return ObjectSpec(Field.constant(grid, 1.0), "flat")
    if name == "pixel-step":
        # left half fully transparent, right half 50%
        img = np.full((grid.nx, grid.ny), 0.5)
        img[: grid.nx // 2 + grid.nx % 2, :] = 1.0
        return ObjectSpec(Field(grid, img.ravel()), "pixel-step")
    raise ParameterError(f"unknown builtin object {name!r}")


def transmission_coeffs(obj: ObjectSpec, p: PatternSet) -> np.ndarray:
    """x_m = <X, T_m> for every mask."""
    if obj.X.grid != p.grid:
        raise ParameterError("object and patterns must share one grid")
    return p.mask_matrix @ obj.X.values / p.grid.n_cells


def bucket_means(obj: ObjectSpec, p: PatternSet) -> MeasurementRecord:
    """Record with means only (no sampled counts)."""
    x = transmission_coeffs(obj, p)
    n_bar = p.n_bar
    N_bar = p.M * n_bar
    N_t = N_bar * float(p.t_means.mean())
    return MeasurementRecord(x=x, a_bar=n_bar * x, n_bar=n_bar, N_bar=N_bar, N_t=N_t)


def sample_buckets(rec: MeasurementRecord, seed: int) -> MeasurementRecord:
    """Draw counts a_m ~ Poisson(a_bar_m) from streams (seed, 0, m)."""
    counts = rng.poisson_counts(rec.a_bar, seed, trial=0)
    return MeasurementRecord(
        x=rec.x,
        a_bar=rec.a_bar,
        n_bar=rec.n_bar,
        N_bar=rec.N_bar,
        N_t=rec.N_t,
        a=counts,
        seed=seed,
    )


def thread_count() -> int:
    """Worker cap from SIBUCKET_THREADS (default 1)."""
    raw = os.environ.get("SIBUCKET_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"SIBUCKET_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def sample_trial_matrix(a_bar: np.ndarray, trials: int, seed: int) -> np.ndarray:
    """(trials, M) Poisson counts; row k comes from the (seed, k, m) streams.

    Parallelizes over trial chunks when SIBUCKET_THREADS > 1; the
    counter-based streams make the result independent of scheduling.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    workers = thread_count()
    if workers == 1:
        return rng.poisson_trials(a_bar, seed, trials)
    out = np.empty((trials, a_bar.shape[0]), dtype=np.int64)
    bounds = np.linspace(0, trials, workers + 1, dtype=int)

    def fill(i: int) -> None:
        for k in range(bounds[i], bounds[i + 1]):
            out[k] = rng.poisson_counts(a_bar, seed, trial=k)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(fill, range(workers)))
    return out


def run_trials(
    obj: ObjectSpec, p: PatternSet, trials: int, seed: int
) -> list[MeasurementRecord]:
    """Independent repeated exposures; trial k uses the (seed, k, *) streams."""
    base = bucket_means(obj, p)
    counts = sample_trial_matrix(base.a_bar, trials, seed)
    return [
        MeasurementRecord(
            x=base.x,
            a_bar=base.a_bar,
            n_bar=base.n_bar,
            N_bar=base.N_bar,
            N_t=base.N_t,
            a=counts[k],
            seed=seed,
        )
        for k in range(trials)
    ]
