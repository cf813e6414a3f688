"""Backend selection for the Poisson count kernel.

The compiled extension is preferred when it imported successfully; the
pure-Python module is a drop-in replacement producing bit-identical
counts (same streams, same libm arithmetic).  Set SIBUCKET_FORCE_PYTHON=1
to force the fallback, e.g. for the backend benchmark.
"""

from __future__ import annotations

import os

import numpy as np

from . import _poisson_py

if os.environ.get("SIBUCKET_FORCE_PYTHON"):
    _impl = _poisson_py
    BACKEND = "python"
else:
    try:
        from . import _poisson_cy as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _poisson_py
        BACKEND = "python"


def poisson_draw(seed: int, trial: int, m: int, mean: float) -> int:
    """One Poisson count from the independent (seed, trial, m) stream."""
    return int(_impl.poisson_draw(seed, trial, m, mean))


def poisson_counts(means: np.ndarray, seed: int, trial: int = 0) -> np.ndarray:
    """Counts a_m ~ Poisson(means[m]), one independent stream per m."""
    return _impl.poisson_counts(np.asarray(means, dtype=np.float64), seed, trial)


def poisson_trials(means: np.ndarray, seed: int, trials: int) -> np.ndarray:
    """(trials, M) matrix of counts; row k uses the (seed, k, m) streams."""
    return _impl.poisson_trials(np.asarray(means, dtype=np.float64), seed, trials)


def backends() -> dict[str, object]:
    """All importable backend modules, keyed by name (for tests/benchmarks)."""
    out: dict[str, object] = {"python": _poisson_py}
    try:
        from . import _poisson_cy

        out["cython"] = _poisson_cy
    except ImportError:
        pass
    return out
