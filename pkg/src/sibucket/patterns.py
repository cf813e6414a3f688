"""Construction of the built-in illumination mask families.

Four families are provided:

* ``pixel``: indicator masks of the L*L detector pixels (orthogonal).
* ``two_pixel``: overlapping sums of two cyclically adjacent pixel masks
  (requires odd M = L*L; the cyclic system is singular for even M).
* ``harmonic``: truncated 2-D Fourier set T_m = 1/2 + f(x)f(y) built from
  sine/cosine pairs, sampled on a grid fine enough (4L per axis) that the
  discrete trigonometric orthogonality holds to round-off.
* ``pseudo_random``: one constant mask plus binary two-level masks built
  from sign/permutation-scrambled Walsh rows, so the pattern fluctuations
  are exactly orthogonal with a prescribed contrast 1/kappa.

Every mask is a transmission in [0, 1].  A PatternSet also carries the
photometry scalar n_bar (mean photons per exposure); the illumination
vector of mask m is n_bar * T_m.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any

import numpy as np

from .errors import ParameterError
from .grid import Field, Grid, inner, norm, spatial_mean

FAMILIES = ("pixel", "two_pixel", "harmonic", "pseudo_random", "custom")


@dataclass(frozen=True)
class PatternSet:
    """Ordered mask set plus photometry and family metadata."""

    masks: tuple[Field, ...]
    n_bar: float
    family: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.masks:
            raise ParameterError("pattern set needs at least one mask")
        if self.n_bar <= 0:
            raise ParameterError("n_bar must be positive")
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}")
        g = self.masks[0].grid
        for m in self.masks:
            if m.grid != g:
                raise ParameterError("all masks must share one grid")

    @property
    def M(self) -> int:
        return len(self.masks)

    @property
    def grid(self) -> Grid:
        return self.masks[0].grid

    @cached_property
    def mask_matrix(self) -> np.ndarray:
        """(M, n_cells) stack of the mask values."""
        return np.stack([m.values for m in self.masks])

    @cached_property
    def t_means(self) -> np.ndarray:
        """Spatial averages <T_m>."""
        return self.mask_matrix.mean(axis=1)

    @cached_property
    def t_norms_sq(self) -> np.ndarray:
        """Squared lengths ||T_m||^2."""
        return (self.mask_matrix**2).mean(axis=1)

    @property
    def t_squared(self) -> float:
        """Common squared mask length used in the flat-SNR bound.

        The delocalized families carry one constant mask whose length
        differs from the rest, so the maximum is used; for equal-length
        sets this is the shared value.
        """
        return float(self.t_norms_sq.max())

    def illumination(self, m: int) -> Field:
        """Illumination vector n_bar * T_m as a Field."""
        return Field(self.grid, self.n_bar * self.masks[m].values)

    def with_n_bar(self, n_bar: float) -> "PatternSet":
        return replace(self, n_bar=float(n_bar))


@dataclass(frozen=True)
class ValidationReport:
    bounds_ok: bool
    t_squared_values: list[float]
    t_means: list[float]
    gram_rank: int


def _pixel_fields(L: int, h: float, cells_per_pixel: int) -> list[Field]:
    k = cells_per_pixel
    grid = Grid(L * k, L * k, L * h, L * h)
    fields = []
    for mx in range(L):
        for my in range(L):
            img = np.zeros((grid.nx, grid.ny))
            img[mx * k : (mx + 1) * k, my * k : (my + 1) * k] = 1.0
            fields.append(Field(grid, img.ravel()))
    return fields


def pixel_masks(
    L: int, h: float = 1.0, cells_per_pixel: int = 1, n_bar: float = 1.0
) -> PatternSet:
    """M = L*L disjoint single-pixel indicator masks of pixel size h."""
    if L < 1:
        raise ParameterError("L must be >= 1")
    if cells_per_pixel < 1:
        raise ParameterError("cells_per_pixel must be >= 1")
    fields = _pixel_fields(L, h, cells_per_pixel)
    return PatternSet(
        tuple(fields),
        n_bar,
        "pixel",
        {"L": L, "h": h, "cells_per_pixel": cells_per_pixel},
    )


def two_pixel_masks(
    L: int, h: float = 1.0, cells_per_pixel: int = 1, n_bar: float = 1.0
) -> PatternSet:
    """Overlapping masks T_m + T_{m+1} with cyclic index, M = L*L odd."""
    if L < 1:
        raise ParameterError("L must be >= 1")
    M = L * L
    if M % 2 == 0:
        raise ParameterError(
            f"two-pixel family needs odd M = L^2, got M={M}; "
            "the cyclic biorthogonal system is singular for even M"
        )
    singles = _pixel_fields(L, h, cells_per_pixel)
    grid = singles[0].grid
    fields = [
        Field(grid, singles[m].values + singles[(m + 1) % M].values)
        for m in range(M)
    ]
    return PatternSet(
        tuple(fields),
        n_bar,
        "two_pixel",
        {"L": L, "h": h, "cells_per_pixel": cells_per_pixel},
    )


def two_pixel_biorthogonal_analytic(p: PatternSet) -> np.ndarray:
    """Closed-form biorthogonal vectors S_m of the two-pixel family.

    S_m is the cyclic alternating sum (M/2) * sum_m' (+/-1) T_m' over the
    single-pixel masks; returned as an (M, n_cells) array for use as a
    cross-check against the numerically computed basis.
    """
    if p.family != "two_pixel":
        raise ParameterError("analytic form only defined for two_pixel sets")
    L = p.params["L"]
    k = p.params["cells_per_pixel"]
    M = p.M
    singles = np.stack([f.values for f in _pixel_fields(L, p.params["h"], k)])
    out = np.zeros_like(singles)
    for m in range(M):
        coeff = np.empty(M)
        for mp in range(M):
            if mp <= m:
                coeff[mp] = (-1.0) ** (m - mp)
            else:
                coeff[mp] = (-1.0) ** (m + 1 - mp)
        out[m] = (M / 2.0) * (coeff @ singles)
    return out


def _harmonic_axis_factors(L: int, A: float, n: int) -> np.ndarray:
    """f_l sampled at the n cell centres of (-A/2, A/2), l = 1..L."""
    t = (np.arange(n) + 0.5) * (A / n) - A / 2.0
    out = np.empty((L, n))
    out[0] = 0.5
    for l in range(2, L + 1):
        if l % 2 == 0:
            out[l - 1] = np.sin(np.pi * l * t / A) / np.sqrt(2.0)
        else:
            out[l - 1] = np.cos(np.pi * (l - 1) * t / A) / np.sqrt(2.0)
    return out


def harmonic_masks(
    L: int, A: float = 1.0, samples_per_axis: int | None = None, n_bar: float = 1.0
) -> PatternSet:
    """Harmonic masks T_m = 1/2 + f_{mx}(x) f_{my}(y) on (-A/2, A/2)^2.

    L must be odd so that M = L^2 has the form 1 + 4M'.  The default grid
    (4L per axis) keeps the sampled trigonometric orthogonality exact to
    ~1e-15: every harmonic completes an integer number of periods and is
    oversampled 2x beyond Nyquist.
    """
    if L < 1 or L % 2 == 0:
        raise ParameterError(
            f"harmonic family needs odd L (so that M = L^2 = 1 + 4M'), got L={L}"
        )
    if A <= 0:
        raise ParameterError("A must be positive")
    n = samples_per_axis if samples_per_axis is not None else 4 * L
    if n < 4 * L:
        raise ParameterError(f"need at least {4 * L} samples per axis for L={L}")
    grid = Grid(n, n, A, A)
    fax = _harmonic_axis_factors(L, A, n)
    fields = []
    for mx in range(L):
        for my in range(L):
            vals = 0.5 + np.outer(fax[mx], fax[my]).ravel()
            fields.append(Field(grid, vals))
    return PatternSet(
        tuple(fields), n_bar, "harmonic", {"L": L, "A": A, "samples_per_axis": n}
    )


def _walsh_matrix(order: int) -> np.ndarray:
    h = np.array([[1.0]])
    while h.shape[0] < order:
        h = np.block([[h, h], [h, -h]])
    return h


def pseudo_random_masks(
    L: int,
    t1: float,
    kappa: float,
    seed: int,
    width: float = 1.0,
    n_bar: float = 1.0,
) -> PatternSet:
    """Constant mask plus M-1 scrambled two-level Walsh masks on L*L cells.

    T_1 = t1 everywhere; T_m = t1 * (1 + B_m / kappa) for m >= 2, where the
    B_m are +/-1, zero-mean and mutually orthogonal rows of a Walsh system
    (random row order and per-row sign drawn from `seed`).  The pattern
    fluctuations then satisfy <F_m, F_m'> = kappa^-2 delta exactly.  L must
    be a power of two so the Walsh system of order L^2 exists.
    """
    if L < 1 or (L & (L - 1)) != 0:
        raise ParameterError(f"pseudo-random family needs L a power of two, got {L}")
    if not (0.0 < t1 < 1.0):
        raise ParameterError("t1 must lie in (0, 1)")
    if kappa < 1.0:
        raise ParameterError("kappa must be >= 1")
    if t1 * (1.0 + 1.0 / kappa) > 1.0 or t1 * (1.0 - 1.0 / kappa) < 0.0:
        raise ParameterError(
            f"infeasible (t1={t1}, kappa={kappa}): mask values leave [0, 1]"
        )
    M = L * L
    grid = Grid(L, L, width, width)
    rng = np.random.default_rng(seed)
    walsh = _walsh_matrix(M)[1:]  # drop the all-ones row
    order = rng.permutation(M - 1)
    signs = rng.choice([-1.0, 1.0], size=M - 1)
    fields = [Field.constant(grid, t1)]
    for row, sign in zip(walsh[order], signs):
        fields.append(Field(grid, t1 * (1.0 + sign * row / kappa)))
    return PatternSet(
        tuple(fields),
        n_bar,
        "pseudo_random",
        {"L": L, "t1": t1, "kappa": kappa, "seed": seed, "width": width},
    )


def validate(p: PatternSet, tol: float = 1e-10) -> ValidationReport:
    """Report-only physical checks: bounds, length spread, Gram rank."""
    from .basis import gram, independence_rank

    mat = p.mask_matrix
    bounds_ok = bool(np.all(mat >= 0.0) and np.all(mat <= 1.0))
    rank = independence_rank(gram(p), tol)
    return ValidationReport(
        bounds_ok=bounds_ok,
        t_squared_values=[float(v) for v in p.t_norms_sq],
        t_means=[float(v) for v in p.t_means],
        gram_rank=rank,
    )
