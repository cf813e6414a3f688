"""Figures of merit: width functionals, spatial resolution, SNR and the
intrinsic quality characteristic (IQC).

Width convention: width_delta2 returns the integral-over-root-integral-of-
square functional evaluated on the 2-D field; its square is the quantity
compared against area/M (the "effective pixel" area).  The variance-based
width integrates the exact per-cell second moment, since sampled fields
are piecewise constant over cells; this keeps the comparison inequality
between the two widths valid even for single-cell kernels.

Cells where an SNR/IQC denominator vanishes are reported as undefined:
the map stores 0 there and the accompanying mask excludes them from any
spatial average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisBundle, biorthogonal, require_condition1, require_condition2
from .errors import ConditionError, ParameterError
from .grid import Field
from .patterns import PatternSet
from .sim import ObjectSpec, sample_trial_matrix, transmission_coeffs

WIDTH_RATIO_BOUND = 3.0 * math.sqrt(math.pi) / 2.0  # delta2 <= bound * variance width


@dataclass(frozen=True)
class PointMap:
    """Per-cell map with an explicit defined/undefined mask."""

    field: Field
    defined: np.ndarray
    excluded_cells: int


@dataclass(frozen=True)
class FlatSnr:
    snr_flat_sq: float
    form_factor_flat_sq: float
    t_tilde: float


@dataclass(frozen=True)
class IqcResult:
    iqc_map: PointMap
    iqc_flat_sq: float
    iqc_dose_sq: float


@dataclass(frozen=True)
class McSnr:
    """Monte-Carlo SNR estimate with its sampling uncertainty."""

    snr_map: PointMap
    snr_map_stderr: np.ndarray
    flat_sq: float
    flat_sq_stderr: float
    trials: int


def width_delta2(g: Field) -> float:
    """Integral of g over the root integral of g squared."""
    c = g.grid.cell_area
    denom_sq = float(np.sum(g.values**2) * c)
    if denom_sq <= 0.0:
        raise ParameterError("width undefined: integral of g^2 is zero")
    return float(np.sum(g.values) * c) / math.sqrt(denom_sq)


def width_delta2_axis(g: Field, axis: str) -> float:
    """Same functional on the 1-D profile with the other axis integrated out."""
    img = g.as_image()
    if axis == "x":
        profile = img.sum(axis=1) * g.grid.dy
        step = g.grid.dx
    elif axis == "y":
        profile = img.sum(axis=0) * g.grid.dx
        step = g.grid.dy
    else:
        raise ParameterError("axis must be 'x' or 'y'")
    denom_sq = float(np.sum(profile**2) * step)
    if denom_sq <= 0.0:
        raise ParameterError("width undefined: integral of profile^2 is zero")
    return float(np.sum(profile) * step) / math.sqrt(denom_sq)


def width_variance(g: Field) -> float:
    """Root of the centroid-referenced variance of |g|.

    The second moment is integrated exactly over each cell (piecewise-
    constant field), which adds the within-cell term (dx^2 + dy^2)/12.
    """
    grid = g.grid
    w = np.abs(g.values)
    total = float(w.sum())
    if total <= 0.0:
        raise ParameterError("width undefined: |g| has zero mass")
    xs, ys = grid.cell_centers()
    cx = float((w * xs).sum() / total)
    cy = float((w * ys).sum() / total)
    r2 = (xs - cx) ** 2 + (ys - cy) ** 2
    cell_term = (grid.dx**2 + grid.dy**2) / 12.0
    return math.sqrt(float((w * (r2 + cell_term)).sum() / total))


def f_sum_map(bb: BasisBundle) -> Field:
    """f(r) = sum_m V_m(r)^2; its spatial mean equals M."""
    return Field(bb.pattern_set.grid, (bb.v_matrix**2).sum(axis=0))


def resolution_map(bb: BasisBundle, cond1_tol: float = 1e-9) -> tuple[Field, Field]:
    """Pointwise resolution sqrt(area / sum_m V_m(r)^2), plus the f map."""
    p = bb.pattern_set
    require_condition1(p, bb, tol=cond1_tol)
    f_map = f_sum_map(bb)
    res = np.sqrt(p.grid.area / f_map.values)
    return Field(p.grid, res), f_map


def resolution_uniform(bb: BasisBundle, cond2_tol: float = 1e-8) -> float:
    """Uniform resolution sqrt(area / M) under shift-invariance, cross-
    checked against the width of the PSF."""
    from .recon import psf

    require_condition2(bb, tol=cond2_tol)
    p = bb.pattern_set
    value = math.sqrt(p.grid.area / bb.M)
    psf_width = width_delta2(psf(bb, cond2_tol=cond2_tol))
    if abs(psf_width - value) > 1e-6 * value:
        raise ParameterError(
            f"PSF width {psf_width:.9g} disagrees with sqrt(area/M) = {value:.9g}"
        )
    return value


def resolution_measurement(
    p: PatternSet, bb: BasisBundle, cond1_tol: float = 1e-9
) -> float:
    """Average width of the measurement-space kernel."""
    require_condition1(p, bb, tol=cond1_tol)
    g = bb.gram.entries
    w_means = p.n_bar * p.t_means
    num = p.grid.area * float(w_means @ g @ w_means)
    den = float((g**2).sum())
    if den <= 0.0:
        raise ParameterError("measurement-space width undefined: zero denominator")
    return math.sqrt(num / den)


def _form_factor_parts(
    obj: ObjectSpec, p: PatternSet, bb: BasisBundle
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = transmission_coeffs(obj, p)
    smat = bb.s_matrix
    num = x @ smat
    den = x @ (smat**2)
    return x, num, den


def snr_analytic(
    obj: ObjectSpec, p: PatternSet, bb: BasisBundle, n_bar: float
) -> PointMap:
    """Ensemble SNR map sqrt(n_bar) * F(r) with F the form factor; cells
    with a vanishing noise denominator are flagged undefined."""
    _, num, den = _form_factor_parts(obj, p, bb)
    defined = den > 0.0
    vals = np.zeros_like(num)
    vals[defined] = math.sqrt(n_bar) * num[defined] / np.sqrt(den[defined])
    return PointMap(
        Field(p.grid, vals), defined, excluded_cells=int((~defined).sum())
    )


def form_factor_map(obj: ObjectSpec, p: PatternSet, bb: BasisBundle) -> PointMap:
    _, num, den = _form_factor_parts(obj, p, bb)
    defined = den > 0.0
    vals = np.zeros_like(num)
    vals[defined] = num[defined] / np.sqrt(den[defined])
    return PointMap(
        Field(p.grid, vals), defined, excluded_cells=int((~defined).sum())
    )


def snr_flat(
    p: PatternSet, bb: BasisBundle, n_bar: float, cond1_tol: float = 1e-9
) -> FlatSnr:
    """Flat (no-object) SNR^2 from the spatially averaged noise variance.

    Also returns the averaged form factor squared and the transmission
    average t_tilde whose product with n_bar bounds the flat SNR^2 from
    above (equality only for orthogonal equal-length sets).
    """
    require_condition1(p, bb, tol=cond1_tol)
    s_norms_sq = (bb.s_matrix**2).mean(axis=1)
    ff_sq = 1.0 / float(p.t_means @ s_norms_sq)
    snr_sq = n_bar * ff_sq
    t_tilde = p.t_squared / float(p.t_means.sum())
    if snr_sq > n_bar * t_tilde * (1.0 + 1e-9):
        raise AssertionError(
            f"flat SNR^2 {snr_sq:.6g} exceeds the orthogonality bound "
            f"{n_bar * t_tilde:.6g}"
        )
    return FlatSnr(snr_flat_sq=snr_sq, form_factor_flat_sq=ff_sq, t_tilde=t_tilde)


def iqc(
    obj: ObjectSpec,
    p: PatternSet,
    bb: BasisBundle,
    n_bar: float,
    cond1_tol: float = 1e-9,
) -> IqcResult:
    """Intrinsic quality characteristic: SNR over resolution, photon-
    normalized.  The flat value equals the flat form factor squared; the
    dose-corrected value refers it to the photons incident on the object."""
    require_condition1(p, bb, tol=cond1_tol)
    ff = form_factor_map(obj, p, bb)
    f_map = f_sum_map(bb)
    vals = ff.field.values * np.sqrt(f_map.values / bb.M)
    flat = snr_flat(p, bb, n_bar, cond1_tol)
    mean_t = float(p.t_means.mean())
    return IqcResult(
        iqc_map=PointMap(Field(p.grid, vals), ff.defined, ff.excluded_cells),
        iqc_flat_sq=flat.form_factor_flat_sq,
        iqc_dose_sq=flat.form_factor_flat_sq / mean_t,
    )


def snr_flat_measurement(p: PatternSet, n_bar: float) -> float:
    """Flat SNR^2 of the raw measured signal (before reconstruction)."""
    tg = (p.mask_matrix @ p.mask_matrix.T) / p.grid.n_cells
    t = p.t_means
    den = float(t @ np.diag(tg))
    if den <= 0.0:
        raise ParameterError("flat measurement SNR undefined: zero denominator")
    return n_bar * float(t @ tg @ t) / den


def snr_monte_carlo(
    obj: ObjectSpec,
    p: PatternSet,
    bb: BasisBundle,
    n_bar: float,
    trials: int,
    seed: int,
) -> McSnr:
    """Empirical SNR over repeated Poisson-noise reconstructions.

    The flat variant mirrors the analytic definition: spatial average of
    the squared trial-mean over the spatial average of the unbiased trial
    variance.  Standard errors let callers check agreement tolerances.
    """
    if trials < 100:
        raise ParameterError("need at least 100 trials for a meaningful estimate")
    x = transmission_coeffs(obj, p)
    counts = sample_trial_matrix(n_bar * x, trials, seed)
    recon = (counts / n_bar) @ bb.s_matrix  # (trials, n_cells)
    mean_r = recon.mean(axis=0)
    var_r = recon.var(axis=0, ddof=1)
    std_r = np.sqrt(var_r)
    defined = std_r > 0.0
    snr_vals = np.zeros_like(mean_r)
    snr_vals[defined] = mean_r[defined] / std_r[defined]
    # std of a mean/std ratio estimate, Gaussian approximation
    stderr_map = np.sqrt((1.0 + 0.5 * snr_vals**2) / trials)
    flat_sq = float((mean_r**2).mean() / var_r.mean())
    flat_sq_stderr = flat_sq * math.sqrt(2.0 / (trials - 1))
    return McSnr(
        snr_map=PointMap(
            Field(p.grid, snr_vals), defined, excluded_cells=int((~defined).sum())
        ),
        snr_map_stderr=stderr_map,
        flat_sq=flat_sq,
        flat_sq_stderr=flat_sq_stderr,
        trials=trials,
    )


@dataclass(frozen=True)
class MetricsReport:
    """All scalar and map metrics for one (object, pattern set) pair."""

    resolution_map: Field
    f_map: Field
    resolution_uniform: float | None
    resolution_measurement: float
    snr_map: PointMap
    form_factor_map: PointMap
    snr_flat_sq: float
    form_factor_flat_sq: float
    t_tilde: float
    iqc_map: PointMap
    iqc_flat_sq: float
    iqc_dose_sq: float
    snr_flat_in_sq: float
    mc: McSnr | None


def compute_report(
    obj: ObjectSpec,
    p: PatternSet,
    n_bar: float,
    bb: BasisBundle | None = None,
    trials: int = 0,
    seed: int = 0,
) -> MetricsReport:
    if bb is None:
        bb = biorthogonal(p)
    res_map, f_map = resolution_map(bb)
    try:
        res_uniform: float | None = resolution_uniform(bb)
    except ConditionError:
        res_uniform = None
    flat = snr_flat(p, bb, n_bar)
    iqc_res = iqc(obj, p, bb, n_bar)
    mc = (
        snr_monte_carlo(obj, p, bb, n_bar, trials, seed) if trials else None
    )
    return MetricsReport(
        resolution_map=res_map,
        f_map=f_map,
        resolution_uniform=res_uniform,
        resolution_measurement=resolution_measurement(p, bb),
        snr_map=snr_analytic(obj, p, bb, n_bar),
        form_factor_map=form_factor_map(obj, p, bb),
        snr_flat_sq=flat.snr_flat_sq,
        form_factor_flat_sq=flat.form_factor_flat_sq,
        t_tilde=flat.t_tilde,
        iqc_map=iqc_res.iqc_map,
        iqc_flat_sq=iqc_res.iqc_flat_sq,
        iqc_dose_sq=iqc_res.iqc_dose_sq,
        snr_flat_in_sq=snr_flat_measurement(p, n_bar),
        mc=mc,
    )
