"""Reconstruction, projection kernels, and the reconstruction-matrix
classifier.

Reconstruction is the linear projection sum_m a_m U_m(r); with noiseless
counts this equals the projection of the object onto the mask span.  The
same projector is materialized as a kernel matrix (Green's function) for
desk-scale grids, or applied operator-style for larger ones.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .basis import BasisBundle, require_condition2
from .errors import ParameterError
from .grid import Field, Grid
from .patterns import PatternSet
from .sim import MeasurementRecord

MAX_DENSE_CELLS = 2**14

KIND_GREEN = "green"
KIND_MEASUREMENT = "measurement"
KIND_RECONSTRUCTION = "reconstruction"

CLASS_ROTATION = "I"
CLASS_CONVOLUTION = "II"
CLASS_DECONVOLUTION = "III"


@dataclass(frozen=True)
class KernelMatrix:
    """Dense kernel samples K(r_i, r_j) at cell centres."""

    kind: str
    grid: Grid
    entries: np.ndarray


@dataclass(frozen=True)
class ReconMatrix:
    """Matrix r_mm' mapping measured counts to object coefficients."""

    r_entries: np.ndarray
    class_label: str = "unclassified"
    evidence: str = ""

    @property
    def M(self) -> int:
        return self.r_entries.shape[0]


def reconstruct(
    rec: MeasurementRecord, bb: BasisBundle, cross_check_tol: float = 1e-9
) -> Field:
    """sum_m a_m U_m(r), cross-checked against the V- and W-coefficient
    forms of the same projection."""
    a = np.asarray(rec.counts, dtype=np.float64)
    if a.shape[0] != bb.M:
        raise ParameterError(f"measurement has {a.shape[0]} coefficients, basis {bb.M}")
    u_form = a @ bb.u_matrix
    wmat = bb.pattern_set.n_bar * bb.pattern_set.mask_matrix
    v_form = (bb.Q @ a) @ bb.v_matrix
    w_form = (bb.Q2 @ a) @ wmat
    scale = max(np.abs(u_form).max(), 1.0)
    dev = max(
        np.abs(u_form - v_form).max(),
        np.abs(u_form - w_form).max(),
    )
    if dev > cross_check_tol * scale:
        raise ParameterError(
            f"expansion forms disagree by {dev:.3e} (relative tol {cross_check_tol:g})"
        )
    return Field(bb.pattern_set.grid, u_form)


def reconstruct_noiseless(rec: MeasurementRecord, bb: BasisBundle) -> Field:
    """Projection of the object: reconstruction from the mean counts."""
    return reconstruct(replace(rec, a=None), bb)


def _check_dense(grid: Grid) -> None:
    if grid.n_cells > MAX_DENSE_CELLS:
        raise ParameterError(
            f"grid has {grid.n_cells} cells > {MAX_DENSE_CELLS}; use the "
            "apply-style operators instead of materializing the kernel"
        )


def green_kernel(bb: BasisBundle) -> KernelMatrix:
    """G(r_i, r_j) = sum_m V_m(r_i) V_m(r_j)."""
    grid = bb.pattern_set.grid
    _check_dense(grid)
    g = bb.v_matrix.T @ bb.v_matrix
    return KernelMatrix(KIND_GREEN, grid, 0.5 * (g + g.T))


def measurement_kernel(p: PatternSet) -> KernelMatrix:
    """A(r_i, r_j) = sum_m W_m(r_i) W_m(r_j)."""
    grid = p.grid
    _check_dense(grid)
    wmat = p.n_bar * p.mask_matrix
    a = wmat.T @ wmat
    return KernelMatrix(KIND_MEASUREMENT, grid, 0.5 * (a + a.T))


def reconstruction_kernel(bb: BasisBundle) -> KernelMatrix:
    """R(r_i, r_j) = sum_m U_m(r_i) U_m(r_j)."""
    grid = bb.pattern_set.grid
    _check_dense(grid)
    r = bb.u_matrix.T @ bb.u_matrix
    return KernelMatrix(KIND_RECONSTRUCTION, grid, 0.5 * (r + r.T))


def green_apply(bb: BasisBundle, f: Field) -> Field:
    """Projection of f onto the mask span without materializing the kernel."""
    if f.grid != bb.pattern_set.grid:
        raise ParameterError("field grid does not match the basis grid")
    coeffs = bb.v_matrix @ f.values / f.grid.n_cells
    return Field(f.grid, coeffs @ bb.v_matrix)


def center_cell(grid: Grid) -> int:
    """Flat index of the cell containing the domain midpoint."""
    return grid.index(grid.nx // 2, grid.ny // 2)


def psf(bb: BasisBundle, center: int | None = None, cond2_tol: float = 1e-8) -> Field:
    """Point-spread function P(r) = sum_m V_m(c) V_m(r) for the centre cell c.

    Only meaningful when the kernel is shift-invariant; refuses otherwise.
    """
    require_condition2(bb, tol=cond2_tol)
    grid = bb.pattern_set.grid
    c = center_cell(grid) if center is None else center
    vals = bb.v_matrix[:, c] @ bb.v_matrix
    return Field(grid, vals)


def recon_matrix(bb: BasisBundle) -> ReconMatrix:
    """Coefficient form of the reconstruction operator: r_mm' = q2_mm'."""
    return ReconMatrix(r_entries=bb.Q2.copy())


def classify(rm: ReconMatrix, tol: float = 1e-8) -> ReconMatrix:
    """Label the reconstruction matrix by its qualitative action.

    I  (rotation-like): R R^T = c * Identity -> preserves SNR and resolution.
    II (convolution-like): entries all non-negative -> low-pass behaviour.
    III (deconvolution-like): mixed signs -> high-pass behaviour.
    Gates are tested in order I -> II -> III; the gates are heuristic and
    the evidence string records what was found.
    """
    r = rm.r_entries
    rrt = r @ r.T
    c = float(np.trace(rrt) / rm.M)
    scale = max(np.abs(rrt).max(), np.finfo(float).tiny)
    iso_dev = float(np.abs(rrt - c * np.eye(rm.M)).max() / scale)
    if c > 0 and iso_dev <= tol:
        return replace(
            rm,
            class_label=CLASS_ROTATION,
            evidence=f"R R^T = c I with c = {c:.6g} (deviation {iso_dev:.2e})",
        )
    abs_scale = np.abs(r).max()
    n_negative = int(np.sum(r < -tol * abs_scale))
    if n_negative == 0:
        return replace(
            rm,
            class_label=CLASS_CONVOLUTION,
            evidence="all entries non-negative",
        )
    return replace(
        rm,
        class_label=CLASS_DECONVOLUTION,
        evidence=f"{n_negative} of {rm.M * rm.M} entries negative (mixed signs)",
    )
