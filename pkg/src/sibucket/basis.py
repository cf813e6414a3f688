"""Gram-matrix algebra for illumination vector sets.

Builds the Gram matrix of the illumination vectors W_m = n_bar * T_m,
orthonormalizes the set through the polar decomposition (V = W * G^{-1/2})
and constructs the biorthogonal basis (U = G^{-1} * W, <U_m, W_m'> = delta).
Also checks the two optional structural conditions: the constant function
lying in span{W} and shift-invariance of the projection kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConditionError, ParameterError, SingularSetError
from .grid import Field
from .patterns import PatternSet

DEFAULT_RANK_TOL = 1e-10


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric positive semidefinite matrix of <W_m, W_m'>."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("Gram matrix must be square")
        scale = np.abs(a).max() or 1.0
        if np.abs(a - a.T).max() > 1e-12 * scale:
            raise ValueError("Gram matrix must be symmetric")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def M(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class BasisBundle:
    """Orthonormal basis V, biorthogonal basis U and their coefficient
    matrices Q = G^{-1/2}, Q2 = G^{-1} for one pattern set."""

    pattern_set: PatternSet
    gram: GramMatrix
    Q: np.ndarray
    Q2: np.ndarray
    V: tuple[Field, ...]
    U: tuple[Field, ...]
    w_scale: float | None

    @property
    def M(self) -> int:
        return self.pattern_set.M

    @cached_property
    def v_matrix(self) -> np.ndarray:
        return np.stack([f.values for f in self.V])

    @cached_property
    def u_matrix(self) -> np.ndarray:
        return np.stack([f.values for f in self.U])

    @cached_property
    def s_matrix(self) -> np.ndarray:
        """Biorthogonal partners of the masks: S_m = n_bar * U_m (these do
        not depend on n_bar)."""
        return self.pattern_set.n_bar * self.u_matrix

    def s_field(self, m: int) -> Field:
        return Field(self.pattern_set.grid, self.s_matrix[m])


def gram(p: PatternSet) -> GramMatrix:
    """Gram matrix of the illumination vectors, exactly symmetric."""
    mat = p.mask_matrix
    g = (mat @ mat.T) / p.grid.n_cells
    g = p.n_bar**2 * 0.5 * (g + g.T)
    return GramMatrix(g)


def independence_rank(g: GramMatrix, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of Gram eigenvalues above rel_tol times the largest."""
    if not (0.0 < rel_tol < 1.0):
        raise ParameterError("rel_tol must lie in (0, 1)")
    eigvals = np.linalg.eigvalsh(g.entries)
    largest = eigvals[-1]
    if largest <= 0:
        return 0
    return int(np.sum(eigvals > rel_tol * largest))


def _eig_decompose(g: GramMatrix, rank_tol: float) -> tuple[np.ndarray, np.ndarray]:
    eigvals, eigvecs = np.linalg.eigh(g.entries)
    deficient = int(np.sum(eigvals <= rank_tol * eigvals[-1]))
    if deficient:
        raise SingularSetError(
            f"mask set is rank deficient: {deficient} of {g.M} Gram "
            f"eigenvalues below {rank_tol:g} of the largest"
        )
    return eigvals, eigvecs


def _w_scale(g: GramMatrix) -> float | None:
    """Common length w if the set is orthogonal with equal lengths."""
    e = g.entries
    diag = np.diag(e)
    off = e - np.diag(diag)
    scale = diag.max()
    if np.abs(off).max() <= 1e-10 * scale and np.ptp(diag) <= 1e-10 * scale:
        return float(np.sqrt(diag.mean()))
    return None


def biorthogonal(p: PatternSet, rank_tol: float = DEFAULT_RANK_TOL) -> BasisBundle:
    """Full basis bundle: polar orthonormalization plus biorthogonal basis.

    Q is the inverse square root of the Gram matrix computed by symmetric
    eigendecomposition; Q2 its square.  V_m = sum q_mm' W_m' and
    U_m = sum q2_mm' W_m'.
    """
    g = gram(p)
    eigvals, eigvecs = _eig_decompose(g, rank_tol)
    q = (eigvecs / np.sqrt(eigvals)) @ eigvecs.T
    q2 = (eigvecs / eigvals) @ eigvecs.T
    q = 0.5 * (q + q.T)
    q2 = 0.5 * (q2 + q2.T)
    wmat = p.n_bar * p.mask_matrix
    vmat = q @ wmat
    umat = q2 @ wmat
    grid = p.grid
    return BasisBundle(
        pattern_set=p,
        gram=g,
        Q=q,
        Q2=q2,
        V=tuple(Field(grid, row) for row in vmat),
        U=tuple(Field(grid, row) for row in umat),
        w_scale=_w_scale(g),
    )


def orthonormalize_polar(
    p: PatternSet, rank_tol: float = DEFAULT_RANK_TOL
) -> BasisBundle:
    """Alias for biorthogonal(); the polar V/Q parts are always built
    together with U/Q2 since both come from one eigendecomposition."""
    return biorthogonal(p, rank_tol)


def check_condition1(
    p: PatternSet, tol: float = 1e-9, bundle: BasisBundle | None = None
) -> tuple[bool, np.ndarray, float]:
    """Does the constant function lie in span{W_m}?

    Returns (holds, alpha, residual) where alpha_m = <1, U_m> are the
    expansion coefficients and residual = ||1 - sum alpha_m W_m||.
    """
    bb = bundle if bundle is not None else biorthogonal(p)
    alpha = bb.u_matrix.mean(axis=1)
    wmat = p.n_bar * p.mask_matrix
    resid_vec = 1.0 - alpha @ wmat
    residual = float(np.sqrt(np.mean(resid_vec**2)))
    return residual <= tol, alpha, residual


def check_condition2(
    bb: BasisBundle,
    shifts: list[tuple[int, int]] | None = None,
    tol: float = 1e-8,
) -> tuple[bool, float]:
    """Shift-invariance of the projection kernel under whole-cell shifts.

    Compares G(r+h, r'+h) against G(r, r') for every pair of cells that
    stays inside the domain, for each lattice shift h, and reports the
    largest deviation relative to max|G|.  Also requires the diagonal
    f(r) = sum_m V_m(r)^2 to be constant (equal to M), which shift
    invariance implies.
    """
    if shifts is None:
        shifts = [(1, 0), (0, 1), (1, 1)]
    if not shifts:
        raise ParameterError("need at least one shift to test")
    grid = bb.pattern_set.grid
    vmat = bb.v_matrix
    g = vmat.T @ vmat  # (n_cells, n_cells) kernel samples
    gmax = np.abs(g).max()
    g4 = g.reshape(grid.nx, grid.ny, grid.nx, grid.ny)
    max_dev = 0.0
    for sx, sy in shifts:
        if abs(sx) >= grid.nx or abs(sy) >= grid.ny:
            raise ParameterError(f"shift {(sx, sy)} leaves the domain")
        base = g4[
            max(0, -sx) : grid.nx - max(0, sx),
            max(0, -sy) : grid.ny - max(0, sy),
            max(0, -sx) : grid.nx - max(0, sx),
            max(0, -sy) : grid.ny - max(0, sy),
        ]
        shifted = g4[
            max(0, sx) : grid.nx + min(0, sx),
            max(0, sy) : grid.ny + min(0, sy),
            max(0, sx) : grid.nx + min(0, sx),
            max(0, sy) : grid.ny + min(0, sy),
        ]
        max_dev = max(max_dev, float(np.abs(shifted - base).max() / gmax))
    diag_dev = float(np.abs(np.diag(g) - bb.M).max() / gmax)
    max_dev = max(max_dev, diag_dev)
    return max_dev <= tol, max_dev


def require_condition1(p: PatternSet, bundle: BasisBundle, tol: float = 1e-9) -> None:
    holds, _, residual = check_condition1(p, tol, bundle)
    if not holds:
        raise ConditionError(
            f"constant function is not in the mask span (residual {residual:.3e}); "
            "this metric is only defined when it is"
        )


def require_condition2(bb: BasisBundle, tol: float = 1e-8) -> None:
    holds, max_dev = check_condition2(bb, tol=tol)
    if not holds:
        raise ConditionError(
            f"projection kernel is not shift-invariant (max deviation {max_dev:.3e})"
        )
