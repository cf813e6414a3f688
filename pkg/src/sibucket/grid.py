"""Discretized image domain and sampled real-valued fields.

The domain is an axis-aligned rectangle split into nx*ny equal cells.  A
Field stores one value per cell (the function value at the cell centre),
row-major with x as the outer index: flat index = ix*ny + iy.  All
integrals are midpoint-rule sums, so the normalized scalar product is an
exact arithmetic mean over cells.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import FieldFormatError, GridMismatchError

_MAGIC = b"SIFIELD1"


@dataclass(frozen=True)
class Grid:
    """Uniform rectangular sampling grid with physical dimensions."""

    nx: int
    ny: int
    width_x: float
    width_y: float

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid needs at least one cell per axis")
        if not (self.width_x > 0 and self.width_y > 0):
            raise ValueError("grid widths must be positive")

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def area(self) -> float:
        return self.width_x * self.width_y

    @property
    def cell_area(self) -> float:
        return self.area / self.n_cells

    @property
    def dx(self) -> float:
        return self.width_x / self.nx

    @property
    def dy(self) -> float:
        return self.width_y / self.ny

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-centre coordinates (x, y), each of length n_cells."""
        xs = (np.arange(self.nx) + 0.5) * self.dx
        ys = (np.arange(self.ny) + 0.5) * self.dy
        xx, yy = np.meshgrid(xs, ys, indexing="ij")
        return xx.ravel(), yy.ravel()

    def index(self, ix: int, iy: int) -> int:
        return ix * self.ny + iy


@dataclass(frozen=True)
class Field:
    """Real function sampled on a Grid, immutable after construction."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (self.grid.n_cells,):
            raise ValueError(
                f"expected {self.grid.n_cells} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "Field":
        return cls(grid, np.full(grid.n_cells, float(value)))

    def as_image(self) -> np.ndarray:
        """(nx, ny) view of the values."""
        return self.values.reshape(self.grid.nx, self.grid.ny)


def _check_same_grid(f: Field, g: Field) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(f"grids differ: {f.grid} vs {g.grid}")


def inner(f: Field, g: Field) -> float:
    """Normalized scalar product: the mean over cells of f*g."""
    _check_same_grid(f, g)
    return float(np.mean(f.values * g.values))


def norm(f: Field) -> float:
    return float(np.sqrt(np.mean(f.values * f.values)))


def spatial_mean(f: Field) -> float:
    return float(np.mean(f.values))


def write_field(path, f: Field) -> None:
    """Write a field in SIFIELD1 format: one ASCII header line
    ("SIFIELD1 nx ny width_x width_y") followed by nx*ny little-endian
    float64 values in row-major (x outer) order."""
    g = f.grid
    header = "SIFIELD1 %d %d %.17g %.17g\n" % (g.nx, g.ny, g.width_x, g.width_y)
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(struct.pack("<%dd" % g.n_cells, *f.values))


def read_field(path) -> Field:
    with open(path, "rb") as fh:
        header = fh.readline()
        if not header.startswith(_MAGIC):
            raise FieldFormatError(f"{path}: missing SIFIELD1 magic")
        parts = header.split()
        if len(parts) != 5:
            raise FieldFormatError(f"{path}: malformed header {header!r}")
        try:
            nx, ny = int(parts[1]), int(parts[2])
            wx, wy = float(parts[3]), float(parts[4])
        except ValueError as exc:
            raise FieldFormatError(f"{path}: bad header numbers") from exc
        grid = Grid(nx, ny, wx, wy)
        raw = fh.read(8 * grid.n_cells)
        if len(raw) != 8 * grid.n_cells:
            raise FieldFormatError(f"{path}: truncated payload")
        values = np.frombuffer(raw, dtype="<f8").astype(np.float64)
    return Field(grid, values)
