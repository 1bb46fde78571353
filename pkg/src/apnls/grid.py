"""Periodic rectangular grids and the nodal fields that live on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["PeriodicGrid", "ComplexField", "RealVectorField", "make_grid"]


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid on a periodic interval (1D) or rectangle (2D).

    Nodes along axis d sit at ``lower[d] + j*dx[d]`` for j = 0..points[d]-1;
    the right endpoint is excluded by periodicity.  Wavenumbers follow FFT
    ordering: nonnegative modes first, then negative ones.
    """

    dim: int
    lower: tuple
    length: tuple
    points: tuple

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        for name in ("lower", "length", "points"):
            if len(getattr(self, name)) != self.dim:
                raise ValueError(f"{name} needs {self.dim} entries")
        object.__setattr__(self, "lower", tuple(float(x) for x in self.lower))
        object.__setattr__(self, "length", tuple(float(x) for x in self.length))
        object.__setattr__(self, "points", tuple(int(j) for j in self.points))
        for L in self.length:
            if not L > 0:
                raise ValueError(f"axis length must be positive, got {L}")
        for J in self.points:
            if J < 4 or not _is_pow2(J):
                raise ValueError(f"point count must be a power of two >= 4, got {J}")
        object.__setattr__(self, "_cache", {})

    @property
    def shape(self) -> tuple:
        return self.points

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    @property
    def dx(self) -> tuple:
        return tuple(L / J for L, J in zip(self.length, self.points))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.dx))

    def axis_nodes(self, axis: int) -> np.ndarray:
        return self.lower[axis] + self.dx[axis] * np.arange(self.points[axis])

    def node_mesh(self) -> tuple:
        """Nodal coordinate arrays, one per axis, each of full grid shape."""
        axes = [self.axis_nodes(d) for d in range(self.dim)]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def wavenumbers(self, axis: int) -> np.ndarray:
        """Angular wavenumbers 2*pi*m/L in transform ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.points[axis], d=self.dx[axis])

    def deriv_wavenumbers(self, axis: int) -> np.ndarray:
        """Differentiation multipliers: wavenumbers with the Nyquist mode zeroed.

        Zeroing the unmatched highest frequency keeps real fields real under
        differentiation.  Propagator multipliers keep the Nyquist mode.
        """
        k = self.wavenumbers(axis).copy()
        k[self.points[axis] // 2] = 0.0
        return k

    def k_squared(self) -> np.ndarray:
        """|k|^2 on the full mode lattice (Nyquist included), cached."""
        cache = self._cache
        if "k2" not in cache:
            if self.dim == 1:
                k2 = self.wavenumbers(0) ** 2
            else:
                kx2 = self.wavenumbers(0) ** 2
                ky2 = self.wavenumbers(1) ** 2
                k2 = kx2[:, None] + ky2[None, :]
            cache["k2"] = k2
        return cache["k2"]

    def compatible(self, other: "PeriodicGrid") -> bool:
        return (
            self.dim == other.dim
            and self.lower == other.lower
            and self.length == other.length
        )


def make_grid(dim: int, bounds, points) -> PeriodicGrid:
    """Build a periodic grid from per-axis (lo, hi) bounds and point counts.

    ``bounds`` is a single (lo, hi) pair in 1D or a sequence of pairs;
    ``points`` is an int (same count per axis) or a per-axis sequence.
    Counts must be powers of two >= 4 and every interval must have hi > lo.
    """
    bnds = np.asarray(bounds, dtype=float)
    if bnds.ndim == 1:
        if dim != 1 or bnds.shape != (2,):
            raise ValueError("bounds must be one (lo, hi) pair per axis")
        bnds = bnds[None, :]
    if bnds.shape != (dim, 2):
        raise ValueError(f"expected {dim} (lo, hi) pairs, got shape {bnds.shape}")
    lower = tuple(bnds[:, 0])
    length = tuple(bnds[:, 1] - bnds[:, 0])
    if np.isscalar(points):
        pts = (int(points),) * dim
    else:
        pts = tuple(int(j) for j in points)
    return PeriodicGrid(dim=dim, lower=lower, length=length, points=pts)


@dataclass
class ComplexField:
    """Nodal complex amplitude on a periodic grid."""

    grid: PeriodicGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} != grid shape {self.grid.shape}")
        if not np.isfinite(v).all():
            raise ValueError("complex field contains non-finite entries")
        self.values = v

    @classmethod
    def zeros(cls, grid: PeriodicGrid) -> "ComplexField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    def copy(self) -> "ComplexField":
        return ComplexField(self.grid, self.values.copy())


@dataclass
class RealVectorField:
    """Nodal real vector field with one component per grid axis."""

    grid: PeriodicGrid
    values: np.ndarray  # shape (dim, *grid.shape)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.dim,) + self.grid.shape:
            raise ValueError(
                f"values shape {v.shape} != {(self.grid.dim,) + self.grid.shape}"
            )
        if not np.isfinite(v).all():
            raise ValueError("vector field contains non-finite entries")
        self.values = v

    @classmethod
    def zeros(cls, grid: PeriodicGrid) -> "RealVectorField":
        return cls(grid, np.zeros((grid.dim,) + grid.shape))

    def component(self, d: int) -> np.ndarray:
        return self.values[d]

    def copy(self) -> "RealVectorField":
        return RealVectorField(self.grid, self.values.copy())
