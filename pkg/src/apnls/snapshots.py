"""Plain-text nodal snapshot files.

A snapshot starts with six header lines (``dim``, ``J``, ``bounds``,
``epsilon``, ``time``, ``kind``) followed by one node per line of
whitespace-separated decimal floats with 17 significant digits, row-major.
Complex fields write the real and imaginary parts; vector kinds write one
column per component; rho, energy and phase are single-column scalars.
"""

from __future__ import annotations

import numpy as np

from .grid import ComplexField, PeriodicGrid, RealVectorField, make_grid

__all__ = ["save_snapshot", "load_snapshot", "save_field", "load_complex_field"]

SCALAR_KINDS = ("rho", "energy", "phase")
VECTOR_KINDS = ("realvec", "current")
KINDS = ("complex",) + VECTOR_KINDS + SCALAR_KINDS


def save_snapshot(path, grid: PeriodicGrid, values: np.ndarray, kind: str, *, epsilon: float, time: float):
    """Write nodal values of the given kind to a snapshot file."""
    if kind not in KINDS:
        raise ValueError(f"unknown snapshot kind {kind!r}")
    values = np.asarray(values)
    n = grid.size
    if kind == "complex":
        flat = values.reshape(n)
        cols = np.column_stack([flat.real, flat.imag])
    elif kind in VECTOR_KINDS:
        if values.shape != (grid.dim,) + grid.shape:
            raise ValueError("vector values do not match the grid")
        cols = np.column_stack([values[d].reshape(n) for d in range(grid.dim)])
    else:
        cols = values.reshape(n, 1)
    bounds = " ".join(
        f"{lo:.17g} {lo + L:.17g}" for lo, L in zip(grid.lower, grid.length)
    )
    header = (
        f"dim {grid.dim}\n"
        f"J {' '.join(str(j) for j in grid.points)}\n"
        f"bounds {bounds}\n"
        f"epsilon {epsilon:.17g}\n"
        f"time {time:.17g}\n"
        f"kind {kind}\n"
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header)
        np.savetxt(fh, cols, fmt="%.17g")


def load_snapshot(path):
    """Read a snapshot file; returns (grid, values, meta).

    ``values`` is a complex array for kind complex, a (dim, *shape) stack for
    vector kinds and a plain real array for scalar kinds.  ``meta`` carries
    epsilon, time and kind.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = {}
        for _ in range(6):
            key, _, rest = fh.readline().strip().partition(" ")
            header[key] = rest
        data = np.loadtxt(fh, ndmin=2)
    dim = int(header["dim"])
    points = tuple(int(tok) for tok in header["J"].split())
    btoks = [float(tok) for tok in header["bounds"].split()]
    bounds = [(btoks[2 * d], btoks[2 * d + 1]) for d in range(dim)]
    grid = make_grid(dim, bounds, points)
    kind = header["kind"]
    meta = {"epsilon": float(header["epsilon"]), "time": float(header["time"]), "kind": kind}
    if data.shape[0] != grid.size:
        raise ValueError(f"{path}: expected {grid.size} node lines, found {data.shape[0]}")
    if kind == "complex":
        values = (data[:, 0] + 1j * data[:, 1]).reshape(grid.shape)
    elif kind in VECTOR_KINDS:
        values = np.stack([data[:, d].reshape(grid.shape) for d in range(dim)])
    elif kind in SCALAR_KINDS:
        values = data[:, 0].reshape(grid.shape)
    else:
        raise ValueError(f"{path}: unknown snapshot kind {kind!r}")
    return grid, values, meta


def save_field(path, field, *, epsilon: float, time: float):
    """Write a ComplexField or RealVectorField with the matching kind tag."""
    if isinstance(field, ComplexField):
        save_snapshot(path, field.grid, field.values, "complex", epsilon=epsilon, time=time)
    elif isinstance(field, RealVectorField):
        save_snapshot(path, field.grid, field.values, "realvec", epsilon=epsilon, time=time)
    else:
        raise TypeError(f"unsupported field type {type(field).__name__}")


def load_complex_field(path):
    grid, values, meta = load_snapshot(path)
    if meta["kind"] != "complex":
        raise ValueError(f"{path}: expected a complex snapshot, got kind {meta['kind']!r}")
    return ComplexField(grid, values), meta
