"""Catalog of initial data for the experiment harness.

Every entry produces nodal (a0, v0, phi0) with v0 = grad(phi0) wherever a
closed-form phase exists, so amplitude-velocity runs and wavefunction runs
start from the same data (u0 = a0 exp(i phi0 / eps) for the latter).
"""

from __future__ import annotations

import numpy as np

from .grid import ComplexField, PeriodicGrid, RealVectorField
from .hydro import HydroState
from .reference import WaveState
from .snapshots import load_snapshot

__all__ = ["INITIAL_TAGS", "initial_fields", "build_initial"]

INITIAL_TAGS = (
    "gauss-logcosh-1d",
    "gauss-logcosh-2d",
    "maxwell-2temp",
    "plane-wave",
    "custom-snapshot",
)


def _gauss_logcosh_1d(grid: PeriodicGrid):
    (x,) = grid.node_mesh()
    s = x - 0.5
    a0 = np.exp(-25.0 * s * s)
    v0 = -np.tanh(5.0 * s)[None]
    phi0 = -0.2 * np.logaddexp(5.0 * s, -5.0 * s)
    return a0.astype(complex), v0, phi0


def _gauss_logcosh_2d(grid: PeriodicGrid):
    x, y = grid.node_mesh()
    r = np.hypot(x - 0.5, y - 0.5)
    a0 = np.exp(-25.0 * r * r)
    # -tanh(5r)/r tends to -5 at the center node
    w = np.full_like(r, -5.0)
    np.divide(-np.tanh(5.0 * r), r, out=w, where=r > 1e-30)
    v0 = np.stack([w * (x - 0.5), w * (y - 0.5)])
    phi0 = -0.2 * np.logaddexp(5.0 * r, -5.0 * r)
    return a0.astype(complex), v0, phi0


def _maxwell_2temp(grid: PeriodicGrid, theta1: float = 0.05, theta2: float = 0.015):
    x, y = grid.node_mesh()
    amp = 0.5 / (2.0 * np.pi * np.sqrt(theta1) * np.sqrt(theta2))
    a0 = amp * np.exp(-((x - 0.5) ** 2) / (2.0 * theta1) - ((y - 0.5) ** 2) / (2.0 * theta2))
    return a0.astype(complex), np.zeros((2,) + grid.shape), np.zeros(grid.shape)


def _plane_wave(grid: PeriodicGrid, amplitude: float = 1.0):
    a0 = np.full(grid.shape, amplitude, dtype=complex)
    return a0, np.zeros((grid.dim,) + grid.shape), np.zeros(grid.shape)


def _custom_snapshot(grid: PeriodicGrid, prefix: str):
    agrid, avals, _ = load_snapshot(f"{prefix}-a.dat")
    vgrid, vvals, _ = load_snapshot(f"{prefix}-v.dat")
    if agrid.points != grid.points or not agrid.compatible(grid):
        raise ValueError("custom snapshot grid does not match the requested grid")
    if vgrid.points != grid.points:
        raise ValueError("custom snapshot velocity grid mismatch")
    try:
        _, phi0, _ = load_snapshot(f"{prefix}-phi.dat")
    except FileNotFoundError:
        phi0 = np.zeros(grid.shape)
    return np.asarray(avals, dtype=complex), vvals, phi0


def initial_fields(tag: str, grid: PeriodicGrid, params=()):
    """Nodal (a0, v0, phi0) arrays for a catalog tag."""
    if tag == "gauss-logcosh-1d":
        if grid.dim != 1:
            raise ValueError(f"{tag} needs a 1D grid")
        return _gauss_logcosh_1d(grid)
    if tag == "gauss-logcosh-2d":
        if grid.dim != 2:
            raise ValueError(f"{tag} needs a 2D grid")
        return _gauss_logcosh_2d(grid)
    if tag == "maxwell-2temp":
        if grid.dim != 2:
            raise ValueError(f"{tag} needs a 2D grid")
        return _maxwell_2temp(grid, *[float(p) for p in params])
    if tag == "plane-wave":
        return _plane_wave(grid, *[float(p) for p in params])
    if tag == "custom-snapshot":
        (prefix,) = params
        return _custom_snapshot(grid, str(prefix))
    raise ValueError(f"unknown initial-data tag {tag!r}")


def build_initial(tag: str, grid: PeriodicGrid, *, eps: float, equation: str = "ap-nls", params=()):
    """Materialize a start state for the requested solver family.

    Returns a HydroState (with phi0) for amplitude-velocity runs and a
    WaveState with u0 = a0 exp(i phi0 / eps) for splitting runs.
    """
    a0, v0, phi0 = initial_fields(tag, grid, params)
    if equation in ("ap-nls", "eikonal", "linear"):
        return HydroState(
            a=ComplexField(grid, a0),
            v=RealVectorField(grid, v0),
            t=0.0,
            eps=eps,
            phi=phi0,
        )
    if equation in ("splitting-nls", "splitting-linear"):
        u0 = a0 * np.exp(1j * phi0 / eps)
        return WaveState(u=ComplexField(grid, u0), t=0.0, eps=eps)
    raise ValueError(f"unknown equation tag {equation!r}")
