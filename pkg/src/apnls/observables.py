"""Physical observables, phase accumulation, wavefunction reconstruction and
the relative l1 error metric used by the experiment harness.

Observables of an amplitude-velocity pair:

    rho = |a|^2
    j   = eps Im(conj(a) grad a) + rho v
    e   = |eps grad a + i a v|^2 + |a|^4

with the gradient taken spectrally.  rho and e are nonnegative by
construction, and j = rho v holds exactly whenever Im a = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import ComplexField, PeriodicGrid, RealVectorField
from .nonlinearity import Nonlinearity, cubic
from .spectral import divergence, gradient_array

__all__ = [
    "ObservableSet",
    "observables",
    "wave_observables",
    "phase_integrand",
    "accumulate_phase",
    "reconstruct",
    "l1_norm",
    "l2_norm",
    "subsample",
    "rel_l1_error",
]


@dataclass
class ObservableSet:
    """Particle density rho, current density j and energy density e."""

    grid: PeriodicGrid
    rho: np.ndarray
    j: np.ndarray  # shape (dim, *grid.shape)
    e: np.ndarray


def _amplitude_gradients(a: ComplexField):
    """Per-axis gradients of Re a and Im a through the real transform path,
    so a real amplitude keeps an exactly real gradient."""
    grid = a.grid
    gre = [gradient_array(grid, a.values.real, d) for d in range(grid.dim)]
    gim = [gradient_array(grid, a.values.imag, d) for d in range(grid.dim)]
    return gre, gim


def observables(a: ComplexField, v: RealVectorField, eps: float) -> ObservableSet:
    """Quadratic observables of an amplitude-velocity state."""
    if not a.grid.compatible(v.grid) or a.grid.shape != v.grid.shape:
        raise ValueError("fields live on different grids")
    grid = a.grid
    are, aim = a.values.real, a.values.imag
    rho = are * are + aim * aim
    gre, gim = _amplitude_gradients(a)
    j = np.empty((grid.dim,) + grid.shape)
    e = rho * rho
    for d in range(grid.dim):
        j[d] = eps * (are * gim[d] - aim * gre[d]) + rho * v.values[d]
        wre = eps * gre[d] - aim * v.values[d]
        wim = eps * gim[d] + are * v.values[d]
        e = e + wre * wre + wim * wim
    return ObservableSet(grid=grid, rho=rho, j=j, e=e)


def wave_observables(u: ComplexField, eps: float):
    """Particle and current densities of a wavefunction: |u|^2 and eps Im(conj(u) grad u)."""
    grid = u.grid
    ure, uim = u.values.real, u.values.imag
    rho = ure * ure + uim * uim
    gre = [gradient_array(grid, ure, d) for d in range(grid.dim)]
    gim = [gradient_array(grid, uim, d) for d in range(grid.dim)]
    j = np.stack([eps * (ure * gim[d] - uim * gre[d]) for d in range(grid.dim)])
    return rho, j


def phase_integrand(
    a: ComplexField,
    v: RealVectorField,
    eps: float,
    nl: Nonlinearity = None,
    *,
    t: float = 0.0,
    nu: float = None,
) -> np.ndarray:
    """Integrand (1/2)|v|^2 + f(|a|^2) - nu div(v) of the phase equation.

    The coupling term is V(t, x) for the linear-potential law; nu defaults
    to eps^2 and must match the diffusivity used in the march.
    """
    nl = nl if nl is not None else cubic()
    grid = a.grid
    nu_eff = eps * eps if nu is None else float(nu)
    g = 0.5 * np.sum(v.values * v.values, axis=0)
    g = g + nl.coupling(np.abs(a.values) ** 2, t, grid)
    if nu_eff != 0.0:
        g = g - nu_eff * divergence(grid, v.values)
    return g


def accumulate_phase(
    phi: np.ndarray,
    a: ComplexField,
    v: RealVectorField,
    eps: float,
    dt: float,
    nl: Nonlinearity = None,
    *,
    t: float = 0.0,
    nu: float = None,
) -> np.ndarray:
    """One rectangle-rule increment of the accumulated phase.

    Call once per accepted time step with the step's left-endpoint fields.
    The marching loop itself uses a trapezoidal variant of the same
    integrand, which keeps reconstruction errors second order in dt.
    """
    return phi - dt * phase_integrand(a, v, eps, nl, t=t, nu=nu)


def reconstruct(a: ComplexField, phi: np.ndarray, eps: float) -> ComplexField:
    """Wavefunction u = a exp(i phi / eps); |u| = |a| nodally."""
    if eps <= 0:
        raise ValueError("reconstruction needs eps > 0")
    phi = np.asarray(phi, dtype=float)
    if phi.shape != a.grid.shape:
        raise ValueError("phase field does not match the grid")
    return ComplexField(a.grid, a.values * np.exp(1j * phi / eps))


def l1_norm(grid: PeriodicGrid, values: np.ndarray) -> float:
    """Cell-weighted l1 norm; component stacks contribute componentwise."""
    return float(grid.cell_volume * np.sum(np.abs(values)))


def l2_norm(grid: PeriodicGrid, values: np.ndarray) -> float:
    """Cell-weighted l2 norm."""
    return float(np.sqrt(grid.cell_volume * np.sum(np.abs(values) ** 2)))


def subsample(values: np.ndarray, src: PeriodicGrid, dst: PeriodicGrid) -> np.ndarray:
    """Restrict nodal values from a fine grid to a coarser nested grid.

    Grids must share bounds and the fine point counts must be integer
    multiples of the coarse ones; restriction is exact subsampling, so the
    coarse nodes coincide with fine nodes.
    """
    if not src.compatible(dst):
        raise ValueError("grids do not share a domain")
    strides = []
    for Js, Jd in zip(src.points, dst.points):
        if Js % Jd != 0:
            raise ValueError(f"fine count {Js} is not a multiple of coarse count {Jd}")
        strides.append(Js // Jd)
    sl = tuple(slice(None, None, s) for s in strides)
    if values.ndim == src.dim:
        return values[sl]
    return values[(slice(None),) + sl]


def rel_l1_error(
    values: np.ndarray, grid: PeriodicGrid, ref_values: np.ndarray, ref_grid: PeriodicGrid
) -> float:
    """Relative l1 error against a reference, ||ref - x||_1 / ||ref||_1.

    The reference may live on a finer nested grid, in which case it is
    subsampled to the coarse nodes.  Vector fields contribute the sum of
    componentwise absolute values inside the norm.
    """
    if ref_grid.points != grid.points:
        ref_values = subsample(np.asarray(ref_values), ref_grid, grid)
    ref_norm = l1_norm(grid, ref_values)
    if ref_norm <= 0.0:
        raise ValueError("reference has zero l1 norm; misconfigured comparison")
    return l1_norm(grid, ref_values - np.asarray(values)) / ref_norm
