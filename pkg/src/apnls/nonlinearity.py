"""Pressure-law variants for the amplitude-velocity system, plus the external
potentials used on the linear-equation path.

Every nonlinear law is given through the pair (f, f') evaluated at
y = |a|^2 >= 0 and must satisfy f'(y) >= delta > 0, which is checked on a
sample of y values at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import PeriodicGrid

__all__ = [
    "PotentialSpec",
    "Nonlinearity",
    "cubic",
    "cubic_quintic",
    "saturated",
    "linear_potential",
]


@dataclass(frozen=True)
class PotentialSpec:
    """Real external potential V(t, x), sampled on grid nodes on demand."""

    tag: str
    params: tuple = ()
    fn: object = None  # callable (t, grid) -> ndarray, used by custom tags

    def nodal(self, t: float, grid: PeriodicGrid) -> np.ndarray:
        if self.tag == "zero":
            return np.zeros(grid.shape)
        if self.tag == "single-cosine":
            (amplitude,) = self.params
            mesh = grid.node_mesh()
            out = np.zeros(grid.shape)
            for d in range(grid.dim):
                out += amplitude * np.cos(
                    2.0 * np.pi * (mesh[d] - grid.lower[d]) / grid.length[d]
                )
            return out
        if self.fn is not None:
            vals = np.asarray(self.fn(t, grid), dtype=float)
            if vals.shape != grid.shape:
                raise ValueError("potential samples do not match the grid")
            if not np.isfinite(vals).all():
                raise ValueError("potential samples are not finite")
            return vals
        raise ValueError(f"unknown potential tag {self.tag!r}")

    @staticmethod
    def zero() -> "PotentialSpec":
        return PotentialSpec("zero")

    @staticmethod
    def single_cosine(amplitude: float = 1.0) -> "PotentialSpec":
        return PotentialSpec("single-cosine", (float(amplitude),))

    @staticmethod
    def from_table(values: np.ndarray) -> "PotentialSpec":
        """Static potential from nodal samples."""
        table = np.asarray(values, dtype=float)
        return PotentialSpec("table", (), lambda t, grid: table)

    @staticmethod
    def from_callable(fn) -> "PotentialSpec":
        return PotentialSpec("callable", (), fn)


_DELTA_SAMPLES = np.concatenate([np.linspace(0.0, 16.0, 257), [64.0, 256.0]])


@dataclass(frozen=True)
class Nonlinearity:
    """Right-hand-side law selecting the pressure coupling of the system.

    Tags: ``cubic`` (f(y) = y), ``cubic-quintic`` (f(y) = y + lambda y^2),
    ``saturated`` (f(y) = delta y + eta y / (1 + lambda y)) and
    ``linear-potential`` where an external V(t, x) replaces the |a|^2
    coupling and the pressure rows of the transport matrices are zeroed.
    """

    tag: str
    params: tuple = ()
    potential: PotentialSpec = field(default=None)

    def __post_init__(self):
        if self.tag == "cubic":
            expected = 0
        elif self.tag == "cubic-quintic":
            expected = 1
        elif self.tag == "saturated":
            expected = 3
        elif self.tag == "linear-potential":
            if self.potential is None:
                raise ValueError("linear-potential needs a PotentialSpec")
            return
        else:
            raise ValueError(f"unknown nonlinearity tag {self.tag!r}")
        if len(self.params) != expected:
            raise ValueError(f"{self.tag} takes {expected} parameter(s)")
        fp = self.fprime(_DELTA_SAMPLES)
        if not np.all(fp > 0.0):
            raise ValueError(f"{self.tag}{self.params}: f' is not uniformly positive")

    @property
    def is_potential(self) -> bool:
        return self.tag == "linear-potential"

    def f(self, y):
        y = np.asarray(y, dtype=float)
        if self.tag == "cubic":
            return y
        if self.tag == "cubic-quintic":
            (lam,) = self.params
            return y + lam * y * y
        if self.tag == "saturated":
            delta, eta, lam = self.params
            return delta * y + eta * y / (1.0 + lam * y)
        raise ValueError("linear-potential has no pointwise law f")

    def fprime(self, y):
        y = np.asarray(y, dtype=float)
        if self.tag == "cubic":
            return np.ones_like(y)
        if self.tag == "cubic-quintic":
            (lam,) = self.params
            return 1.0 + 2.0 * lam * y
        if self.tag == "saturated":
            delta, eta, lam = self.params
            return delta + eta / (1.0 + lam * y) ** 2
        raise ValueError("linear-potential has no pointwise law f")

    def antiderivative(self, y):
        """F(y) = integral of f from 0 to y, used by the energy diagnostic."""
        y = np.asarray(y, dtype=float)
        if self.tag == "cubic":
            return 0.5 * y * y
        if self.tag == "cubic-quintic":
            (lam,) = self.params
            return 0.5 * y * y + lam * y**3 / 3.0
        if self.tag == "saturated":
            delta, eta, lam = self.params
            return 0.5 * delta * y * y + eta * (y / lam - np.log1p(lam * y) / lam**2)
        raise ValueError("linear-potential has no antiderivative F")

    def coupling(self, y, t: float, grid: PeriodicGrid):
        """The term entering the phase integrand: f(|a|^2), or V(t, x)."""
        if self.is_potential:
            return self.potential.nodal(t, grid)
        return self.f(y)


def cubic() -> Nonlinearity:
    return Nonlinearity("cubic")


def cubic_quintic(lam: float) -> Nonlinearity:
    return Nonlinearity("cubic-quintic", (float(lam),))


def saturated(delta: float, eta: float, lam: float) -> Nonlinearity:
    return Nonlinearity("saturated", (float(delta), float(eta), float(lam)))


def linear_potential(potential: PotentialSpec) -> Nonlinearity:
    return Nonlinearity("linear-potential", (), potential)
