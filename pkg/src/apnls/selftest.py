"""Built-in invariant suite behind the ``selftest`` subcommand.

Each check prints one PASS/FAIL line; randomized checks draw from a seeded
generator so runs are reproducible.
"""

from __future__ import annotations

import numpy as np

from .config import ExperimentConfig
from .eikonal import cole_hopf_oracle
from .grid import ComplexField, RealVectorField, make_grid
from .hydro import HydroState, assemble_matrix, cfl_dt, strang_step
from .nonlinearity import cubic
from .observables import observables
from .reference import WaveState, strang_solve
from .spectral import (
    divergence,
    gradient_array,
    heat_array,
    schrodinger_array,
    scalar_gradient,
)

__all__ = ["run_selftest"]


def _check(name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"{tag}  {name}{suffix}")
    return bool(ok)


def run_selftest(seed: int = 0) -> bool:
    rng = np.random.default_rng(seed)
    ok = True

    grid = make_grid(1, (-0.5, 1.5), 128)
    z = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    back = np.fft.ifft(np.fft.fft(z))
    err = np.max(np.abs(back - z)) / np.max(np.abs(z))
    ok &= _check("transform round-trip", err < 1e-13, f"rel err {err:.2e}")

    (x,) = grid.node_mesh()
    mode = np.sin(2 * np.pi * (x + 0.5) / 2.0)
    dmode = gradient_array(grid, mode, 0)
    exact = (2 * np.pi / 2.0) * np.cos(2 * np.pi * (x + 0.5) / 2.0)
    err = np.max(np.abs(dmode - exact))
    ok &= _check("spectral derivative of a single mode", err < 1e-12, f"abs err {err:.2e}")

    out = schrodinger_array(grid, z, 0.3, 0.17)
    err = abs(np.linalg.norm(out) / np.linalg.norm(z) - 1.0)
    ok &= _check("free-flow l2 preservation", err < 1e-13, f"rel err {err:.2e}")

    w = rng.standard_normal(grid.shape)
    hw = heat_array(grid, w, 0.7, 0.05)
    mean_err = abs(hw.mean() - w.mean())
    contracts = np.linalg.norm(hw) <= np.linalg.norm(w) * (1 + 1e-14)
    ok &= _check("heat flow mean preservation and contraction",
                 mean_err < 1e-13 and contracts, f"mean err {mean_err:.2e}")

    state = HydroState(
        a=ComplexField(grid, np.full(grid.shape, 0.8, dtype=complex)),
        v=RealVectorField.zeros(grid),
        t=0.0,
        eps=0.25,
    )
    stepped = strang_step(state, 5e-3, cubic())
    err = np.max(np.abs(stepped.a.values - state.a.values))
    ok &= _check("constant state is a fixed point", err < 1e-13, f"abs err {err:.2e}")

    c = 0.75
    wave = WaveState(ComplexField(grid, np.full(grid.shape, c, dtype=complex)), 0.0, 0.5)
    final = strang_solve(wave, 0.3, 0.01)[-1]
    exact_u = c * np.exp(-1j * c * c * 0.3 / 0.5)
    err = np.max(np.abs(final.u.values - exact_u))
    ok &= _check("plane-wave exactness of the splitting solver", err < 1e-10, f"abs err {err:.2e}")

    M = assemble_matrix(np.array([1.0, 0.0, 2.0]), 0, 0.0, cubic())
    want = np.array([[2.0, 0.0, 0.5], [0.0, 2.0, 0.0], [2.0, 0.0, 2.0]])
    ok &= _check("transport matrix entries", np.array_equal(M, want))

    grid512 = make_grid(1, (-0.5, 1.5), 512)
    st = HydroState(
        a=ComplexField(grid512, np.full(grid512.shape, 0.75, dtype=complex)),
        v=RealVectorField(grid512, np.full((1,) + grid512.shape, 0.5)),
        t=0.0,
        eps=0.1,
    )
    dt = cfl_dt(st, 0.8, dt_max=1.0)
    ok &= _check("CFL step formula", abs(dt - 0.8 * (2.0 / 512) / 1.25) < 1e-15, f"dt {dt:.6g}")

    ugrid = make_grid(1, (0.0, 1.0), 256)
    (xs,) = ugrid.node_mesh()
    phi0 = np.cos(2 * np.pi * xs)
    phiT = cole_hopf_oracle(phi0, 0.1, ugrid)
    v = scalar_gradient(ugrid, phiT)
    psi = heat_array(ugrid, np.exp(-0.5 * phi0), 1.0, 0.1)
    dphi_dt = -2.0 * divergence(ugrid, scalar_gradient(ugrid, psi)) / psi
    resid = dphi_dt + 0.5 * np.sum(v * v, axis=0) - divergence(ugrid, v)
    err = np.max(np.abs(resid))
    ok &= _check("heat-transform oracle residual", err < 1e-8, f"abs resid {err:.2e}")

    cfg = ExperimentConfig()
    ok &= _check("config round-trip", ExperimentConfig.from_text(cfg.to_text()) == cfg)

    a = ComplexField(grid, np.exp(-25.0 * (x - 0.5) ** 2).astype(complex))
    obs = observables(a, RealVectorField.zeros(grid), 0.0)
    ok &= _check(
        "observables of real data",
        np.all(obs.rho >= 0) and np.max(np.abs(obs.j)) == 0.0 and np.all(obs.e >= 0),
    )

    print("selftest:", "all checks passed" if ok else "FAILURES above")
    return bool(ok)
