"""Experiment orchestration: reference building with caching, (epsilon, J)
error sweeps, delimited tables and log-log plot data.

Error tables are CSV with columns epsilon,J,t,err_rho,err_j,walltime_s plus a
trailing status column; per-cell failures are recorded in-row without
aborting the sweep.  Apart from the wall-time column the tables are a
deterministic function of the configuration.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cache import SnapshotCache, reference_key
from .config import ConfigError, ExperimentConfig
from .convergence import loglog_slope
from .grid import make_grid
from .hydro import run
from .initial_data import build_initial
from .nonlinearity import (
    Nonlinearity,
    PotentialSpec,
    cubic,
    cubic_quintic,
    linear_potential,
    saturated,
)
from .observables import observables, rel_l1_error, wave_observables
from .reference import strang_solve
from .snapshots import load_snapshot

__all__ = [
    "ErrorRecord",
    "nonlinearity_from_config",
    "potential_from_config",
    "auto_reference_points",
    "build_reference",
    "run_sweep",
    "write_tables",
    "read_table",
    "emit_plotdata",
]

CSV_HEADER = "epsilon,J,t,err_rho,err_j,walltime_s,status"


@dataclass
class ErrorRecord:
    epsilon: float
    J: int
    t: float
    err_rho: float
    err_j: float
    walltime_s: float
    status: str = "ok"


def potential_from_config(cfg: ExperimentConfig) -> PotentialSpec:
    tag = cfg.potential
    if tag == "zero":
        return PotentialSpec.zero()
    if tag == "single-cosine":
        amp = cfg.potential_params[0] if cfg.potential_params else 1.0
        return PotentialSpec.single_cosine(amp)
    if tag == "table":
        if not cfg.initial_params:
            raise ConfigError("table potential needs a snapshot path in potential_params")
        raise ConfigError("table potentials are configured programmatically")
    raise ConfigError(f"unknown potential tag {tag!r}")


def nonlinearity_from_config(cfg: ExperimentConfig) -> Nonlinearity:
    tag = cfg.nonlinearity
    try:
        if tag == "cubic":
            return cubic()
        if tag == "cubic-quintic":
            return cubic_quintic(*cfg.nl_params)
        if tag == "saturated":
            return saturated(*cfg.nl_params)
        if tag == "linear-potential":
            return linear_potential(potential_from_config(cfg))
    except (TypeError, ValueError) as err:
        raise ConfigError(f"bad nonlinearity parameters: {err}") from err
    raise ConfigError(f"unknown nonlinearity tag {tag!r}")


def _next_pow2(n: int) -> int:
    p = 4
    while p < n:
        p *= 2
    return p


def auto_reference_points(eps: float, length: float, max_run_points: int) -> int:
    """Reference resolution rule: dx <= eps/2 and strictly finer than (a
    multiple of) every swept grid."""
    need = max(2 * max_run_points, int(np.ceil(length / (0.5 * eps))))
    return _next_pow2(need)


def _reference_equation(cfg: ExperimentConfig) -> str:
    return "splitting-linear" if cfg.equation == "linear" else "splitting-nls"


def _reference_nl(cfg: ExperimentConfig) -> Nonlinearity:
    if cfg.equation == "linear":
        return linear_potential(potential_from_config(cfg))
    return nonlinearity_from_config(cfg)


def build_reference(cfg: ExperimentConfig, eps: float, *, times=None, cache: SnapshotCache = None):
    """Splitting-solver reference at the configured times, cached on disk.

    Returns (points, [(t, ComplexField u), ...]).  The mesh follows the
    reference rule dt = eps / divisor and dx <= eps/2 unless an explicit
    reference resolution is configured.
    """
    times = tuple(float(t) for t in (times if times is not None else cfg.output_times))
    if not times:
        raise ConfigError("reference runs need at least one output time")
    J_ref = cfg.reference_points
    if J_ref is None:
        J_ref = auto_reference_points(eps, max(cfg.domain_lengths()), max(cfg.sweep_points))
    dt = eps / cfg.reference_dt_divisor
    equation = _reference_equation(cfg)
    key = reference_key(
        equation=equation,
        nl_tag=cfg.nonlinearity if cfg.equation != "linear" else "linear-potential",
        nl_params=cfg.nl_params,
        potential=cfg.potential,
        potential_params=cfg.potential_params,
        dim=cfg.dim,
        bounds=cfg.bounds,
        points=J_ref,
        eps=eps,
        dt=dt,
        times=times,
        initial=cfg.initial,
        initial_params=cfg.initial_params,
    )
    if cache is not None:
        hit = cache.lookup(key)
        if hit is not None:
            return J_ref, hit
    grid = make_grid(cfg.dim, cfg.axis_bounds(), J_ref)
    state = build_initial(cfg.initial, grid, eps=eps, equation=equation, params=cfg.initial_params)
    snaps = strang_solve(state, times[-1], dt, _reference_nl(cfg), output_times=times)
    out = [(s.t, s.u) for s in snaps]
    if cache is not None:
        cache.store(key, eps, out, extra_meta=[("equation", equation), ("dt", repr(dt))])
    return J_ref, out


def _sweep_cell(cfg: ExperimentConfig, eps: float, J: int, ref_obs):
    """Solve one (epsilon, J) cell and measure errors at every output time."""
    grid = make_grid(cfg.dim, cfg.axis_bounds(), J)
    times = cfg.output_times
    records = []
    try:
        if cfg.equation in ("ap-nls", "linear"):
            nl = nonlinearity_from_config(cfg) if cfg.equation == "ap-nls" else _reference_nl(cfg)
            state = build_initial(cfg.initial, grid, eps=eps, equation="ap-nls", params=cfg.initial_params)
            result = run(
                state,
                times[-1],
                nl,
                cfl=cfg.cfl,
                dt_max=cfg.dt_max,
                output_times=times,
                nu=cfg.nu,
            )
            walltime = result.walltime_s
            status = result.status
            solved = {
                s.t: observables(s.a, s.v, eps) for s in result.snapshots
            }
            obs_pairs = {t: (o.rho, o.j) for t, o in solved.items()}
        elif cfg.equation == "splitting-nls":
            import time as _time

            state = build_initial(
                cfg.initial, grid, eps=eps, equation="splitting-nls", params=cfg.initial_params
            )
            dt = eps / cfg.reference_dt_divisor
            tic = _time.perf_counter()
            snaps = strang_solve(state, times[-1], dt, nonlinearity_from_config(cfg), output_times=times)
            walltime = _time.perf_counter() - tic
            status = "ok"
            obs_pairs = {}
            for s in snaps:
                rho, j = wave_observables(s.u, eps)
                obs_pairs[s.t] = (rho, j)
        else:
            raise ConfigError(f"sweeps are not defined for equation {cfg.equation!r}")
    except ConfigError:
        raise
    except Exception as err:  # per-cell failure lands in the status column
        for t in times:
            records.append(ErrorRecord(eps, J, t, float("nan"), float("nan"), 0.0, f"error:{err}"))
        return records

    for t in times:
        if t not in obs_pairs:
            records.append(ErrorRecord(eps, J, t, float("nan"), float("nan"), walltime, status))
            continue
        rho, j = obs_pairs[t]
        ref_grid, ref_rho, ref_j = ref_obs[t]
        err_rho = rel_l1_error(rho, grid, ref_rho, ref_grid)
        err_j = rel_l1_error(j, grid, ref_j, ref_grid)
        records.append(ErrorRecord(eps, J, t, err_rho, err_j, walltime, status))
    return records


def run_sweep(cfg: ExperimentConfig, *, cache: SnapshotCache = None, threads: int = None) -> list:
    """Errors of the configured solver against splitting references over the
    (epsilon, J) product grid.  Rows come back in configuration order."""
    if cfg.equation == "eikonal":
        raise ConfigError("eikonal runs are verified against the exact oracle; use eikonal-verify")
    if not cfg.output_times:
        raise ConfigError("sweeps need at least one output time")
    if cache is None:
        cache = SnapshotCache(cfg.cachedir)
    threads = threads if threads is not None else cfg.threads

    records = []
    for eps in cfg.sweep_epsilons:
        _, ref_snaps = build_reference(cfg, eps, cache=cache)
        ref_obs = {}
        for t, u in ref_snaps:
            rho, j = wave_observables(u, eps)
            ref_obs[t] = (u.grid, rho, j)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [
                    pool.submit(_sweep_cell, cfg, eps, J, ref_obs) for J in cfg.sweep_points
                ]
                for fut in futures:  # submission order keeps tables deterministic
                    records.extend(fut.result())
        else:
            for J in cfg.sweep_points:
                records.extend(_sweep_cell(cfg, eps, J, ref_obs))
    return records


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_tables(records, outdir, *, prefix: str = "sweep", metadata=()) -> list:
    """One CSV per output time plus a metadata sidecar; returns written paths."""
    os.makedirs(outdir, exist_ok=True)
    times = sorted({r.t for r in records})
    paths = []
    for t in times:
        path = os.path.join(outdir, f"{prefix}-t{t:g}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for r in records:
                if r.t != t:
                    continue
                fh.write(
                    f"{_fmt(r.epsilon)},{r.J},{_fmt(r.t)},{_fmt(r.err_rho)},"
                    f"{_fmt(r.err_j)},{r.walltime_s:.3f},{r.status}\n"
                )
        paths.append(path)
    meta_path = os.path.join(outdir, f"{prefix}-meta.txt")
    with open(meta_path, "w", encoding="utf-8") as fh:
        fh.write("l1_vector_norm componentwise-sum\n")
        for k, v in metadata:
            fh.write(f"{k} {v}\n")
    paths.append(meta_path)
    return paths


def read_table(path) -> list:
    """Parse a sweep CSV back into records."""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ConfigError(f"{path}: unexpected table header {header!r}")
        for line in fh:
            tok = line.strip().split(",")
            if len(tok) != 7:
                continue
            records.append(
                ErrorRecord(
                    float(tok[0]), int(tok[1]), float(tok[2]), float(tok[3]),
                    float(tok[4]), float(tok[5]), tok[6],
                )
            )
    return records


def emit_plotdata(records, mode: str, outdir, domain_length: float, *, render=True) -> dict:
    """Grouped log-log series files with fitted slopes, one file per series.

    mode "vs-J": one series per (t, epsilon), abscissa J, slope fitted
    against dx = L / J.  mode "vs-eps": one series per (t, J), abscissa
    epsilon.  Returns {(mode, t, group, kind): (path, slope)}.  With render
    on, a figure per (t, kind) is written next to the series files.
    """
    if mode not in ("vs-J", "vs-eps"):
        raise ConfigError(f"unknown plot-data mode {mode!r}")
    if not records:
        raise ConfigError("empty table")
    os.makedirs(outdir, exist_ok=True)
    good = [r for r in records if r.status == "ok" and np.isfinite(r.err_rho)]
    out = {}
    times = sorted({r.t for r in good})
    for t in times:
        rows = [r for r in good if r.t == t]
        figure_series = {"rho": {}, "j": {}}
        if mode == "vs-J":
            groups = sorted({r.epsilon for r in rows}, reverse=True)
        else:
            groups = sorted({r.J for r in rows})
        for g in groups:
            if mode == "vs-J":
                sel = sorted((r for r in rows if r.epsilon == g), key=lambda r: r.J)
                xs = np.array([r.J for r in sel], dtype=float)
                fit_xs = domain_length / xs
                label = f"eps{g:g}"
            else:
                sel = sorted((r for r in rows if r.J == g), key=lambda r: r.epsilon)
                xs = np.array([r.epsilon for r in sel], dtype=float)
                fit_xs = xs
                label = f"J{g}"
            for kind in ("rho", "j"):
                ys = np.array([getattr(r, f"err_{kind}") for r in sel])
                slope = loglog_slope(fit_xs, ys)
                path = os.path.join(outdir, f"plotdata-{mode}-t{t:g}-{label}-{kind}.dat")
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(f"# series mode={mode} t={t:g} group={label} kind={kind}\n")
                    fh.write(f"# columns: {'J' if mode == 'vs-J' else 'epsilon'} err_{kind}\n")
                    if np.isfinite(slope):
                        axis = "dx" if mode == "vs-J" else "eps"
                        fh.write(f"# slope_vs_{axis} {slope:.6g}\n")
                    for x, y in zip(xs, ys):
                        fh.write(f"{x:.17g} {y:.17g}\n")
                out[(mode, t, label, kind)] = (path, slope)
                figure_series[kind][label] = (xs, ys)
        if render:
            from .plotting import save_error_curves

            for kind in ("rho", "j"):
                if not figure_series[kind]:
                    continue
                fig_path = os.path.join(outdir, f"plotdata-{mode}-t{t:g}-{kind}.png")
                save_error_curves(
                    figure_series[kind],
                    xlabel="J" if mode == "vs-J" else "epsilon",
                    ylabel=f"relative l1 error ({kind})",
                    title=f"{mode} at t={t:g}",
                    path=fig_path,
                )
    return out
