"""Command-line entry points for single solves, reference building, error
sweeps, plot data, wavefunction reconstruction and self tests.

Exit codes: 0 on success, 1 on solver blow-up (or failed self test), 2 on
configuration errors.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .cache import SnapshotCache
from .config import ConfigError, ExperimentConfig, load_config
from .convergence import loglog_slope
from .eikonal import eikonal_run, verify_against_oracle
from .grid import make_grid
from .harness import (
    build_reference,
    emit_plotdata,
    nonlinearity_from_config,
    potential_from_config,
    read_table,
    run_sweep,
    write_tables,
)
from .hydro import BlowUpError, run
from .initial_data import build_initial
from .nonlinearity import linear_potential
from .observables import observables, reconstruct, rel_l1_error
from .reference import strang_solve
from .snapshots import save_field, save_snapshot

__all__ = ["main"]


def _load(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("--config is required for this subcommand")
    cfg = load_config(args.config)
    if args.out:
        cfg.outdir = args.out
    if args.cache:
        cfg.cachedir = args.cache
    if args.threads:
        cfg.threads = args.threads
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.validate()
    return cfg


def _write_run_meta(path, cfg: ExperimentConfig, eps, steps, walltime, status):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"equation {cfg.equation}\n")
        fh.write(f"epsilon {eps!r}\n")
        fh.write(f"points {cfg.points}\n")
        fh.write(f"cfl {cfg.cfl!r}\n")
        fh.write(f"nonlinearity {cfg.nonlinearity} {','.join(repr(p) for p in cfg.nl_params)}\n")
        fh.write(f"steps {steps}\n")
        fh.write(f"walltime_s {walltime:.3f}\n")
        fh.write(f"status {status}\n")


def _hydro_single_run(cfg: ExperimentConfig):
    grid = make_grid(cfg.dim, cfg.axis_bounds(), cfg.points)
    if cfg.equation == "linear":
        nl = linear_potential(potential_from_config(cfg))
    else:
        nl = nonlinearity_from_config(cfg)
    state = build_initial(cfg.initial, grid, eps=cfg.epsilon, equation="ap-nls", params=cfg.initial_params)
    return grid, run(
        state,
        cfg.t_final,
        nl,
        cfl=cfg.cfl,
        dt_max=cfg.dt_max,
        output_times=cfg.output_times,
        nu=cfg.nu,
    )


def cmd_run(args) -> int:
    cfg = _load(args)
    os.makedirs(cfg.outdir, exist_ok=True)
    if cfg.equation in ("ap-nls", "linear"):
        grid, result = _hydro_single_run(cfg)
        snaps = list(result.snapshots)
        if result.status == "blowup" and result.final is not None:
            snaps.append(result.final)  # last valid state, stamped with its time
        for s in snaps:
            stem = os.path.join(cfg.outdir, f"state-t{s.t:g}")
            save_field(f"{stem}-a.dat", s.a, epsilon=s.eps, time=s.t)
            save_field(f"{stem}-v.dat", s.v, epsilon=s.eps, time=s.t)
            save_snapshot(f"{stem}-phi.dat", grid, s.phi, "phase", epsilon=s.eps, time=s.t)
            obs = observables(s.a, s.v, s.eps)
            save_snapshot(f"{stem}-rho.dat", grid, obs.rho, "rho", epsilon=s.eps, time=s.t)
            _render_density(cfg, grid, obs.rho, s.t)
        _write_run_meta(
            os.path.join(cfg.outdir, "meta.txt"),
            cfg, cfg.epsilon, result.steps, result.walltime_s, result.status,
        )
        if result.status == "blowup":
            print(f"blow-up: {result.message}", file=sys.stderr)
            return 1
    elif cfg.equation == "splitting-nls":
        import time as _time

        grid = make_grid(cfg.dim, cfg.axis_bounds(), cfg.points)
        state = build_initial(
            cfg.initial, grid, eps=cfg.epsilon, equation="splitting-nls", params=cfg.initial_params
        )
        dt = cfg.epsilon / cfg.reference_dt_divisor
        tic = _time.perf_counter()
        snaps = strang_solve(
            state, cfg.t_final, dt, nonlinearity_from_config(cfg), output_times=cfg.output_times
        )
        for s in snaps:
            stem = os.path.join(cfg.outdir, f"u-t{s.t:g}")
            save_field(f"{stem}.dat", s.u, epsilon=s.eps, time=s.t)
            _render_density(cfg, grid, np.abs(s.u.values) ** 2, s.t)
        _write_run_meta(
            os.path.join(cfg.outdir, "meta.txt"),
            cfg, cfg.epsilon, len(snaps), _time.perf_counter() - tic, "ok",
        )
    elif cfg.equation == "eikonal":
        grid = make_grid(cfg.dim, cfg.axis_bounds(), cfg.points)
        state = build_initial(cfg.initial, grid, eps=cfg.epsilon, equation="ap-nls", params=cfg.initial_params)
        nu = cfg.nu if cfg.nu is not None else 1.0
        result = eikonal_run(
            state.phi, potential_from_config(cfg), nu, cfg.t_final, grid,
            cfl=cfg.cfl, dt_max=cfg.dt_max, output_times=cfg.output_times,
        )
        for t, phi in zip(result.times, result.phis):
            stem = os.path.join(cfg.outdir, f"eikonal-t{t:g}")
            save_snapshot(f"{stem}-phi.dat", grid, phi, "phase", epsilon=0.0, time=t)
        if result.status == "blowup":
            print("blow-up in eikonal march", file=sys.stderr)
            return 1
    else:
        raise ConfigError(f"run does not support equation {cfg.equation!r}")
    print(f"wrote outputs to {cfg.outdir}")
    return 0


def _render_density(cfg, grid, rho, t):
    from .plotting import save_field_2d, save_profiles

    path = os.path.join(cfg.outdir, f"rho-t{t:g}.png")
    if grid.dim == 1:
        save_profiles(
            path, grid.axis_nodes(0), {"rho": rho}, xlabel="x", ylabel="rho",
            title=f"particle density at t={t:g}",
        )
    else:
        save_field_2d(path, grid, rho, title=f"particle density at t={t:g}")


def cmd_reference(args) -> int:
    cfg = _load(args)
    cache = SnapshotCache(cfg.cachedir)
    epsilons = cfg.sweep_epsilons or (cfg.epsilon,)
    for eps in epsilons:
        J_ref, snaps = build_reference(cfg, eps, cache=cache)
        print(f"eps={eps:g}: reference at J={J_ref} with {len(snaps)} snapshot(s) cached")
    return 0


def cmd_sweep(args) -> int:
    cfg = _load(args)
    cache = SnapshotCache(cfg.cachedir)
    records = run_sweep(cfg, cache=cache)
    meta = [
        ("equation", cfg.equation),
        ("epsilons", ",".join(repr(e) for e in cfg.sweep_epsilons)),
        ("points", ",".join(str(j) for j in cfg.sweep_points)),
        ("reference_points", cfg.reference_points or "auto"),
        ("reference_dt_divisor", repr(cfg.reference_dt_divisor)),
    ]
    paths = write_tables(records, cfg.outdir, metadata=meta)
    for p in paths:
        print(p)
    return 0


def cmd_plotdata(args) -> int:
    cfg = _load(args)
    tables = args.table
    if not tables:
        tables = sorted(
            os.path.join(cfg.outdir, name)
            for name in os.listdir(cfg.outdir)
            if name.startswith("sweep-t") and name.endswith(".csv")
        )
    if not tables:
        raise ConfigError(f"no sweep tables found in {cfg.outdir}")
    modes = ("vs-J", "vs-eps") if args.mode == "both" else (args.mode,)
    length = max(cfg.domain_lengths())
    for table in tables:
        records = read_table(table)
        for mode in modes:
            series = emit_plotdata(records, mode, cfg.outdir, length)
            for (m, t, label, kind), (path, slope) in series.items():
                tag = f"slope={slope:.3g}" if np.isfinite(slope) else "slope=n/a"
                print(f"{path} [{tag}]")
    return 0


def cmd_reconstruct(args) -> int:
    cfg = _load(args)
    os.makedirs(cfg.outdir, exist_ok=True)
    grid, result = _hydro_single_run(cfg)
    if result.status == "blowup":
        print(f"blow-up: {result.message}", file=sys.stderr)
        return 1
    cache = SnapshotCache(cfg.cachedir)
    ref = dict()
    if cfg.equation == "ap-nls":
        _, ref_snaps = build_reference(cfg, cfg.epsilon, cache=cache)
        ref = {t: u for t, u in ref_snaps}
    for s in result.snapshots:
        u = reconstruct(s.a, s.phi, s.eps)
        stem = os.path.join(cfg.outdir, f"urec-t{s.t:g}")
        save_field(f"{stem}.dat", u, epsilon=s.eps, time=s.t)
        save_snapshot(f"{stem}-phi.dat", grid, s.phi, "phase", epsilon=s.eps, time=s.t)
        if s.t in ref:
            uref = ref[s.t]
            err = rel_l1_error(u.values.real, grid, uref.values.real, uref.grid)
            print(f"t={s.t:g}: rel l1 error of Re(u) vs reference = {err:.4g}")
            if grid.dim == 1:
                from .observables import subsample
                from .plotting import save_profiles

                save_profiles(
                    os.path.join(cfg.outdir, f"urec-t{s.t:g}.png"),
                    grid.axis_nodes(0),
                    {
                        "Re u (reconstructed)": u.values.real,
                        "Re u (reference)": subsample(uref.values.real, uref.grid, grid),
                    },
                    xlabel="x", ylabel="Re u",
                    title=f"reconstruction at t={s.t:g}, eps={s.eps:g}, J={cfg.points}",
                )
    print(f"wrote outputs to {cfg.outdir}")
    return 0


def cmd_eikonal_verify(args) -> int:
    cfg = _load(args)
    os.makedirs(cfg.outdir, exist_ok=True)
    points = cfg.sweep_points or (64, 128, 256)
    if cfg.dim != 1:
        raise ConfigError("eikonal-verify runs on a 1D grid")
    rows = verify_against_oracle(
        cfg.axis_bounds()[0], points, cfg.t_final, cfl=cfg.cfl, dt_max=cfg.dt_max
    )
    errs = [e for _, e in rows]
    order = loglog_slope([1.0 / j for j, _ in rows], errs)
    path = os.path.join(cfg.outdir, "eikonal-verify.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("J,rel_linf_error\n")
        for j, e in rows:
            fh.write(f"{j},{e:.17g}\n")
        fh.write(f"# measured_order {order:.6g}\n")
    from .plotting import save_error_curves

    save_error_curves(
        {"phase error": ([j for j, _ in rows], errs)},
        xlabel="J", ylabel="relative linf error",
        title=f"viscous phase vs heat-transform oracle (order {order:.2f})",
        path=os.path.join(cfg.outdir, "eikonal-verify.png"),
    )
    for j, e in rows:
        print(f"J={j:5d}  err={e:.6g}")
    print(f"measured order: {order:.3f}")
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    seed = args.seed if args.seed is not None else 0
    return 0 if run_selftest(seed) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apnls",
        description="Solver suite for the semiclassical nonlinear Schrodinger equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="experiment configuration file")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--cache", help="reference cache directory (overrides config)")
        p.add_argument("--threads", type=int, help="worker threads for sweeps")
        p.add_argument("--seed", type=int, help="seed for randomized self tests")
        p.set_defaults(handler=handler)
        return p

    add("run", cmd_run, "single solve, snapshots and density figures")
    add("reference", cmd_reference, "build and cache splitting references")
    add("sweep", cmd_sweep, "error tables over the (epsilon, J) grid")
    p = add("plotdata", cmd_plotdata, "log-log series files and figures from sweep tables")
    p.add_argument("--table", action="append", help="sweep CSV (repeatable; default: outdir)")
    p.add_argument("--mode", choices=["vs-J", "vs-eps", "both"], default="both")
    add("reconstruct", cmd_reconstruct, "phase accumulation and wavefunction output")
    add("eikonal-verify", cmd_eikonal_verify, "convergence table against the exact phase oracle")
    p = add("selftest", cmd_selftest, "run the built-in invariant suite")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except BlowUpError as err:
        print(f"solver blow-up: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
