"""Flat key-value experiment configuration with section headers.

The on-disk format is INI-style plain text; lists are comma-separated.
Parsing, serializing and re-parsing a configuration yields an identical
object, which the harness relies on for reproducible sweeps.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, fields

__all__ = ["ConfigError", "ExperimentConfig", "load_config"]

EQUATIONS = ("ap-nls", "splitting-nls", "eikonal", "linear")


class ConfigError(ValueError):
    pass


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _floats(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.split(","))


def _ints(text: str) -> tuple:
    return tuple(int(tok) for tok in text.split(",")) if text.strip() else ()


def _join(seq) -> str:
    return ",".join(repr(x) if isinstance(x, float) else str(x) for x in seq)


@dataclass
class ExperimentConfig:
    # experiment
    equation: str = "ap-nls"
    nonlinearity: str = "cubic"
    nl_params: tuple = ()
    initial: str = "gauss-logcosh-1d"
    initial_params: tuple = ()
    potential: str = "zero"
    potential_params: tuple = ()
    # grid
    dim: int = 1
    bounds: tuple = (-0.5, 1.5)  # flattened lo,hi per axis
    points: int = 512
    # time
    epsilon: float = 0.05
    t_final: float = 0.05
    output_times: tuple = (0.05,)
    cfl: float = 0.8
    dt_max: float = 0.01
    nu: float = None  # None: use eps^2
    # sweep
    sweep_epsilons: tuple = (1e-1, 1e-2, 1e-3)
    sweep_points: tuple = (32, 64, 128, 256, 512, 1024)
    # reference
    reference_points: int = None  # None: per-epsilon automatic rule
    reference_dt_divisor: float = 100.0
    # output
    outdir: str = "out"
    cachedir: str = "cache"
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.equation not in EQUATIONS:
            raise ConfigError(f"unknown equation tag {self.equation!r}")
        if self.dim not in (1, 2):
            raise ConfigError(f"dim must be 1 or 2, got {self.dim}")
        if len(self.bounds) != 2 * self.dim:
            raise ConfigError("bounds needs lo,hi per axis")
        for d in range(self.dim):
            if not self.bounds[2 * d] < self.bounds[2 * d + 1]:
                raise ConfigError(f"axis {d} bounds are not increasing")
        if not _is_pow2(self.points) or self.points < 4:
            raise ConfigError(f"points must be a power of two >= 4, got {self.points}")
        if not self.t_final > 0:
            raise ConfigError("t_final must be positive")
        times = self.output_times
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ConfigError("output times must be strictly ascending")
        if times and (times[0] <= 0 or times[-1] > self.t_final + 1e-12):
            raise ConfigError("output times must lie in (0, t_final]")
        if not 0 < self.cfl:
            raise ConfigError("cfl must be positive")
        Js = self.sweep_points
        if any(j2 <= j1 for j1, j2 in zip(Js, Js[1:])):
            raise ConfigError("sweep point counts must be ascending")
        for j in Js:
            if not _is_pow2(j) or j < 4:
                raise ConfigError(f"sweep point count {j} is not a power of two >= 4")
        for e in self.sweep_epsilons:
            if not 0 < e <= 1:
                raise ConfigError(f"sweep epsilon {e} outside (0, 1]")
        if self.reference_points is not None:
            jr = self.reference_points
            if not _is_pow2(jr):
                raise ConfigError("reference_points must be a power of two")
            if Js and (jr <= max(Js) or any(jr % j for j in Js)):
                raise ConfigError(
                    "reference_points must exceed every sweep count and be a multiple of each"
                )
        if not self.reference_dt_divisor > 0:
            raise ConfigError("reference_dt_divisor must be positive")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")

    # -- grid helpers -----------------------------------------------------

    def axis_bounds(self) -> list:
        return [(self.bounds[2 * d], self.bounds[2 * d + 1]) for d in range(self.dim)]

    def domain_lengths(self) -> tuple:
        return tuple(hi - lo for lo, hi in self.axis_bounds())

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        cp = configparser.ConfigParser()
        cp["experiment"] = {
            "equation": self.equation,
            "nonlinearity": self.nonlinearity,
            "nl_params": _join(self.nl_params),
            "initial": self.initial,
            "initial_params": ",".join(str(p) for p in self.initial_params),
            "potential": self.potential,
            "potential_params": _join(self.potential_params),
        }
        cp["grid"] = {
            "dim": str(self.dim),
            "bounds": _join(self.bounds),
            "points": str(self.points),
        }
        cp["time"] = {
            "epsilon": repr(self.epsilon),
            "t_final": repr(self.t_final),
            "output_times": _join(self.output_times),
            "cfl": repr(self.cfl),
            "dt_max": repr(self.dt_max),
            "nu": "default" if self.nu is None else repr(self.nu),
        }
        cp["sweep"] = {
            "epsilons": _join(self.sweep_epsilons),
            "points": _join(self.sweep_points),
        }
        cp["reference"] = {
            "points": "auto" if self.reference_points is None else str(self.reference_points),
            "dt_divisor": repr(self.reference_dt_divisor),
        }
        cp["output"] = {
            "outdir": self.outdir,
            "cachedir": self.cachedir,
            "threads": str(self.threads),
            "seed": str(self.seed),
        }
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    def to_file(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        cp = configparser.ConfigParser()
        try:
            cp.read_string(text)
        except configparser.Error as err:
            raise ConfigError(f"malformed config: {err}") from err

        def get(section, key, default=None):
            if cp.has_option(section, key):
                return cp.get(section, key)
            if default is None:
                raise ConfigError(f"missing [{section}] {key}")
            return default

        defaults = cls.__new__(cls)  # field defaults without validation
        for f in fields(cls):
            setattr(defaults, f.name, f.default)
        try:
            nu_text = get("time", "nu", "default")
            ref_text = get("reference", "points", "auto")
            kwargs = dict(
                equation=get("experiment", "equation", defaults.equation),
                nonlinearity=get("experiment", "nonlinearity", defaults.nonlinearity),
                nl_params=_floats(get("experiment", "nl_params", "")),
                initial=get("experiment", "initial", defaults.initial),
                initial_params=tuple(
                    tok for tok in get("experiment", "initial_params", "").split(",") if tok
                ),
                potential=get("experiment", "potential", defaults.potential),
                potential_params=_floats(get("experiment", "potential_params", "")),
                dim=int(get("grid", "dim", str(defaults.dim))),
                bounds=_floats(get("grid", "bounds", _join(defaults.bounds))),
                points=int(get("grid", "points", str(defaults.points))),
                epsilon=float(get("time", "epsilon", repr(defaults.epsilon))),
                t_final=float(get("time", "t_final", repr(defaults.t_final))),
                output_times=_floats(get("time", "output_times", _join(defaults.output_times))),
                cfl=float(get("time", "cfl", repr(defaults.cfl))),
                dt_max=float(get("time", "dt_max", repr(defaults.dt_max))),
                nu=None if nu_text == "default" else float(nu_text),
                sweep_epsilons=_floats(get("sweep", "epsilons", _join(defaults.sweep_epsilons))),
                sweep_points=_ints(get("sweep", "points", _join(defaults.sweep_points))),
                reference_points=None if ref_text == "auto" else int(ref_text),
                reference_dt_divisor=float(
                    get("reference", "dt_divisor", repr(defaults.reference_dt_divisor))
                ),
                outdir=get("output", "outdir", defaults.outdir),
                cachedir=get("output", "cachedir", defaults.cachedir),
                threads=int(get("output", "threads", str(defaults.threads))),
                seed=int(get("output", "seed", str(defaults.seed))),
            )
        except (ValueError, ConfigError) as err:
            if isinstance(err, ConfigError):
                raise
            raise ConfigError(f"invalid config value: {err}") from err
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise ConfigError(f"cannot read config {path}: {err}") from err
        return cls.from_text(text)


def load_config(path) -> ExperimentConfig:
    return ExperimentConfig.from_file(path)
