"""Command-line front end: config parsing, subcommand dispatch, CSV output.

Configuration is flat ``key = value`` text with ``#`` comments; flags
override file values.  Every key has a default; unknown keys are errors.

Model keys (defaults)
    model (chs) | n_spins (10) | g1 (2) | g2 (0.5) | gamma (0.5)
    delta (2) | omega_a (1) | omega_c (1) | nph_factor (4)
    n_ph (nph_factor * n_spins)

Run keys
    t_max (20 pi / omega_a) | samples (4000) | threads (1) | out (-)
    ground_hamiltonian (full | charging; default full)

Subcommand keys
    sweep:        axis1 (g1), axis1_min (-3), axis1_max (3), axis1_steps (41),
                  axis2 (g2), axis2_min (0), axis2_max (1), axis2_steps (41),
                  metrics (extra columns from order,S,EN; default none)
    scaling:      n_list (6,8,..,16 for chs; 10,20,..,60 for hs)
    ground:       g1_min (-3), g1_max (3), g1_steps (41),
                  g2_min (0), g2_max (1), g2_steps (41)
    wigner:       wigner_points (101), wigner_extent (2 sqrt(n_ph))
    convergence:  factors (3,4,6)

CSV columns per subcommand
    evolve:       t,E,P
    sweep:        axis1,axis2,Emax,Pmax,tE,tP[,order,S,EN]
    scaling:      N,Emax,tE,Pmax,tP  plus trailing '# alpha_P=..,beta_P=..,alpha_E=..'
    ground:       g1,g2,energy,order,S,EN
    wigner:       x,p,W
    convergence:  factor,Emax,rel_dev

Exit codes: 0 success (partial sweep failures emit ``nan`` rows and still
exit 0), 2 config error, 3 numerical invariant violation.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field, fields
from typing import Callable, Sequence

import numpy as np

from .basis import ModelParams
from .dynamics import energy_trace
from .groundinfo import ground_hamiltonian, ground_state, reduce, wigner
from .sweepfit import (
    AXIS_FIELDS,
    cutoff_convergence,
    scaling_study,
    sweep2d,
)

__all__ = ["ConfigError", "NumericalError", "RunConfig", "parse_config", "run", "main"]

SUBCOMMANDS = ("evolve", "sweep", "scaling", "ground", "wigner", "convergence")
EXTRA_SWEEP_METRICS = ("order", "S", "EN")


class ConfigError(Exception):
    """Rejected configuration; exits with status 2."""


class NumericalError(Exception):
    """Failed numerical invariant; exits with status 3."""


def _parse_int(text: str) -> int:
    return int(text)


def _parse_float(text: str) -> float:
    return float(text)


def _parse_str(text: str) -> str:
    return text


def _parse_int_list(text) -> tuple[int, ...]:
    if isinstance(text, (tuple, list)):
        return tuple(int(v) for v in text)
    return tuple(int(part) for part in str(text).split(",") if part.strip())


def _parse_str_list(text) -> tuple[str, ...]:
    if isinstance(text, (tuple, list)):
        return tuple(str(v) for v in text)
    return tuple(part.strip() for part in str(text).split(",") if part.strip())


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration for one CLI invocation."""

    model: str = "chs"
    n_spins: int = 10
    g1: float = 2.0
    g2: float = 0.5
    gamma: float = 0.5
    delta: float = 2.0
    omega_a: float = 1.0
    omega_c: float = 1.0
    nph_factor: int = 4
    n_ph: int | None = None
    t_max: float | None = None
    samples: int = 4000
    threads: int = 1
    out: str = "-"
    ground_hamiltonian: str = "full"
    axis1: str = "g1"
    axis1_min: float = -3.0
    axis1_max: float = 3.0
    axis1_steps: int = 41
    axis2: str = "g2"
    axis2_min: float = 0.0
    axis2_max: float = 1.0
    axis2_steps: int = 41
    metrics: tuple[str, ...] = ()
    n_list: tuple[int, ...] | None = None
    g1_min: float = -3.0
    g1_max: float = 3.0
    g1_steps: int = 41
    g2_min: float = 0.0
    g2_max: float = 1.0
    g2_steps: int = 41
    wigner_points: int = 101
    wigner_extent: float | None = None
    factors: tuple[int, ...] = (3, 4, 6)

    def params(self) -> ModelParams:
        n_ph = self.n_ph if self.n_ph is not None else self.nph_factor * self.n_spins
        try:
            return ModelParams(
                n_spins=self.n_spins,
                g1=self.g1,
                g2=self.g2,
                gamma=self.gamma,
                delta=self.delta,
                omega_a=self.omega_a,
                omega_c=self.omega_c,
                n_ph=n_ph,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


_CASTERS: dict[str, Callable] = {
    "model": _parse_str,
    "n_spins": _parse_int,
    "g1": _parse_float,
    "g2": _parse_float,
    "gamma": _parse_float,
    "delta": _parse_float,
    "omega_a": _parse_float,
    "omega_c": _parse_float,
    "nph_factor": _parse_int,
    "n_ph": _parse_int,
    "t_max": _parse_float,
    "samples": _parse_int,
    "threads": _parse_int,
    "out": _parse_str,
    "ground_hamiltonian": _parse_str,
    "axis1": _parse_str,
    "axis1_min": _parse_float,
    "axis1_max": _parse_float,
    "axis1_steps": _parse_int,
    "axis2": _parse_str,
    "axis2_min": _parse_float,
    "axis2_max": _parse_float,
    "axis2_steps": _parse_int,
    "metrics": _parse_str_list,
    "n_list": _parse_int_list,
    "g1_min": _parse_float,
    "g1_max": _parse_float,
    "g1_steps": _parse_int,
    "g2_min": _parse_float,
    "g2_max": _parse_float,
    "g2_steps": _parse_int,
    "wigner_points": _parse_int,
    "wigner_extent": _parse_float,
    "factors": _parse_int_list,
}


def _validate(config: RunConfig) -> RunConfig:
    if config.model not in ("chs", "hs"):
        raise ConfigError(f"model must be 'chs' or 'hs', got {config.model!r}")
    if config.ground_hamiltonian not in ("full", "charging"):
        raise ConfigError(
            f"ground_hamiltonian must be 'full' or 'charging', got {config.ground_hamiltonian!r}"
        )
    if config.samples < 2:
        raise ConfigError(f"samples must be >= 2, got {config.samples}")
    if config.threads < 1:
        raise ConfigError(f"threads must be >= 1, got {config.threads}")
    if config.t_max is not None and config.t_max <= 0:
        raise ConfigError(f"t_max must be positive, got {config.t_max}")
    for key in ("axis1", "axis2"):
        if getattr(config, key) not in AXIS_FIELDS:
            raise ConfigError(f"{key} must be one of {AXIS_FIELDS}, got {getattr(config, key)!r}")
    for key in ("axis1_steps", "axis2_steps", "g1_steps", "g2_steps"):
        if getattr(config, key) < 1:
            raise ConfigError(f"{key} must be >= 1, got {getattr(config, key)}")
    if config.axis1 == config.axis2:
        raise ConfigError("axis1 and axis2 must differ")
    for metric in config.metrics:
        if metric not in EXTRA_SWEEP_METRICS:
            raise ConfigError(
                f"metrics may only add {EXTRA_SWEEP_METRICS}, got {metric!r}"
            )
    if config.wigner_points < 2:
        raise ConfigError(f"wigner_points must be >= 2, got {config.wigner_points}")
    if config.wigner_extent is not None and config.wigner_extent <= 0:
        raise ConfigError(f"wigner_extent must be positive, got {config.wigner_extent}")
    if len(config.factors) < 2:
        raise ConfigError(f"factors needs at least two entries, got {config.factors}")
    if config.n_list is not None and len(config.n_list) < 3:
        raise ConfigError(f"n_list needs at least three entries, got {config.n_list}")
    config.params()  # surface ModelParams invariant violations now
    return config


def parse_config(text: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from file text plus flag overrides (flags win)."""
    raw: dict[str, object] = {}
    if text is not None:
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in stripped.split("=", 1))
            if key not in _CASTERS:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            try:
                raw[key] = _CASTERS[key](value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _CASTERS:
            raise ConfigError(f"unknown key {key!r}")
        try:
            raw[key] = _CASTERS[key](value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from exc
    try:
        config = RunConfig(**raw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return _validate(config)


@dataclass
class CsvTable:
    header: list[str]
    rows: list[tuple] = field(default_factory=list)
    trailing_comments: list[str] = field(default_factory=list)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    number = float(value)
    if math.isnan(number):
        return "nan"
    return format(number, ".17g")


def render_csv(table: CsvTable) -> str:
    lines = [",".join(table.header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in table.rows)
    lines.extend(table.trailing_comments)
    return "\n".join(lines) + "\n"


def _check_finite(table: CsvTable, allow_nan: bool) -> None:
    for row in table.rows:
        for value in row:
            number = float(value)
            if math.isnan(number):
                if not allow_nan:
                    raise NumericalError("non-finite value in output")
            elif math.isinf(number):
                raise NumericalError("non-finite value in output")


def _run_evolve(config: RunConfig) -> CsvTable:
    trace = energy_trace(
        config.params(), model=config.model, horizon=config.t_max, samples=config.samples
    )
    table = CsvTable(header=["t", "E", "P"])
    table.rows = list(zip(trace.times, trace.energy, trace.power))
    _check_finite(table, allow_nan=False)
    return table


def _run_sweep(config: RunConfig) -> CsvTable:
    if config.metrics and config.model != "chs":
        raise ConfigError("metrics order,S,EN need the chs model")
    metric_names = ("Emax", "Pmax", "tE", "tP") + tuple(
        m for m in EXTRA_SWEEP_METRICS if m in config.metrics
    )
    grid = sweep2d(
        config.params(),
        (config.axis1, np.linspace(config.axis1_min, config.axis1_max, config.axis1_steps)),
        (config.axis2, np.linspace(config.axis2_min, config.axis2_max, config.axis2_steps)),
        metrics=metric_names,
        model=config.model,
        horizon=config.t_max,
        samples=config.samples,
        workers=config.threads,
        ground_which=config.ground_hamiltonian,
    )
    table = CsvTable(header=["axis1", "axis2", *metric_names])
    for i, v1 in enumerate(grid.axis1_values):
        for j, v2 in enumerate(grid.axis2_values):
            table.rows.append((v1, v2, *(grid.metrics[m][i, j] for m in metric_names)))
    _check_finite(table, allow_nan=True)
    return table


def _run_scaling(config: RunConfig) -> CsvTable:
    n_list = config.n_list
    if n_list is None:
        n_list = (6, 8, 10, 12, 14, 16) if config.model == "chs" else tuple(range(10, 61, 10))
    study = scaling_study(
        config.params(),
        n_list,
        model=config.model,
        horizon=config.t_max,
        samples=config.samples,
        nph_factor=config.nph_factor,
    )
    table = CsvTable(header=["N", "Emax", "tE", "Pmax", "tP"])
    for k in range(study.ns.size):
        table.rows.append(
            (int(study.ns[k]), study.e_max[k], study.t_e[k], study.p_max[k], study.t_p[k])
        )
    table.trailing_comments.append(
        "# alpha_P={},beta_P={},alpha_E={}".format(
            _fmt(study.fit_p.alpha), _fmt(study.fit_p.beta), _fmt(study.fit_e.alpha)
        )
    )
    _check_finite(table, allow_nan=False)
    return table


def _run_ground(config: RunConfig) -> CsvTable:
    if config.model != "chs":
        raise ConfigError("ground diagnostics need the chs model")
    grid = sweep2d(
        config.params(),
        ("g1", np.linspace(config.g1_min, config.g1_max, config.g1_steps)),
        ("g2", np.linspace(config.g2_min, config.g2_max, config.g2_steps)),
        metrics=("energy", "order", "S", "EN"),
        model="chs",
        workers=config.threads,
        ground_which=config.ground_hamiltonian,
    )
    table = CsvTable(header=["g1", "g2", "energy", "order", "S", "EN"])
    for i, v1 in enumerate(grid.axis1_values):
        for j, v2 in enumerate(grid.axis2_values):
            table.rows.append(
                (v1, v2, *(grid.metrics[m][i, j] for m in ("energy", "order", "S", "EN")))
            )
    _check_finite(table, allow_nan=True)
    return table


def _run_wigner(config: RunConfig) -> CsvTable:
    if config.model != "chs":
        raise ConfigError("the Wigner function needs the chs model")
    params = config.params()
    psi = ground_state(ground_hamiltonian(params, config.ground_hamiltonian))
    rho_c = reduce(psi, "cavity", params)
    extent = config.wigner_extent
    if extent is None:
        extent = 2.0 * math.sqrt(params.n_ph)
    axis = np.linspace(-extent, extent, config.wigner_points)
    grid = wigner(rho_c, axis, axis)
    table = CsvTable(header=["x", "p", "W"])
    for i, x in enumerate(grid.xs):
        for j, p in enumerate(grid.ps):
            table.rows.append((x, p, grid.values[i, j]))
    _check_finite(table, allow_nan=False)
    return table


def _run_convergence(config: RunConfig) -> CsvTable:
    if config.model != "chs":
        raise ConfigError("cutoff convergence needs the chs model")
    report = cutoff_convergence(
        config.params(),
        model="chs",
        factors=config.factors,
        horizon=config.t_max,
        samples=config.samples,
    )
    table = CsvTable(header=["factor", "Emax", "rel_dev"])
    for k in range(report.factors.size):
        table.rows.append((int(report.factors[k]), report.e_max[k], report.rel_dev[k]))
    _check_finite(table, allow_nan=False)
    return table


_RUNNERS = {
    "evolve": _run_evolve,
    "sweep": _run_sweep,
    "scaling": _run_scaling,
    "ground": _run_ground,
    "wigner": _run_wigner,
    "convergence": _run_convergence,
}


def run(subcommand: str, config: RunConfig) -> CsvTable:
    """Execute one subcommand and return its CSV table."""
    if subcommand not in _RUNNERS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    return _RUNNERS[subcommand](config)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chsbattery",
        description="Exact-diagonalization battery simulator: charging traces, "
        "sweeps, scaling fits, and ground-state diagnostics, emitted as CSV.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to key = value config file")
        p.add_argument("--model", choices=("chs", "hs"))
        p.add_argument("--n", dest="n_spins", type=int)
        p.add_argument("--g1", type=float)
        p.add_argument("--g2", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--omega-a", dest="omega_a", type=float)
        p.add_argument("--omega-c", dest="omega_c", type=float)
        p.add_argument("--nph-factor", dest="nph_factor", type=int)
        p.add_argument("--n-ph", dest="n_ph", type=int)
        p.add_argument("--t-max", dest="t_max", type=float)
        p.add_argument("--samples", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--out")
        p.add_argument("--ground-hamiltonian", dest="ground_hamiltonian",
                       choices=("full", "charging"))
        if name == "sweep":
            p.add_argument("--axis1")
            p.add_argument("--axis1-min", dest="axis1_min", type=float)
            p.add_argument("--axis1-max", dest="axis1_max", type=float)
            p.add_argument("--axis1-steps", dest="axis1_steps", type=int)
            p.add_argument("--axis2")
            p.add_argument("--axis2-min", dest="axis2_min", type=float)
            p.add_argument("--axis2-max", dest="axis2_max", type=float)
            p.add_argument("--axis2-steps", dest="axis2_steps", type=int)
            p.add_argument("--metrics", help="extra columns from order,S,EN")
        elif name == "scaling":
            p.add_argument("--n-list", dest="n_list", help="comma-separated chain lengths")
        elif name == "ground":
            p.add_argument("--g1-min", dest="g1_min", type=float)
            p.add_argument("--g1-max", dest="g1_max", type=float)
            p.add_argument("--g1-steps", dest="g1_steps", type=int)
            p.add_argument("--g2-min", dest="g2_min", type=float)
            p.add_argument("--g2-max", dest="g2_max", type=float)
            p.add_argument("--g2-steps", dest="g2_steps", type=int)
        elif name == "wigner":
            p.add_argument("--wigner-points", dest="wigner_points", type=int)
            p.add_argument("--wigner-extent", dest="wigner_extent", type=float)
        elif name == "convergence":
            p.add_argument("--factors", help="comma-separated cutoff factors")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    config_keys = {f.name for f in fields(RunConfig)}
    overrides = {k: v for k, v in vars(args).items() if k in config_keys}
    try:
        text = None
        if args.config is not None:
            try:
                with open(args.config, "r", encoding="ascii") as fh:
                    text = fh.read()
            except (OSError, UnicodeDecodeError) as exc:
                raise ConfigError(f"cannot read config file: {exc}") from exc
        config = parse_config(text, overrides)
        table = run(args.subcommand, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, ValueError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    payload = render_csv(table)
    if config.out == "-":
        sys.stdout.write(payload)
    else:
        with open(config.out, "w", encoding="ascii", newline="") as fh:
            fh.write(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
