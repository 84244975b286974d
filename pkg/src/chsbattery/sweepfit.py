"""Parameter sweeps, power-law scaling fits, and cutoff-convergence checks.

Grid points are independent jobs merged by grid index, never by completion
order, and BLAS is pinned to one thread for the duration of a sweep, so a
sweep's output is bit-identical for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from threadpoolctl import threadpool_limits

from .basis import ModelParams
from .dynamics import energy_trace
from .groundinfo import (
    ground_hamiltonian,
    ground_state,
    log_negativity,
    order_parameter,
    reduce,
    von_neumann_entropy,
)

__all__ = [
    "AXIS_FIELDS",
    "DYNAMIC_METRICS",
    "GROUND_METRICS",
    "SweepGrid",
    "sweep2d",
    "ScalingFit",
    "fit_power_law",
    "ScalingStudy",
    "scaling_study",
    "CutoffReport",
    "cutoff_convergence",
]

AXIS_FIELDS = ("g1", "g2", "gamma", "delta", "omega_a", "omega_c")
DYNAMIC_METRICS = ("Emax", "Pmax", "tE", "tP")
GROUND_METRICS = ("energy", "order", "S", "EN")

# a trace maximum this close to the horizon is treated as horizon-clipped
CONVERGED_HORIZON_FRACTION = 0.99


@dataclass(frozen=True)
class SweepGrid:
    """Rectangular sweep with per-point metrics; axis 2 varies fastest."""

    axis1_name: str
    axis1_values: np.ndarray
    axis2_name: str
    axis2_values: np.ndarray
    metrics: dict[str, np.ndarray]
    failures: tuple[tuple[int, int, str], ...] = ()


def _validate_axis(name: str) -> None:
    if name not in AXIS_FIELDS:
        raise ValueError(f"invalid axis name {name!r}; choose from {AXIS_FIELDS}")


def _evaluate_point(
    params: ModelParams,
    model: str,
    metrics: tuple[str, ...],
    horizon: float | None,
    samples: int,
    ground_which: str,
) -> dict[str, float]:
    out: dict[str, float] = {}
    if any(m in DYNAMIC_METRICS for m in metrics):
        trace = energy_trace(params, model=model, horizon=horizon, samples=samples)
        out.update(Emax=trace.e_max, Pmax=trace.p_max, tE=trace.t_e, tP=trace.t_p)
    if any(m in GROUND_METRICS for m in metrics):
        if model != "chs":
            raise ValueError("ground-state metrics need the cavity bipartition (chs model)")
        h = ground_hamiltonian(params, ground_which)
        psi = ground_state(h)
        out["energy"] = float(np.vdot(psi, h @ psi).real)
        out["order"] = order_parameter(psi, params)
        if "S" in metrics:
            out["S"] = von_neumann_entropy(reduce(psi, "battery", params))
        if "EN" in metrics:
            out["EN"] = log_negativity(psi, params)
    return {m: out[m] for m in metrics}


def sweep2d(
    params: ModelParams,
    axis1: tuple[str, np.ndarray],
    axis2: tuple[str, np.ndarray],
    metrics: tuple[str, ...] = DYNAMIC_METRICS,
    model: str = "chs",
    horizon: float | None = None,
    samples: int = 4000,
    workers: int = 1,
    ground_which: str = "full",
) -> SweepGrid:
    """Evaluate the requested metrics on every grid point independently.

    Individual point failures are recorded in ``failures`` and leave NaN
    in the metric arrays; they are not fatal.
    """
    name1, values1 = axis1
    name2, values2 = axis2
    _validate_axis(name1)
    _validate_axis(name2)
    values1 = np.asarray(values1, dtype=float)
    values2 = np.asarray(values2, dtype=float)
    if values1.size == 0 or values2.size == 0:
        raise ValueError("sweep axes must be nonempty")
    metrics = tuple(metrics)
    if not metrics:
        raise ValueError("at least one metric is required")
    known = DYNAMIC_METRICS + GROUND_METRICS
    for m in metrics:
        if m not in known:
            raise ValueError(f"unknown metric {m!r}; choose from {known}")

    grids = {m: np.full((values1.size, values2.size), np.nan) for m in metrics}
    failures: list[tuple[int, int, str]] = []

    def job(ij: tuple[int, int]) -> tuple[int, int, dict[str, float] | None, str | None]:
        i, j = ij
        point = replace(params, **{name1: values1[i], name2: values2[j]})
        try:
            return i, j, _evaluate_point(point, model, metrics, horizon, samples, ground_which), None
        except Exception as exc:  # recorded, not fatal
            return i, j, None, f"{type(exc).__name__}: {exc}"

    index_pairs = [(i, j) for i in range(values1.size) for j in range(values2.size)]
    with threadpool_limits(limits=1):
        if workers <= 1:
            results = [job(ij) for ij in index_pairs]
        else:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                results = list(executor.map(job, index_pairs))
    for i, j, values, error in results:
        if error is not None:
            failures.append((i, j, error))
            continue
        for m, val in values.items():
            grids[m][i, j] = val

    return SweepGrid(
        axis1_name=name1,
        axis1_values=values1,
        axis2_name=name2,
        axis2_values=values2,
        metrics=grids,
        failures=tuple(failures),
    )


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of log(value) = alpha log(N) + log(beta)."""

    ns: np.ndarray
    values: np.ndarray
    alpha: float
    beta: float
    residual: float


def fit_power_law(ns, values) -> ScalingFit:
    """Ordinary least squares on (log N, log value); needs >= 3 positive points."""
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if ns.size != values.size:
        raise ValueError("ns and values must have equal length")
    if ns.size < 3:
        raise ValueError(f"power-law fit needs at least 3 points, got {ns.size}")
    if np.any(ns <= 0):
        raise ValueError("all N values must be positive")
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise ValueError("power-law fit requires positive finite values")
    log_n = np.log(ns)
    log_v = np.log(values)
    design = np.column_stack([log_n, np.ones_like(log_n)])
    coef, _, _, _ = np.linalg.lstsq(design, log_v, rcond=None)
    alpha, intercept = float(coef[0]), float(coef[1])
    residual = float(((design @ coef - log_v) ** 2).sum())
    return ScalingFit(ns=ns, values=values, alpha=alpha, beta=math.exp(intercept), residual=residual)


@dataclass(frozen=True)
class ScalingStudy:
    """Per-N trace maxima plus power-law fits for E_max and P_max.

    Points whose maximum sits within 1% of the horizon are flagged
    unconverged and left out of the corresponding fit.
    """

    model: str
    ns: np.ndarray
    e_max: np.ndarray
    p_max: np.ndarray
    t_e: np.ndarray
    t_p: np.ndarray
    e_converged: np.ndarray
    p_converged: np.ndarray
    fit_e: ScalingFit
    fit_p: ScalingFit


def scaling_study(
    params: ModelParams,
    n_list,
    model: str = "chs",
    horizon: float | None = None,
    samples: int = 4000,
    nph_factor: int = 4,
) -> ScalingStudy:
    """Run one trace per chain length (cutoff ``nph_factor * N``) and fit both maxima."""
    ns = np.asarray(sorted(int(n) for n in n_list))
    if ns.size < 3:
        raise ValueError(f"scaling study needs at least 3 chain lengths, got {ns.size}")
    e_max = np.empty(ns.size)
    p_max = np.empty(ns.size)
    t_e = np.empty(ns.size)
    t_p = np.empty(ns.size)
    horizons = np.empty(ns.size)
    for k, n in enumerate(ns):
        point = params.with_spins(int(n), nph_factor=nph_factor)
        trace = energy_trace(point, model=model, horizon=horizon, samples=samples)
        e_max[k], p_max[k] = trace.e_max, trace.p_max
        t_e[k], t_p[k] = trace.t_e, trace.t_p
        horizons[k] = trace.horizon
    e_converged = t_e < CONVERGED_HORIZON_FRACTION * horizons
    p_converged = t_p < CONVERGED_HORIZON_FRACTION * horizons
    if e_converged.sum() < 3 or p_converged.sum() < 3:
        raise ValueError("fewer than 3 converged points; extend the horizon")
    # maxima at numerical zero (frozen dynamics) carry no power-law information
    floor = 1e-12 * ns * params.omega_a
    for label, values in (("E_max", e_max), ("P_max", p_max)):
        if np.any(values <= floor):
            raise ValueError(f"power-law fit requires positive values; {label} is numerically zero")
    fit_e = fit_power_law(ns[e_converged], e_max[e_converged])
    fit_p = fit_power_law(ns[p_converged], p_max[p_converged])
    return ScalingStudy(
        model=model,
        ns=ns,
        e_max=e_max,
        p_max=p_max,
        t_e=t_e,
        t_p=t_p,
        e_converged=e_converged,
        p_converged=p_converged,
        fit_e=fit_e,
        fit_p=fit_p,
    )


@dataclass(frozen=True)
class CutoffReport:
    """E_max at several photon-cutoff factors, relative to the largest one."""

    factors: np.ndarray
    n_ph: np.ndarray
    e_max: np.ndarray
    rel_dev: np.ndarray

    @property
    def max_rel_dev(self) -> float:
        return float(self.rel_dev[:-1].max()) if self.rel_dev.size > 1 else 0.0


def cutoff_convergence(
    params: ModelParams,
    model: str = "chs",
    factors=(3, 4, 6),
    horizon: float | None = None,
    samples: int = 4000,
) -> CutoffReport:
    """Recompute E_max at each cutoff factor; deviations are vs the largest cutoff."""
    if model != "chs":
        raise ValueError("cutoff convergence applies to the cavity-coupled model only")
    facs = np.asarray(sorted(set(int(f) for f in factors)))
    if facs.size < 2:
        raise ValueError("need at least two cutoff factors to compare")
    if facs[0] < 1:
        raise ValueError("cutoff factors must be >= 1")
    e_max = np.empty(facs.size)
    n_ph = np.empty(facs.size, dtype=int)
    for k, f in enumerate(facs):
        point = replace(params, n_ph=int(f) * params.n_spins)
        trace = energy_trace(point, model="chs", horizon=horizon, samples=samples)
        e_max[k] = trace.e_max
        n_ph[k] = point.n_ph
    ref = e_max[-1]
    rel_dev = np.abs(e_max - ref) / max(abs(ref), 1e-12)
    return CutoffReport(factors=facs, n_ph=n_ph, e_max=e_max, rel_dev=rel_dev)
