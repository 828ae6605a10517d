"""Declarative experiment runner.

A config is flat key-value text, one experiment per file::

    experiment = flat_validation
    p = 2
    q = 2
    seed = 7
    # axes for the `sweep` entry point use a sweep. prefix
    sweep.m = 10, 100, 1000, 10000

Each recipe fills documented defaults, runs the solver/diagnostics stack,
and produces a RunRecord whose parameter echo contains every value that
affects the numerics.  Records serialize to JSON or self-describing CSV;
trajectories and step logs go to dedicated CSV files next to the record.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import closed_forms as cf
from . import diagnostics as dg
from .discretization import (
    BoundaryCondition,
    DomainKind,
    Field,
    Grid,
    SpatialDomain,
    build_grid,
    bump_function,
    integrate_field,
)
from .evolution import (
    NumericsError,
    SolverConfig,
    Trajectory,
    heat_solve,
    residual_of,
    solve,
    steps_to_csv,
    trajectory_to_csv,
)

VERSION = "0.1.0"

__all__ = [
    "VERSION",
    "ConfigError",
    "ExperimentSpec",
    "RunRecord",
    "RECIPE_NAMES",
    "parse_config",
    "run_experiment",
    "sweep",
    "write_records",
]


class ConfigError(ValueError):
    """Malformed or invalid experiment configuration."""


_REQUIRED = object()


@dataclass(frozen=True)
class _Param:
    kind: str  # "int" | "float" | "str" | "float_list"
    default: object = _REQUIRED
    check: Callable[[object], bool] | None = None
    message: str = ""


def _positive(x) -> bool:
    return x > 0


def _node_count(x) -> bool:
    return x >= 3


_BC_NAMES = ("neumann_zero", "dirichlet_zero")


def _base_schema(**overrides) -> dict[str, _Param]:
    schema = {
        "p": _Param("float", _REQUIRED, _positive, "p must be > 0"),
        "q": _Param("float", _REQUIRED, _positive, "q must be > 0"),
        "nodes": _Param("int", 401, _node_count, "nodes must be >= 3"),
        "extent": _Param("float", 1.0, _positive, "extent must be > 0"),
        "bc": _Param("str", "neumann_zero", lambda s: s in _BC_NAMES,
                     f"bc must be one of {_BC_NAMES}"),
        "t_start": _Param("float", 0.0, lambda x: x >= 0, "t_start must be >= 0"),
        "t_end": _Param("float", 1.0, _positive, "t_end must be > 0"),
        "dt_init": _Param("float", 1e-4, _positive, "dt_init must be > 0"),
        "dt_min": _Param("float", 1e-12, _positive, "dt_min must be > 0"),
        "tol_step": _Param("float", 1e-6, _positive, "tol_step must be > 0"),
        "theta": _Param("float", 1.0, lambda x: 0.5 <= x <= 1.0,
                        "theta must lie in [0.5, 1]"),
    }
    schema.update(overrides)
    return schema


_SCHEMAS: dict[str, dict[str, _Param]] = {
    "flat_validation": _base_schema(
        t_start=_Param("float", 0.1, _positive, "t_start must be > 0"),
        n_snapshots=_Param("int", 16, lambda x: x >= 2, "n_snapshots must be >= 2"),
    ),
    "convergence_order": _base_schema(
        nodes=_Param("int", 201, _node_count, "nodes must be >= 3"),
        t_ref=_Param("float", 1.0, _positive, "t_ref must be > 0"),
        dt_list=_Param("float_list", [1e-2, 5e-3, 2.5e-3]),
        node_list=_Param("float_list", [101, 201, 401]),
        mask_radius=_Param("float", 0.2, _positive, "mask_radius must be > 0"),
    ),
    "blowup_fit": _base_schema(
        nodes=_Param("int", 201, _node_count, "nodes must be >= 3"),
        t_start=_Param("float", 0.1, _positive, "t_start must be > 0"),
        n_snapshots=_Param("int", 24, lambda x: x >= 5, "n_snapshots must be >= 5"),
    ),
    "estimate_saturation": _base_schema(
        m=_Param("float", 1e4, _positive, "m must be > 0"),
        nodes=_Param("int", 101, _node_count, "nodes must be >= 3"),
        t_probe=_Param("float", 0.1, _positive, "t_probe must be > 0"),
        n_snapshots=_Param("int", 12, lambda x: x >= 2, "n_snapshots must be >= 2"),
        margin_frac=_Param("float", 0.2, lambda x: 0 < x < 0.5,
                           "margin_frac must lie in (0, 0.5)"),
    ),
    "trace_measurement": _base_schema(
        ic_width=_Param("float", 0.3, _positive, "ic_width must be > 0"),
        ic_mass=_Param("float", 1.0, _positive, "ic_mass must be > 0"),
        psi_center=_Param("float", 0.0),
        psi_width=_Param("float", 0.5, _positive, "psi_width must be > 0"),
        t_min=_Param("float", 1e-3, _positive, "t_min must be > 0"),
        t_end=_Param("float", 0.05, _positive, "t_end must be > 0"),
        n_snapshots=_Param("int", 10, lambda x: x >= 2, "n_snapshots must be >= 2"),
    ),
    "dichotomy_probe": _base_schema(
        nodes=_Param("int", 801, _node_count, "nodes must be >= 3"),
        t_end=_Param("float", 0.5, _positive, "t_end must be > 0"),
        ic_width=_Param("float", 0.4, _positive, "ic_width must be > 0"),
        ic_mass=_Param("float", 1.0, _positive, "ic_mass must be > 0"),
        windows=_Param("float_list", [1e-3, 2.5e-4, 6.25e-5, 1.5625e-5]),
        region_lo=_Param("float", -0.5),
        region_hi=_Param("float", 0.5),
        growth_ratio=_Param("float", 10.0, lambda x: x > 1, "growth_ratio must be > 1"),
        saturation_tol=_Param("float", 0.05, _positive, "saturation_tol must be > 0"),
        dt_init=_Param("float", 1e-6, _positive, "dt_init must be > 0"),
    ),
    "removability_sweep": _base_schema(
        nodes=_Param("int", 801, _node_count, "nodes must be >= 3"),
        eps_list=_Param("float_list", [0.2, 0.1, 0.05, 0.025]),
        t_probe=_Param("float", 0.05, _positive, "t_probe must be > 0"),
        collapse_ratio=_Param("float", 0.2, _positive, "collapse_ratio must be > 0"),
        converge_tol=_Param("float", 0.1, _positive, "converge_tol must be > 0"),
        dt_init=_Param("float", 1e-6, _positive, "dt_init must be > 0"),
    ),
    "subsolution_check": _base_schema(
        nodes=_Param("int", 201, _node_count, "nodes must be >= 3"),
        t_start=_Param("float", 0.1, _positive, "t_start must be > 0"),
        n_snapshots=_Param("int", 40, lambda x: x >= 3, "n_snapshots must be >= 3"),
    ),
    "mean_value_check": _base_schema(
        p=_Param("float", 2.0, _positive, "p must be > 0"),
        q=_Param("float", 2.0, _positive, "q must be > 0"),
        extent=_Param("float", 2.0, _positive, "extent must be > 0"),
        kernel_time=_Param("float", 0.05, _positive, "kernel_time must be > 0"),
        t_end=_Param("float", 0.35, _positive, "t_end must be > 0"),
        center_x=_Param("float", 0.0),
        center_t=_Param("float", 0.3, _positive, "center_t must be > 0"),
        rho=_Param("float", 0.45, _positive, "rho must be > 0"),
        epsilons=_Param("float_list", [0.1, 0.2, 0.4]),
        s=_Param("float", 1.0, _positive, "s must be > 0"),
        n_snapshots=_Param("int", 60, lambda x: x >= 5, "n_snapshots must be >= 5"),
    ),
}

RECIPE_NAMES = tuple(_SCHEMAS)

# recipes whose pair must satisfy pq != 1 up front
_NEEDS_PAIR = frozenset(RECIPE_NAMES) - {"mean_value_check"}


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    parameters: dict
    seed: int = 0
    sweep_axes: dict = field(default_factory=dict)


@dataclass
class RunRecord:
    name: str
    runid: str
    seed: int
    params: dict
    outcome: dict
    failed: bool = False
    error: str | None = None
    wall_time_s: float = 0.0
    version: str = VERSION


def _parse_scalar(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def _parse_value(text: str):
    if "," in text:
        return [_parse_scalar(part) for part in text.split(",")]
    return _parse_scalar(text)


def _coerce(key: str, value, param: _Param, line: int):
    def fail(expected):
        raise ConfigError(f"line {line}: key '{key}': expected {expected}, got {value!r}")

    if param.kind == "int":
        if not isinstance(value, int):
            fail("an integer")
        out = value
    elif param.kind == "float":
        if not isinstance(value, (int, float)):
            fail("a number")
        out = float(value)
    elif param.kind == "str":
        if not isinstance(value, str):
            fail("a name")
        out = value
    elif param.kind == "float_list":
        items = value if isinstance(value, list) else [value]
        if not all(isinstance(v, (int, float)) for v in items):
            fail("a comma-separated list of numbers")
        out = [float(v) for v in items]
    else:  # pragma: no cover - schema bug
        raise AssertionError(param.kind)
    if param.check is not None and param.kind != "float_list" and not param.check(out):
        raise ConfigError(f"line {line}: key '{key}': {param.message}")
    return out


def parse_config(text: str) -> ExperimentSpec:
    """Parse and validate a flat key-value experiment document."""
    entries: dict[str, tuple[object, int]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, _, value = line.partition(sep)
                break
        else:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {raw!r}")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {line_no}: empty key")
        if key in entries:
            raise ConfigError(f"line {line_no}: duplicate key '{key}'")
        entries[key] = (_parse_value(value), line_no)

    if "experiment" not in entries:
        raise ConfigError("missing required key 'experiment'")
    name, name_line = entries.pop("experiment")
    if name not in _SCHEMAS:
        raise ConfigError(
            f"line {name_line}: unknown experiment '{name}'; "
            f"known recipes: {', '.join(RECIPE_NAMES)}"
        )
    schema = _SCHEMAS[name]

    seed = 0
    if "seed" in entries:
        value, line = entries.pop("seed")
        if not isinstance(value, int):
            raise ConfigError(f"line {line}: key 'seed': expected an integer, got {value!r}")
        seed = value

    params: dict = {}
    axes: dict = {}
    for key, (value, line) in entries.items():
        if key.startswith("sweep."):
            axis = key[len("sweep."):]
            if axis not in schema:
                raise ConfigError(f"line {line}: unknown sweep axis '{axis}' for {name}")
            param = schema[axis]
            if param.kind == "float_list":
                raise ConfigError(f"line {line}: cannot sweep over list parameter '{axis}'")
            items = value if isinstance(value, list) else [value]
            axes[axis] = [_coerce(axis, v, param, line) for v in items]
            continue
        if key not in schema:
            raise ConfigError(f"line {line}: unknown key '{key}' for recipe {name}")
        params[key] = _coerce(key, value, schema[key], line)

    resolved = _resolve(name, params)
    return ExperimentSpec(name=name, parameters=resolved, seed=seed, sweep_axes=axes)


def _resolve(name: str, params: dict) -> dict:
    """Fill defaults and run cross-field validation for a recipe."""
    if name not in _SCHEMAS:
        raise ConfigError(
            f"unknown experiment '{name}'; known recipes: {', '.join(RECIPE_NAMES)}"
        )
    schema = _SCHEMAS[name]
    resolved = {}
    for key, param in schema.items():
        if key in params:
            value = _coerce(key, params[key], param, 0)
        elif param.default is _REQUIRED:
            raise ConfigError(f"recipe {name}: missing required key '{key}'")
        else:
            value = param.default
        resolved[key] = value
    for key in params:
        if key not in schema:
            raise ConfigError(f"recipe {name}: unknown key '{key}'")
    if name in _NEEDS_PAIR and resolved["p"] * resolved["q"] == 1.0:
        raise ConfigError(f"recipe {name}: pq = 1 is excluded")
    if "t_start" in resolved and resolved["t_end"] <= resolved["t_start"]:
        raise ConfigError(f"recipe {name}: t_end must exceed t_start")
    return resolved


# ---------------------------------------------------------------------------
# recipe implementations


def _interval_grid(params: dict) -> Grid:
    domain = SpatialDomain(DomainKind.INTERVAL, params["extent"], 1)
    return build_grid(domain, params["nodes"])


def _bc(params: dict) -> BoundaryCondition:
    return BoundaryCondition(params["bc"])


def _solver_config(pair, params: dict, t_start: float, t_end: float) -> SolverConfig:
    return SolverConfig(
        pair=pair,
        bc=_bc(params),
        t_start=t_start,
        t_end=t_end,
        dt_init=params["dt_init"],
        dt_min=params["dt_min"],
        tol_step=params["tol_step"],
        theta_scheme=params["theta"],
    )


def _flat_fields(grid: Grid, pair, t: float) -> tuple[Field, Field]:
    u, v = cf.eval_flat(pair, t)
    return Field(grid, np.full(grid.nodes, u)), Field(grid, np.full(grid.nodes, v))


def _flat_tracked(pair, params: dict, n_snapshots: int):
    grid = _interval_grid(params)
    t0, t1 = params["t_start"], params["t_end"]
    ic_u, ic_v = _flat_fields(grid, pair, t0)
    times = np.geomspace(t0 * 1.02, t1, n_snapshots)
    times[-1] = t1
    config = _solver_config(pair, params, t0, t1)
    return solve(ic_u, ic_v, config, times), grid


def _run_flat_validation(params: dict, rng) -> tuple[dict, Trajectory | None]:
    pair = cf.derive_exponents(params["p"], params["q"])
    consts = cf.flat_constants(pair)
    traj, _ = _flat_tracked(pair, params, params["n_snapshots"])
    err_u = err_v = 0.0
    for s in traj.states:
        exact_u = consts.a_star * s.t**-pair.a
        exact_v = consts.b_star * s.t**-pair.b
        err_u = max(err_u, float(np.max(np.abs(s.u.values - exact_u))) / exact_u)
        err_v = max(err_v, float(np.max(np.abs(s.v.values - exact_v))) / exact_v)
    outcome = {
        "max_rel_err_u": err_u,
        "max_rel_err_v": err_v,
        "a_star": consts.a_star,
        "b_star": consts.b_star,
    }
    return outcome, traj


def _fit_slope(xs, errs) -> float:
    slope, _ = np.polyfit(np.log(xs), np.log(errs), 1)
    return float(slope)


def _run_convergence_order(params: dict, rng) -> tuple[dict, Trajectory | None]:
    pair = cf.derive_exponents(params["p"], params["q"])
    if not pair.superlinear:
        raise ConfigError("convergence_order requires pq > 1")
    bc = _bc(params)
    grid = _interval_grid(params)

    def flat_u(t):
        return Field(grid, np.full(grid.nodes, cf.eval_flat(pair, t)[0]))

    def flat_v(t):
        return Field(grid, np.full(grid.nodes, cf.eval_flat(pair, t)[1]))

    dt_list = params["dt_list"]
    temporal_errs = []
    for dt in dt_list:
        r_u, r_v = residual_of(flat_u, flat_v, pair, grid, bc, params["t_ref"], dt)
        temporal_errs.append(
            max(float(np.max(np.abs(r_u.values))), float(np.max(np.abs(r_v.values))))
        )
    temporal_order = _fit_slope(dt_list, temporal_errs)

    ell = cf.elliptic_constants(pair, 1)
    node_list = [int(n) for n in params["node_list"]]
    hs, spatial_errs = [], []
    for n in node_list:
        g = build_grid(SpatialDomain(DomainKind.INTERVAL, params["extent"], 1), n)
        u_vals, v_vals = cf.eval_elliptic(pair, ell, g.coords)
        fu = Field(g, u_vals)
        fv = Field(g, v_vals)
        r_u, r_v = residual_of(lambda t: fu, lambda t: fv, pair, g, bc, 1.0, 1e-3)
        # half-ulp slack so the node sitting exactly on the cut stays included
        mask = np.abs(g.coords) >= params["mask_radius"] - 1e-9
        mask[0] = mask[-1] = False
        spatial_errs.append(
            max(float(np.max(np.abs(r_u.values[mask]))), float(np.max(np.abs(r_v.values[mask]))))
        )
        hs.append(g.h)
    spatial_order = _fit_slope(hs, spatial_errs)

    outcome = {
        "temporal_order": temporal_order,
        "spatial_order": spatial_order,
        "dt_list": list(dt_list),
        "temporal_residuals": temporal_errs,
        "node_list": node_list,
        "spatial_residuals": spatial_errs,
    }
    return outcome, None


def _run_blowup_fit(params: dict, rng) -> tuple[dict, Trajectory | None]:
    pair = cf.derive_exponents(params["p"], params["q"])
    if not pair.superlinear:
        raise ConfigError("blowup_fit requires pq > 1")
    traj, grid = _flat_tracked(pair, params, params["n_snapshots"])
    center = int(np.argmin(np.abs(grid.coords)))
    window = (params["t_start"], params["t_end"])
    fit_u = dg.fit_power_law([(s.t, float(s.u.values[center])) for s in traj.states], window)
    fit_v = dg.fit_power_law([(s.t, float(s.v.values[center])) for s in traj.states], window)
    outcome = {
        "exponent_u": fit_u.exponent,
        "exponent_v": fit_v.exponent,
        "target_u": -pair.a,
        "target_v": -pair.b,
        "rel_err_u": abs(fit_u.exponent + pair.a) / pair.a,
        "rel_err_v": abs(fit_v.exponent + pair.b) / pair.b,
        "amplitude_u": fit_u.amplitude,
        "amplitude_v": fit_v.amplitude,
        "rms_u": fit_u.rms_residual,
        "rms_v": fit_v.rms_residual,
    }
    return outcome, traj


def _run_estimate_saturation(params: dict, rng) -> tuple[dict, Trajectory | None]:
    pair = cf.derive_exponents(params["p"], params["q"])
    if not pair.superlinear:
        raise ConfigError("estimate_saturation requires pq > 1")
    grid = _interval_grid(params)
    m = params["m"]
    ic = Field(grid, np.full(grid.nodes, m))
    t_probe = params["t_probe"]
    times = np.geomspace(t_probe / 32.0, t_probe, params["n_snapshots"])
    times[-1] = t_probe
    config = _solver_config(pair, params, 0.0, t_probe)
    traj = solve(ic, ic, config, times)
    margin = params["margin_frac"] * params["extent"]
    report = dg.check_upper_estimate(traj, pair, margin)
    consts = cf.flat_constants(pair)
    outcome = {
        "m": m,
        "t_probe": t_probe,
        "monitor_u": report.sup_u_t_a,
        "monitor_v": report.sup_v_t_b,
        "a_star": consts.a_star,
        "b_star": consts.b_star,
    }
    return outcome, traj


def _run_trace_measurement(params: dict, rng) -> tuple[dict, Trajectory | None]:
    pair = cf.derive_exponents(params["p"], params["q"])
    grid = _interval_grid(params)
    ic = bump_function(grid, 0.0, params["ic_width"])
    ic_u = Field(grid, ic.values * params["ic_mass"])
    ic_v = Field(grid, ic.values * params["ic_mass"])
    psi = bump_function(grid, params["psi_center"], params["psi_width"])
    times = np.geomspace(params["t_min"], params["t_end"], params["n_snapshots"])
    times[-1] = params["t_end"]
    config = _solver_config(pair, params, 0.0, params["t_end"])
    traj = solve(ic_u, ic_v, config, times)
    samples = dg.trace_functional(traj, psi)
    target_u = integrate_field(ic_u, psi)
    target_v = integrate_field(ic_v, psi)
    outcome = {
        "times": [s.t for s in samples],
        "trace_u": [s.value_u for s in samples],
        "trace_v": [s.value_v for s in samples],
        "target_u": target_u,
        "target_v": target_v,
        "earliest_gap_u": abs(samples[0].value_u - target_u) / abs(target_u),
        "earliest_gap_v": abs(samples[0].value_v - target_v) / abs(target_v),
    }
    return outcome, traj


def _run_dichotomy_probe(params: dict, rng) -> tuple[dict, Trajectory | None]:
    pair = cf.derive_exponents(params["p"], params["q"])
    grid = _interval_grid(params)
    ic = bump_function(grid, 0.0, params["ic_width"])
    ic_u = Field(grid, ic.values * params["ic_mass"])
    ic_v = Field(grid, ic.values * params["ic_mass"])
    t_end = params["t_end"]
    windows = sorted(params["windows"], reverse=True)  # shrinking lower edges
    if windows[-1] <= 0 or windows[0] >= t_end:
        raise ConfigError("windows must lie strictly inside (0, t_end)")
    ladder = list(np.geomspace(windows[-1] / 4.0, t_end, 60))
    times = sorted(set(ladder) | set(windows) | {t_end})
    config = _solver_config(pair, params, 0.0, t_end)
    traj = solve(ic_u, ic_v, config, times)
    region = (params["region_lo"], params["region_hi"])
    uq = [dg.cylinder_integral(traj, pair.q, "u", region, (w, t_end)) for w in windows]
    vp = [dg.cylinder_integral(traj, pair.p, "v", region, (w, t_end)) for w in windows]
    masses = dg.mass_in_region(traj, region, windows)
    verdict = dg.dichotomy_classify(
        uq, vp, masses,
        growth_ratio=params["growth_ratio"],
        saturation_tol=params["saturation_tol"],
    )
    outcome = {
        "verdict": verdict.kind,
        "uq_trend": verdict.evidence.uq_integral_trend,
        "vp_trend": verdict.evidence.vp_integral_trend,
        "mass_trend": verdict.evidence.mass_trend,
        "windows": windows,
        "uq_integrals": uq,
        "vp_integrals": vp,
        "masses": masses,
    }
    return outcome, traj


def _run_removability_sweep(params: dict, rng) -> tuple[dict, Trajectory | None]:
    pair = cf.derive_exponents(params["p"], params["q"])
    grid = _interval_grid(params)
    t_probe = params["t_probe"]
    masses = []
    last_traj = None
    for eps in params["eps_list"]:
        ic = bump_function(grid, 0.0, eps)
        config = _solver_config(pair, params, 0.0, t_probe)
        times = [t_probe / 4.0, t_probe / 2.0, t_probe]
        traj = solve(ic, ic, config, times)
        masses.append(integrate_field(traj.states[-1].u))
        last_traj = traj
    last_first = masses[-1] / masses[0]
    last_two_gap = abs(masses[-1] - masses[-2]) / masses[-2]
    if last_first < params["collapse_ratio"]:
        verdict = "collapsing"
    elif last_two_gap <= params["converge_tol"]:
        verdict = "converging"
    else:
        verdict = "mixed"
    outcome = {
        "eps_list": list(params["eps_list"]),
        "masses": masses,
        "last_first_ratio": last_first,
        "last_two_gap": last_two_gap,
        "verdict": verdict,
        "t_probe": t_probe,
    }
    return outcome, last_traj


def _run_subsolution_check(params: dict, rng) -> tuple[dict, Trajectory | None]:
    pair = cf.derive_exponents(params["p"], params["q"])
    n = params["n_snapshots"]
    t0, t1 = params["t_start"], params["t_end"]
    grid = _interval_grid(params)
    ic_u, ic_v = _flat_fields(grid, pair, t0)
    times = np.linspace(t0 + (t1 - t0) / n, t1, n)
    config = _solver_config(pair, params, t0, t1)
    traj = solve(ic_u, ic_v, config, times)
    report = dg.check_f_subsolution(traj, pair)
    bound = report.k**pair.q
    outcome = {
        "max_violation": report.max_violation,
        "d": report.d,
        "c": report.c,
        "k": report.k,
        "k_pow_q": bound,
        "violation_over_bound": report.max_violation / bound,
    }
    return outcome, traj


def _run_mean_value_check(params: dict, rng) -> tuple[dict, Trajectory | None]:
    grid = _interval_grid(params)
    s0 = params["kernel_time"]
    t_end = params["t_end"]
    if t_end <= s0:
        raise ConfigError("t_end must exceed kernel_time")
    kernel = np.exp(-grid.coords**2 / (4.0 * s0)) / math.sqrt(4.0 * math.pi * s0)
    ic = Field(grid, kernel)
    config = SolverConfig(
        pair=None,
        bc=_bc(params),
        t_start=s0,
        t_end=t_end,
        dt_init=params["dt_init"],
        dt_min=params["dt_min"],
        tol_step=params["tol_step"],
        theta_scheme=params["theta"],
    )
    n = params["n_snapshots"]
    times = np.linspace(s0 + (t_end - s0) / n, t_end, n)
    traj = heat_solve(ic, config, times)
    epsilons = sorted(params["epsilons"])
    ratios = dg.mean_value_check(
        traj, params["s"], (params["center_x"], params["center_t"]),
        params["rho"], epsilons,
    )
    weight_exp = 3.0 / params["s"] ** 2  # (N + 2)/s^2 with N = 1
    weighted = [r * e**weight_exp for e, r in ratios]
    bound = weighted[-1]  # constant extracted at the coarsest epsilon
    monotone = all(r1 >= r2 for (_, r1), (_, r2) in zip(ratios, ratios[1:]))
    outcome = {
        "epsilons": [e for e, _ in ratios],
        "ratios": [r for _, r in ratios],
        "weighted": weighted,
        "bound_constant": bound,
        "monotone_ok": monotone,
        "bounded_ok": all(w <= bound * (1 + 1e-12) for w in weighted),
    }
    return outcome, traj


_RUNNERS = {
    "flat_validation": _run_flat_validation,
    "convergence_order": _run_convergence_order,
    "blowup_fit": _run_blowup_fit,
    "estimate_saturation": _run_estimate_saturation,
    "trace_measurement": _run_trace_measurement,
    "dichotomy_probe": _run_dichotomy_probe,
    "removability_sweep": _run_removability_sweep,
    "subsolution_check": _run_subsolution_check,
    "mean_value_check": _run_mean_value_check,
}


# ---------------------------------------------------------------------------
# execution and serialization


def run_experiment(
    spec: ExperimentSpec,
    out_dir: str | Path | None = None,
    runid: str | None = None,
) -> RunRecord:
    """Execute one recipe; solver failures are recorded, not raised."""
    params = _resolve(spec.name, spec.parameters)
    runid = runid or f"{spec.name}-s{spec.seed:04d}"
    rng = np.random.default_rng(spec.seed)
    start = time.perf_counter()
    traj = None
    try:
        outcome, traj = _RUNNERS[spec.name](params, rng)
        record = RunRecord(
            name=spec.name, runid=runid, seed=spec.seed, params=params, outcome=outcome
        )
    except (NumericsError, ValueError, FloatingPointError) as exc:
        record = RunRecord(
            name=spec.name,
            runid=runid,
            seed=spec.seed,
            params=params,
            outcome={},
            failed=True,
            error=f"{type(exc).__name__}: {exc}",
        )
    record.wall_time_s = time.perf_counter() - start
    if out_dir is not None and traj is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        trajectory_to_csv(traj, out / f"trajectory_{runid}.csv")
        steps_to_csv(traj, out / f"steps_{runid}.csv")
    return record


def sweep(
    base: ExperimentSpec,
    grid: dict[str, list] | None = None,
    out_dir: str | Path | None = None,
) -> list[RunRecord]:
    """One run per grid point; per-run seed = base seed + grid index."""
    axes = grid if grid is not None else base.sweep_axes
    if not axes:
        axes = {}
    names = list(axes)
    values = [axes[n] for n in names]
    points = list(itertools.product(*values)) if names else [()]
    records = []
    for index, point in enumerate(points):
        params = dict(base.parameters)
        params.update(dict(zip(names, point)))
        spec = ExperimentSpec(
            name=base.name,
            parameters=params,
            seed=base.seed + index,
            sweep_axes={},
        )
        runid = f"{base.name}-s{base.seed:04d}-g{index:03d}"
        try:
            record = run_experiment(spec, out_dir=out_dir, runid=runid)
        except ConfigError as exc:
            # a bad grid point must not poison its neighbours
            record = RunRecord(
                name=base.name,
                runid=runid,
                seed=spec.seed,
                params=params,
                outcome={},
                failed=True,
                error=f"ConfigError: {exc}",
            )
        records.append(record)
    return records


def _json_ready(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_json_ready(v) for v in value]
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, dict):
        return {k: _json_ready(v) for k, v in value.items()}
    return value


def _record_obj(record: RunRecord) -> dict:
    obj = dataclasses.asdict(record)
    return _json_ready(obj)


def _flatten(record: RunRecord) -> dict:
    flat = {
        "runid": record.runid,
        "name": record.name,
        "seed": record.seed,
        "version": record.version,
        "failed": record.failed,
        "error": record.error or "",
    }
    for prefix, mapping in (("param", record.params), ("out", record.outcome)):
        for key in sorted(mapping):
            value = _json_ready(mapping[key])
            if isinstance(value, list):
                value = ";".join(repr(v) for v in value)
            flat[f"{prefix}.{key}"] = value
    flat["wall_time_s"] = record.wall_time_s
    return flat


def write_records(records: list[RunRecord], out_dir: str | Path, fmt: str = "csv") -> Path:
    """Write record.csv or record.json; returns the written path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path = out / "record.json"
        payload = [_record_obj(r) for r in records]
        if len(payload) == 1:
            payload = payload[0]
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path
    if fmt != "csv":
        raise ConfigError(f"unknown output format '{fmt}'")
    path = out / "record.csv"
    rows = [_flatten(r) for r in records]
    header: list[str] = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = []
            for key in header:
                value = row.get(key, "")
                if isinstance(value, float):
                    value = repr(value)
                cells.append(str(value))
            fh.write(",".join(cells) + "\n")
    return path
