"""Time integration of the coupled system with positivity preservation.

One step = theta-implicit diffusion (tridiagonal solve per component along
the 1D/radial line) followed by a semi-implicit absorption update of
denominator form,

    u_new = u_half / (1 + dt * v_half**p / max(u_half, floor)),

which keeps components nonnegative without Newton iteration and leaves an
exactly zero component at zero.  The same machinery integrates the scalar
equation U_t - Lap(U) + U^Q = 0 and the pure heat equation, which serve as
oracles for the diagnostics.

Adaptive stepping is plain step doubling: a full step is compared against
two half steps, the step is rejected and dt halved whenever the scaled gap
exceeds the local tolerance, and the half-step composition is what gets
accepted (no extrapolation, so the positivity clamp is never undone).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import solve_banded

from .closed_forms import PowerPair
from .discretization import BoundaryCondition, DomainKind, Field, Grid, laplacian_apply

__all__ = [
    "SolverConfig",
    "State",
    "StepRecord",
    "Trajectory",
    "NumericsError",
    "StepSizeUnderflow",
    "NonFiniteState",
    "step_imex",
    "solve",
    "heat_solve",
    "scalar_solve",
    "residual_of",
    "trajectory_to_csv",
    "steps_to_csv",
]


class NumericsError(RuntimeError):
    """Base class for runtime integration failures."""


class StepSizeUnderflow(NumericsError):
    """Raised when error control pushes dt below dt_min."""


class NonFiniteState(NumericsError):
    """Raised when a step produces inf or nan values."""


@dataclass(frozen=True)
class SolverConfig:
    pair: PowerPair | None
    bc: BoundaryCondition
    t_start: float
    t_end: float
    dt_init: float = 1e-4
    dt_min: float = 1e-12
    tol_step: float = 1e-6
    theta_scheme: float = 1.0
    absorption_floor: float = 1e-300

    def __post_init__(self):
        if self.t_start < 0:
            raise ValueError(f"t_start must be >= 0, got {self.t_start}")
        if self.t_end <= self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.dt_init <= 0 or self.dt_min <= 0:
            raise ValueError("time steps must be positive")
        if self.dt_min > self.dt_init:
            raise ValueError("dt_min must not exceed dt_init")
        if self.tol_step <= 0:
            raise ValueError("tol_step must be positive")
        if not 0.5 <= self.theta_scheme <= 1.0:
            raise ValueError("theta_scheme must lie in [0.5, 1]")
        if self.absorption_floor <= 0:
            raise ValueError("absorption_floor must be positive")


@dataclass(frozen=True)
class State:
    """Snapshot at time t; v is None for scalar/heat trajectories."""

    t: float
    u: Field
    v: Field | None = None


@dataclass(frozen=True)
class StepRecord:
    t: float
    dt: float
    retries: int


@dataclass
class Trajectory:
    states: list[State]
    steps: list[StepRecord] = field(default_factory=list)

    @property
    def grid(self) -> Grid:
        return self.states[0].u.grid

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    def sample(self, t: float, tol: float = 1e-12) -> State:
        for s in self.states:
            if abs(s.t - t) <= tol * max(1.0, abs(t)):
                return s
        raise ValueError(f"no snapshot at t={t}")


class _Diffusion:
    """Tridiagonal bands of the discrete Laplacian plus bc bookkeeping."""

    def __init__(self, grid: Grid, bc: BoundaryCondition):
        n = grid.nodes
        h = grid.h
        sub = np.full(n, 1.0 / h**2)
        diag = np.full(n, -2.0 / h**2)
        sup = np.full(n, 1.0 / h**2)
        pinned = np.zeros(n, dtype=bool)

        if grid.domain.kind is DomainKind.INTERVAL:
            if bc is BoundaryCondition.NEUMANN_ZERO:
                sup[0] = 2.0 / h**2
                sub[-1] = 2.0 / h**2
            else:
                pinned[0] = pinned[-1] = True
        else:
            dim = grid.domain.dim_n
            r = grid.coords
            drift = (dim - 1) / (2.0 * h * r[1:-1])
            sub[1:-1] -= drift
            sup[1:-1] += drift
            diag[0] = -2.0 * dim / h**2
            sup[0] = 2.0 * dim / h**2
            if bc is BoundaryCondition.NEUMANN_ZERO:
                sub[-1] = 2.0 / h**2
            else:
                pinned[-1] = True

        self.grid = grid
        self.bc = bc
        self.sub = sub
        self.diag = diag
        self.sup = sup
        self.pinned = pinned

    def apply(self, w: np.ndarray) -> np.ndarray:
        out = self.diag * w
        out[:-1] += self.sup[:-1] * w[1:]
        out[1:] += self.sub[1:] * w[:-1]
        return out

    def step(self, w: np.ndarray, theta: float, dt: float) -> np.ndarray:
        """Solve (I - theta dt L) x = (I + (1-theta) dt L) w, pinned rows -> 0."""
        if theta < 1.0:
            rhs = w + (1.0 - theta) * dt * self.apply(w)
        else:
            rhs = w.copy()
        n = self.grid.nodes
        ab = np.zeros((3, n))
        ab[0, 1:] = -theta * dt * self.sup[:-1]
        ab[1, :] = 1.0 - theta * dt * self.diag
        ab[2, :-1] = -theta * dt * self.sub[1:]
        if self.pinned.any():
            idx = np.nonzero(self.pinned)[0]
            ab[1, idx] = 1.0
            rhs[idx] = 0.0
            for i in idx:
                if i + 1 < n:
                    ab[0, i + 1] = 0.0
                if i - 1 >= 0:
                    ab[2, i - 1] = 0.0
        try:
            x = solve_banded((1, 1), ab, rhs)
        except np.linalg.LinAlgError as exc:
            raise NumericsError(f"tridiagonal solve failed: {exc}") from exc
        # theta < 1 can undershoot slightly; fractional powers need >= 0
        return np.maximum(x, 0.0)


_Reaction = Callable[[Sequence[np.ndarray], float], list[np.ndarray]]


def _system_reaction(pair: PowerPair, floor: float) -> _Reaction:
    def update(halves, dt):
        u, v = halves
        u_new = u / (1.0 + dt * v**pair.p / np.maximum(u, floor))
        v_new = v / (1.0 + dt * u**pair.q / np.maximum(v, floor))
        return [np.maximum(u_new, 0.0), np.maximum(v_new, 0.0)]

    return update


def _scalar_reaction(big_q: float, floor: float) -> _Reaction:
    def update(halves, dt):
        (w,) = halves
        w_new = w / (1.0 + dt * w**big_q / np.maximum(w, floor))
        return [np.maximum(w_new, 0.0)]

    return update


def _advance(
    components: list[np.ndarray],
    dt: float,
    op: _Diffusion,
    theta: float,
    reaction: _Reaction | None,
) -> list[np.ndarray]:
    halves = [op.step(w, theta, dt) for w in components]
    if reaction is None:
        return halves
    return reaction(halves, dt)


def step_imex(state: State, dt: float, config: SolverConfig) -> State:
    """One diffusion + absorption step of the coupled system."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if config.pair is None:
        raise ValueError("config.pair is required for the coupled system")
    if state.v is None:
        raise ValueError("coupled step needs both components")
    op = _Diffusion(state.u.grid, config.bc)
    reaction = _system_reaction(config.pair, config.absorption_floor)
    u, v = _advance([state.u.values, state.v.values], dt, op, config.theta_scheme, reaction)
    if not (np.isfinite(u).all() and np.isfinite(v).all()):
        raise NonFiniteState(f"non-finite values after step from t={state.t}")
    grid = state.u.grid
    return State(state.t + dt, Field(grid, u), Field(grid, v))


def _error(a: list[np.ndarray], b: list[np.ndarray]) -> float:
    err = 0.0
    for x, y in zip(a, b):
        scale = 1.0 + float(np.max(np.abs(y)))
        err = max(err, float(np.max(np.abs(x - y))) / scale)
    return err


def _integrate(
    components: list[np.ndarray],
    grid: Grid,
    config: SolverConfig,
    output_times: Sequence[float],
    reaction: _Reaction | None,
    scalar: bool,
) -> Trajectory:
    times = [float(t) for t in output_times]
    if not times:
        raise ValueError("need at least one output time")
    if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        raise ValueError("output times must be strictly increasing")
    if times[0] <= config.t_start or times[-1] > config.t_end * (1 + 1e-12):
        raise ValueError("output times must lie in (t_start, t_end]")
    for w in components:
        if np.any(w < 0):
            raise ValueError("initial data must be nonnegative")
        if not np.isfinite(w).all():
            raise ValueError("initial data must be finite")

    op = _Diffusion(grid, config.bc)
    theta = config.theta_scheme
    tol = config.tol_step

    def snapshot(t, comps):
        if scalar:
            return State(t, Field(grid, comps[0]))
        return State(t, Field(grid, comps[0]), Field(grid, comps[1]))

    state = [w.copy() for w in components]
    t = config.t_start
    dt_ctrl = config.dt_init
    states: list[State] = []
    log: list[StepRecord] = []

    for t_out in times:
        while t < t_out - 1e-13 * max(1.0, abs(t_out)):
            dt_try = min(dt_ctrl, t_out - t)
            retries = 0
            while True:
                full = _advance(state, dt_try, op, theta, reaction)
                half = _advance(state, 0.5 * dt_try, op, theta, reaction)
                two_half = _advance(half, 0.5 * dt_try, op, theta, reaction)
                err = _error(full, two_half)
                if np.isfinite(err) and err <= tol:
                    break
                dt_try *= 0.5
                retries += 1
                if dt_try < config.dt_min:
                    raise StepSizeUnderflow(
                        f"dt fell below dt_min={config.dt_min} at t={t:.6g}"
                    )
            state = two_half
            for w in state:
                if not np.isfinite(w).all():
                    raise NonFiniteState(f"non-finite state at t={t + dt_try:.6g}")
            t += dt_try
            log.append(StepRecord(t, dt_try, retries))
            if retries:
                dt_ctrl = dt_try
            elif err < 0.25 * tol:
                dt_ctrl = max(dt_ctrl, 2.0 * dt_try)
        t = t_out
        states.append(snapshot(t, state))

    return Trajectory(states=states, steps=log)


def solve(
    ic_u: Field,
    ic_v: Field,
    config: SolverConfig,
    output_times: Sequence[float],
) -> Trajectory:
    """Integrate the coupled system from nonnegative initial fields."""
    if config.pair is None:
        raise ValueError("config.pair is required for the coupled system")
    if not ic_u.grid.compatible(ic_v.grid):
        raise ValueError("initial fields live on different grids")
    reaction = _system_reaction(config.pair, config.absorption_floor)
    return _integrate(
        [ic_u.values, ic_v.values], ic_u.grid, config, output_times, reaction, scalar=False
    )


def heat_solve(ic: Field, config: SolverConfig, output_times: Sequence[float]) -> Trajectory:
    """Integrate the pure heat equation (absorption removed)."""
    return _integrate([ic.values], ic.grid, config, output_times, None, scalar=True)


def scalar_solve(
    ic: Field, big_q: float, config: SolverConfig, output_times: Sequence[float]
) -> Trajectory:
    """Integrate the scalar equation U_t - Lap(U) + U^Q = 0."""
    if big_q <= 0:
        raise ValueError(f"Q must be positive, got {big_q}")
    reaction = _scalar_reaction(big_q, config.absorption_floor)
    return _integrate([ic.values], ic.grid, config, output_times, reaction, scalar=True)


def residual_of(
    u_of_t: Callable[[float], Field],
    v_of_t: Callable[[float], Field],
    pair: PowerPair,
    grid: Grid,
    bc: BoundaryCondition,
    t: float,
    dt_probe: float,
) -> tuple[Field, Field]:
    """Discrete residuals of the system on a pair of time-dependent fields.

    r_u = (u(t+dt) - u(t-dt)) / (2 dt) - Lap(u(t)) + v(t)**p and the
    symmetric r_v.  Used to verify exact solutions against the discrete
    operator; boundary nodes carry the ghost convention of `bc` and should
    be excluded when the probed fields do not satisfy that condition.
    """
    if dt_probe <= 0:
        raise ValueError("dt_probe must be positive")
    u0, v0 = u_of_t(t), v_of_t(t)
    du = (u_of_t(t + dt_probe).values - u_of_t(t - dt_probe).values) / (2.0 * dt_probe)
    dv = (v_of_t(t + dt_probe).values - v_of_t(t - dt_probe).values) / (2.0 * dt_probe)
    r_u = du - laplacian_apply(u0, bc).values + v0.values**pair.p
    r_v = dv - laplacian_apply(v0, bc).values + u0.values**pair.q
    return Field(grid, r_u), Field(grid, r_v)


def trajectory_to_csv(traj: Trajectory, path) -> None:
    """Long-format CSV with one row per (snapshot, node)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,node_coordinate,u,v\n")
        coords = traj.grid.coords
        for s in traj.states:
            v_vals = s.v.values if s.v is not None else None
            for i, x in enumerate(coords):
                v_txt = repr(float(v_vals[i])) if v_vals is not None else ""
                fh.write(f"{float(s.t)!r},{float(x)!r},{float(s.u.values[i])!r},{v_txt}\n")


def steps_to_csv(traj: Trajectory, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,dt,retries\n")
        for rec in traj.steps:
            fh.write(f"{float(rec.t)!r},{float(rec.dt)!r},{rec.retries}\n")
