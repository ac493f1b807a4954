"""Explicit forward-Euler march from the Rankine-Hugoniot step to steady state."""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field, replace

import numba
import numpy as np

from .gas import GasSpec, get_gas, reference_viscosity
from .jump import downstream_state, upstream_state
from .operator import FlowField, InvalidStateError, Model, primitives, spatial_residual

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    Ma: float
    gas: GasSpec
    model: Model = Model.QGD
    n_x: int = 1200
    h_x: float = 0.25
    a: float = 0.001
    eps: float = 1e-3
    max_steps: int = 50_000_000
    residual_log_stride: int = 1000
    # residual rising this far above its running minimum counts as divergence
    divergence_factor: float = 1e6

    def __post_init__(self):
        if isinstance(self.gas, str):
            object.__setattr__(self, "gas", get_gas(self.gas))
        object.__setattr__(self, "model", Model.parse(self.model))
        if self.Ma < 1:
            raise ValueError(f"Mach number must be >= 1, got {self.Ma}")
        if self.n_x < 5:
            raise ValueError("n_x must be at least 5")
        if not self.h_x > 0:
            raise ValueError("h_x must be positive")
        if not 0 < self.a <= 1:
            raise ValueError("a must lie in (0, 1]")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.max_steps < 1 or self.residual_log_stride < 1:
            raise ValueError("max_steps and residual_log_stride must be positive")

    def replace(self, **changes) -> "SolverConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["gas"] = self.gas.to_dict()
        d["model"] = self.model.value
        return d


@dataclass
class RunStats:
    steps_taken: int
    converged: bool
    final_residual: float
    residual_history: list = field(default_factory=list)  # (step, max drho/dt)
    wall_time: float = 0.0
    sim_time: float = 0.0


@dataclass
class ShockSolution:
    field: FlowField
    cfg: SolverConfig
    stats: RunStats


class DivergenceError(RuntimeError):
    """The march produced a nonphysical or nonfinite state."""

    def __init__(self, message: str, step: int, snapshot: FlowField | None = None,
                 stats: RunStats | None = None):
        super().__init__(message)
        self.step = step
        self.snapshot = snapshot
        self.stats = stats


def init_step_field(cfg: SolverConfig) -> FlowField:
    """Upstream state for x < 0, downstream state for x >= 0."""
    g = cfg.gas.gamma
    x0 = -0.5 * cfg.n_x * cfg.h_x
    x = x0 + cfg.h_x * np.arange(cfg.n_x)
    left = np.array(upstream_state(cfg.Ma, g).conserved(g))
    right = np.array(downstream_state(cfg.Ma, g).conserved(g))
    q = np.where(x[:, None] < 0, left, right)
    return FlowField(cfg.h_x, q[:, 0].copy(), q[:, 1].copy(), q[:, 2].copy(), x0)


def stable_time_step(field: FlowField, cfg: SolverConfig) -> float:
    prim = primitives(field, cfg.gas.gamma)
    return cfg.a * field.h_x / float(np.max(np.sqrt(prim.T) + np.abs(prim.u)))


def advance_euler(field: FlowField, cfg: SolverConfig, step: int = 0):
    """One forward-Euler step; returns (new field, max|rho_new - rho|/h_t).

    The two end nodes are never modified.
    """
    ht = stable_time_step(field, cfg)
    r_rho, r_mom, r_E = spatial_residual(field, cfg.gas, cfg.model)
    new = field.copy()
    new.rho[1:-1] += ht * r_rho
    new.mom[1:-1] += ht * r_mom
    new.energy[1:-1] += ht * r_E
    if not (np.all(np.isfinite(new.rho)) and np.all(np.isfinite(new.mom))
            and np.all(np.isfinite(new.energy))):
        raise DivergenceError(f"nonfinite state after step {step}", step, field)
    rate = float(np.max(np.abs(new.rho[1:-1] - field.rho[1:-1]))) / ht
    return new, rate


# status codes returned by the compiled kernel
_RUNNING, _CONVERGED, _INVALID, _NONFINITE = 0, 1, 2, 3


@numba.njit(cache=True)
def _march_kernel(rho, mom, E, u, p, T, H, F1, F2, F3,
                  gamma, omega, prandtl, schmidt, gas_constant, eta_ref, tau_factor,
                  h, a, eps, nsteps, out):
    """Run up to ``nsteps`` Euler steps in place.

    Writes (steps done, last rate, simulated time, offending node) into ``out``
    and returns a status code.  Mirrors ``advance_euler`` operation by operation.
    """
    n = rho.shape[0]
    g = gamma
    gm1 = g - 1.0
    kfac = g * gas_constant / (gm1 * prandtl)
    rate = 0.0
    sim_time = 0.0
    for step in range(nsteps):
        smax = 0.0
        for i in range(n):
            r = rho[i]
            ui = mom[i] / r
            pi_ = gm1 * (E[i] - 0.5 * r * ui * ui)
            if not (r > 0.0 and pi_ > 0.0):
                out[0] = step
                out[1] = rate
                out[2] = sim_time
                out[3] = i
                return _INVALID
            u[i] = ui
            p[i] = pi_
            T[i] = g * pi_ / r
            H[i] = (E[i] + pi_) / r
            s = math.sqrt(T[i]) + abs(ui)
            if s > smax:
                smax = s
        ht = a * h / smax
        for i in range(n - 1):
            j = i + 1
            rf = 0.5 * (rho[j] + rho[i])
            uf = 0.5 * (u[j] + u[i])
            pf = 0.5 * (p[j] + p[i])
            Tf = 0.5 * (T[j] + T[i])
            Hf = 0.5 * (H[j] + H[i])
            dflux = ((rho[j] * u[j] * u[j] + p[j]) - (rho[i] * u[i] * u[i] + p[i])) / h
            du = (u[j] - u[i]) / h
            dp = (p[j] - p[i]) / h
            dT = (T[j] - T[i]) / h
            dp_rho = (p[j] / rho[j] - p[i] / rho[i]) / h
            d_inv_rho = (1.0 / rho[j] - 1.0 / rho[i]) / h
            eta = eta_ref * Tf ** omega
            kappa = g * gas_constant * eta / (gm1 * prandtl)
            tau = tau_factor * eta / (pf * schmidt)
            w = tau / rf * dflux
            jm = rf * (uf - w)
            Pi = (4.0 / 3.0) * eta * du + uf * tau * (rf * uf * du + dp) + tau * (uf * dp + g * pf * du)
            q = -kappa * dT - tau * rf * uf * (uf / gm1 * dp_rho + pf * uf * d_inv_rho)
            F1[i] = jm
            F2[i] = jm * uf + pf - Pi
            F3[i] = jm * Hf + q - Pi * uf
        rate = 0.0
        finite = True
        for i in range(1, n - 1):
            old = rho[i]
            rho[i] = old + ht * (-(F1[i] - F1[i - 1]) / h)
            mom[i] = mom[i] + ht * (-(F2[i] - F2[i - 1]) / h)
            E[i] = E[i] + ht * (-(F3[i] - F3[i - 1]) / h)
            d = abs(rho[i] - old) / ht
            if not (d <= rate):
                rate = d
            if not (math.isfinite(rho[i]) and math.isfinite(mom[i]) and math.isfinite(E[i])):
                finite = False
        sim_time += ht
        if not finite:
            out[0] = step + 1
            out[1] = rate
            out[2] = sim_time
            out[3] = -1
            return _NONFINITE
        if rate < eps:
            out[0] = step + 1
            out[1] = rate
            out[2] = sim_time
            out[3] = -1
            return _CONVERGED
    out[0] = nsteps
    out[1] = rate
    out[2] = sim_time
    out[3] = -1
    return _RUNNING


def run_to_steady(cfg: SolverConfig, initial: FlowField | None = None,
                  on_progress=None) -> ShockSolution:
    """March until max|drho|/h_t < eps or the step budget runs out.

    Running out of steps is reported through ``stats.converged``; a
    nonphysical, nonfinite or runaway state raises ``DivergenceError``.
    ``on_progress(stats, field)`` is called after every logged chunk.
    """
    fld = init_step_field(cfg) if initial is None else initial.copy()
    if fld.n != cfg.n_x:
        raise ValueError("initial field does not match cfg.n_x")
    gas = cfg.gas
    n = fld.n
    work = [np.empty(n) for _ in range(4)]
    fluxes = [np.empty(n - 1) for _ in range(3)]
    out = np.zeros(4)
    tau_factor = 0.0 if cfg.model is Model.NS else 1.0
    stats = RunStats(0, False, math.inf)
    best = math.inf
    t0 = time.perf_counter()
    while stats.steps_taken < cfg.max_steps:
        chunk = min(cfg.residual_log_stride, cfg.max_steps - stats.steps_taken)
        status = _march_kernel(
            fld.rho, fld.mom, fld.energy, *work, *fluxes,
            gas.gamma, gas.omega, gas.prandtl, gas.schmidt, gas.gas_constant,
            reference_viscosity(gas), tau_factor,
            fld.h_x, cfg.a, cfg.eps, chunk, out,
        )
        stats.steps_taken += int(out[0])
        stats.sim_time += out[2]
        stats.final_residual = float(out[1])
        stats.wall_time = time.perf_counter() - t0
        stats.residual_history.append((stats.steps_taken, stats.final_residual))
        if on_progress is not None:
            on_progress(stats, fld)
        if status == _INVALID:
            raise DivergenceError(
                f"nonpositive density or pressure at node {int(out[3])} "
                f"before step {stats.steps_taken + 1}", stats.steps_taken, fld, stats)
        if status == _NONFINITE:
            raise DivergenceError(f"nonfinite state at step {stats.steps_taken}",
                                  stats.steps_taken, fld, stats)
        if status == _CONVERGED:
            stats.converged = True
            break
        best = min(best, stats.final_residual)
        if stats.final_residual > cfg.divergence_factor * best:
            raise DivergenceError(
                f"residual grew from {best:.3g} to {stats.final_residual:.3g} "
                f"by step {stats.steps_taken}", stats.steps_taken, fld, stats)
    log.info("%s %s Ma=%g: %d steps, converged=%s, residual=%.3g, %.1fs",
             gas.name, cfg.model.value, cfg.Ma, stats.steps_taken, stats.converged,
             stats.final_residual, stats.wall_time)
    return ShockSolution(fld, cfg, stats)
