"""Observables extracted from a steady shock: reciprocal thickness,
normalized profiles, grid-scale oscillations, and run-cost summaries."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .gas import mean_free_path, viscosity
from .marcher import ShockSolution
from .operator import Model, face_fluxes, primitives, qgd_node_terms


class NotConvergedError(ValueError):
    pass


def _require_converged(sol: ShockSolution) -> None:
    if not sol.stats.converged:
        raise NotConvergedError(
            f"{sol.cfg.gas.name} {sol.cfg.model.value} Ma={sol.cfg.Ma} did not converge"
        )


def max_density_slope(rho, h_x: float, rho1: float, rho2: float) -> float:
    """max_i (rho[i+1] - rho[i-1]) / (2h) divided by the density jump."""
    rho = np.asarray(rho, dtype=float)
    return float(np.max((rho[2:] - rho[:-2]) / (2.0 * h_x)) / (rho2 - rho1))


def reciprocal_thickness(sol: ShockSolution) -> float:
    """Upstream mean free path over the maximum-slope density thickness."""
    _require_converged(sol)
    f = sol.field
    rho1, rho2 = f.rho[0], f.rho[-1]
    T1 = primitives(f, sol.cfg.gas.gamma).T[0]
    lam1 = mean_free_path(sol.cfg.gas, viscosity(sol.cfg.gas, T1), rho1, T1)
    return lam1 * max_density_slope(f.rho, f.h_x, rho1, rho2)


def shock_center(x, rho) -> float:
    """Position where the normalized density crosses 1/2.

    Uses the crossing closest to the steepest point, interpolating linearly
    between the bracketing nodes.
    """
    x = np.asarray(x, dtype=float)
    rho = np.asarray(rho, dtype=float)
    f = (rho - rho[0]) / (rho[-1] - rho[0])
    crossings = np.flatnonzero((f[:-1] - 0.5) * (f[1:] - 0.5) <= 0)
    crossings = crossings[f[crossings] != f[crossings + 1]]
    if crossings.size == 0:
        raise ValueError("density never crosses the half-jump level")
    steep = np.argmax(np.abs(np.diff(f)))
    i = crossings[np.argmin(np.abs(crossings - steep))]
    s = (0.5 - f[i]) / (f[i + 1] - f[i])
    return float(x[i] + s * (x[i + 1] - x[i]))


PROFILE_COLUMNS = ("x", "rho", "u", "p", "T", "f_rho", "f_u", "f_T", "jm", "Pi_xx", "q")


@dataclass
class ProfileTable:
    x: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    p: np.ndarray
    T: np.ndarray
    f_rho: np.ndarray
    f_u: np.ndarray
    f_T: np.ndarray
    jm: np.ndarray
    Pi_xx: np.ndarray
    q: np.ndarray

    @property
    def overshoot(self) -> bool:
        """True when f_rho leaves [-0.05, 1.05]."""
        return bool(np.any(self.f_rho < -0.05) or np.any(self.f_rho > 1.05))

    def rows(self):
        cols = [getattr(self, c) for c in PROFILE_COLUMNS]
        return zip(*cols)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(PROFILE_COLUMNS)
            for row in self.rows():
                w.writerow([repr(float(v)) for v in row])

    @classmethod
    def read_csv(cls, path) -> "ProfileTable":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(*(data[:, k] for k in range(len(PROFILE_COLUMNS))))



def normalized_profiles(sol: ShockSolution) -> ProfileTable:
    """Profiles normalized between the boundary states, centered at f_rho = 1/2."""
    f, gas = sol.field, sol.cfg.gas
    prim = primitives(f, gas.gamma)
    terms = qgd_node_terms(f, gas, sol.cfg.model)
    rho, u, T = f.rho, prim.u, prim.T
    f_rho = (rho - rho[0]) / (rho[-1] - rho[0])
    f_T = (T - T[0]) / (T[-1] - T[0])
    f_u = (u - u[-1]) / (u[0] - u[-1])
    x = f.x - shock_center(f.x, rho)
    return ProfileTable(x, rho.copy(), u, prim.p, T, f_rho, f_u, f_T,
                        terms.jm, terms.Pi_xx, terms.q)


@dataclass
class Oscillation:
    amplitude: float
    alternation: float  # fraction of window nodes where the slope flips sign


def zigzag(rho, lo: int, hi: int) -> Oscillation:
    """Node-period zigzag of ``rho`` over nodes lo..hi-1 (each needs both neighbours)."""
    rho = np.asarray(rho, dtype=float)
    lo, hi = max(lo, 1), min(hi, rho.shape[0] - 1)
    if hi - lo < 1:
        raise ValueError("oscillation window is empty")
    idx = np.arange(lo, hi)
    second = rho[idx] - 0.5 * (rho[idx - 1] + rho[idx + 1])
    back = rho[idx] - rho[idx - 1]
    fwd = rho[idx + 1] - rho[idx]
    return Oscillation(float(np.max(np.abs(second))), float(np.mean(back * fwd < 0)))


def oscillation_amplitude(sol: ShockSolution, window_offset: float = 10.0,
                          allow_unconverged: bool = False) -> Oscillation:
    """Zigzag behind the shock, from ``window_offset`` past the center to 5 nodes
    before the right boundary.

    Pass ``allow_unconverged=True`` to inspect a field that ran out of steps.
    """
    if not allow_unconverged:
        _require_converged(sol)
    f = sol.field
    xc = shock_center(f.x, f.rho)
    lo = int(np.searchsorted(f.x, xc + window_offset))
    return zigzag(f.rho, lo, f.n - 5)


def flux_spread(sol: ShockSolution):
    """Relative max-min spread of the mass, momentum and energy face fluxes.

    Each spread is scaled by the magnitude of the upstream flux of that
    quantity; a steady solution has all three (nearly) constant.
    """
    F = face_fluxes(sol.field, sol.cfg.gas, sol.cfg.model)
    return tuple(float((Fi.max() - Fi.min()) / abs(Fi[0])) for Fi in F)


REPORT_COLUMNS = ("gas", "Ma", "model", "steps", "converged", "recip_thickness",
                  "oscillation", "step_ratio")


def convergence_report(solutions) -> list[dict]:
    """One row per run; NS rows get steps(NS)/steps(QGD) for a matching QGD run."""
    if not solutions:
        raise ValueError("no solutions to report")
    rows = []
    for s in solutions:
        ok = s.stats.converged
        rows.append({
            "gas": s.cfg.gas.name,
            "Ma": s.cfg.Ma,
            "model": s.cfg.model.value,
            "steps": s.stats.steps_taken,
            "converged": ok,
            "recip_thickness": reciprocal_thickness(s) if ok else None,
            "oscillation": oscillation_amplitude(s).amplitude if ok else None,
            "step_ratio": None,
        })
    qgd_steps = {
        (r["gas"], r["Ma"]): r["steps"]
        for r in rows if r["model"] == Model.QGD.value and r["converged"]
    }
    for r in rows:
        key = (r["gas"], r["Ma"])
        if r["model"] == Model.NS.value and r["converged"] and key in qgd_steps:
            r["step_ratio"] = r["steps"] / qgd_steps[key]
    return rows
