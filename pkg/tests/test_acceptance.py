"""Exit criteria for the solver, one test per criterion.

The full shock runs take minutes each (single core); they are cached per
session so criteria that share a run do not repeat it.  Every criterion
prints a PASS/FAIL line in the terminal summary.
"""
from __future__ import annotations

import functools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgdshock.diagnostics import (
    flux_spread,
    normalized_profiles,
    oscillation_amplitude,
    reciprocal_thickness,
)
from qgdshock.gas import (
    ARGON,
    NITROGEN,
    GasSpec,
    collision_number,
    get_gas,
    mean_free_path,
    omega_factor,
    reference_viscosity,
)
from qgdshock.jump import downstream_state, jump_flux_residual, upstream_state
from qgdshock.marcher import DivergenceError, SolverConfig, run_to_steady
from qgdshock.operator import FlowField, Model, qgd_node_terms, spatial_residual

from .conftest import record

pytestmark = pytest.mark.slow

# largest a that survives the start-up transient at Ma=10 on the baseline grid
A_BASE = 0.005
# NS pairs use the same a: the NS zigzag growth seen at Ma=9 is the same at
# a=0.001 and a=0.002, so a smaller step only costs time
A_PAIR = A_BASE
NS_BUDGET = 20_000_000


@functools.lru_cache(maxsize=None)
def solve(gas: str, Ma: float, model: str, a: float, n_x: int = 1200, h_x: float = 0.25,
          max_steps: int = 50_000_000):
    cfg = SolverConfig(Ma=Ma, gas=get_gas(gas), model=model, a=a, n_x=n_x, h_x=h_x,
                       max_steps=max_steps, residual_log_stride=20_000)
    return run_to_steady(cfg)


@functools.lru_cache(maxsize=None)
def attempt(gas: str, Ma: float, model: str, a: float, max_steps: int):
    """(solution or None, note) for runs that may fail to converge or diverge."""
    try:
        sol = solve(gas, Ma, model, a, max_steps=max_steps)
    except DivergenceError as exc:
        return None, f"diverged at step {exc.step}"
    if not sol.stats.converged:
        return sol, f"not converged after {sol.stats.steps_taken} steps (residual {sol.stats.final_residual:.2e})"
    return sol, f"converged in {sol.stats.steps_taken} steps"


def rel(a, b):
    return abs(a - b) / abs(b)


def test_c1_grid_study_reproduction():
    base = reciprocal_thickness(solve("argon", 10.0, "qgd", A_BASE))
    half_a = reciprocal_thickness(solve("argon", 10.0, "qgd", A_BASE / 2))
    fine = reciprocal_thickness(solve("argon", 10.0, "qgd", A_BASE / 2, 2400, 0.125))
    checks = {
        "baseline vs 0.220253 (2%)": rel(base, 0.220253) <= 0.02,
        "fine vs 0.2211561 (2%)": rel(fine, 0.2211561) <= 0.02,
        "baseline vs fine (<1%)": rel(fine, base) < 0.01,
        "halving a (<0.1%)": rel(half_a, base) < 0.001,
    }
    ok = all(checks.values())
    record(1, ok, f"baseline={base:.6f} fine={fine:.6f} grid change={100 * rel(fine, base):.3f}% "
                  f"a-halving change={100 * rel(half_a, base):.4f}%")
    assert ok, checks


@pytest.mark.parametrize("Ma", [2.0, 5.0, 9.0])
def test_c2_ns_qgd_proximity_argon(Ma):
    q = solve("argon", Ma, "qgd", A_PAIR)
    n, note = attempt("argon", Ma, "ns", A_PAIR, NS_BUDGET)
    ok = q.stats.converged and n is not None and n.stats.converged
    detail = f"Ma={Ma:g} NS {note}"
    if ok:
        lq, ln = reciprocal_thickness(q), reciprocal_thickness(n)
        ok = rel(ln, lq) < 0.10
        detail += f"; l/d qgd={lq:.5f} ns={ln:.5f} diff={100 * rel(ln, lq):.2f}%"
    record(f"2 (Ma={Ma:g})", ok, detail)
    assert ok, detail


def _ma9_pair():
    """QGD at Ma=9 and an NS run capped at three times the QGD step count."""
    q = solve("argon", 9.0, "qgd", A_PAIR)
    n, note = attempt("argon", 9.0, "ns", A_PAIR, 3 * q.stats.steps_taken)
    return q, n, note


def test_c3_convergence_cost_ordering():
    # NS still running at the cap already proves steps(NS) >= 3 steps(QGD);
    # the detail line says whether the ratio is exact or a lower bound
    q, n, note = _ma9_pair()
    ok = n is not None
    if ok and n.stats.converged:
        ratio = n.stats.steps_taken / q.stats.steps_taken
        ok = ratio >= 3
        detail = f"ratio={ratio:.2f}"
    elif ok:
        detail = "ratio >= 3 (lower bound, NS not converged at the cap)"
    else:
        detail = "NS diverged before the cap, cost undefined"
    record(3, ok, f"steps qgd={q.stats.steps_taken}; NS {note}; {detail}")
    assert ok, detail


def test_c4_oscillation_signature():
    q, n, note = _ma9_pair()
    if n is None:
        record(4, False, f"NS {note}")
        pytest.fail(note)
    oq = oscillation_amplitude(q)
    on = oscillation_amplitude(n, allow_unconverged=True)
    jump = q.field.rho[-1] - q.field.rho[0]
    checks = [on.amplitude >= 5 * oq.amplitude, on.alternation >= 0.5, oq.amplitude < 1e-3 * jump]
    ok = all(checks)
    record(4, ok, f"amplitude ns={on.amplitude:.3e} qgd={oq.amplitude:.3e} "
                  f"(x{on.amplitude / oq.amplitude:.1f}); ns alternation={on.alternation:.2f}; "
                  f"qgd/jump={oq.amplitude / jump:.2e}; NS field {note}")
    assert ok, checks


def _rh_relative(Ma, g):
    up, down = upstream_state(Ma, g), downstream_state(Ma, g)
    E = 0.5 * Ma**2 + up.p / (g - 1)
    scale = (Ma, Ma**2 + up.p, (E + up.p) * Ma)
    return max(abs(r) / s for r, s in zip(jump_flux_residual(up, down, g), scale))


@settings(max_examples=300, deadline=None)
@given(st.floats(1.0, 20.0), st.sampled_from([5 / 3, 7 / 5]))
def test_c5a_rankine_hugoniot_property(Ma, g):
    assert _rh_relative(Ma, g) <= 1e-12


def test_c5_rh_grid_and_steady_flux_constancy():
    grid = [_rh_relative(Ma, g) for Ma in np.linspace(1, 20, 191) for g in (5 / 3, 7 / 5)]
    rh_ok = max(grid) <= 1e-12
    # telescoping bound: the mass-flux spread is at most (domain length) * eps;
    # momentum and energy are held to the same relative bound
    spreads = {}
    flux_ok = True
    for key in [("argon", 10.0, "qgd", A_BASE), ("argon", 9.0, "qgd", A_PAIR),
                ("nitrogen", 6.0, "qgd", A_BASE)]:
        sol = solve(*key)
        bound = sol.cfg.n_x * sol.cfg.h_x * sol.cfg.eps
        s = flux_spread(sol)
        spreads[key] = s
        flux_ok &= sol.stats.converged and all(v <= bound for v in s)
    ok = rh_ok and flux_ok
    worst = max(max(s) for s in spreads.values())
    record(5, ok, f"max RH residual={max(grid):.2e}; worst steady flux spread={worst:.2e} "
                  f"(bound {1200 * 0.25 * 1e-3:.2f})")
    assert ok


def test_c6_reduction_identity():
    rng = np.random.default_rng(6)
    ok = True
    for trial in range(200):
        gas = (ARGON, NITROGEN)[trial % 2]
        n = int(rng.integers(5, 300))
        f = FlowField.from_primitive(0.25, rng.uniform(0.3, 5, n), rng.uniform(-10, 10, n),
                                     rng.uniform(0.1, 50, n), gas.gamma)
        a = spatial_residual(f, gas, Model.NS)
        b = spatial_residual(f, gas, Model.QGD, force_tau_zero=True)
        ok &= all(np.array_equal(x, y) for x, y in zip(a, b))
        ta, tb = qgd_node_terms(f, gas, Model.NS), qgd_node_terms(f, gas, Model.QGD, True)
        ok &= all(np.array_equal(getattr(ta, k), getattr(tb, k)) for k in ("w", "jm", "Pi_xx", "q"))
    record(6, ok, "200 randomized fields, residuals and node terms bitwise equal")
    assert ok


def test_c7_closure_oracles():
    import math

    from scipy.optimize import brentq

    hs = GasSpec("hs", 5 / 3, 0.5, 2 / 3, 0.75)
    errs = []
    for w in (0.5, 0.81, 0.74, 0.66):
        errs.append(rel(omega_factor(w), 30 / ((7 - 2 * w) * (5 - 2 * w))))
    errs.append(rel(omega_factor(0.81), 1.64976573326587633))
    errs.append(rel(omega_factor(0.74), 1.54397233201581026))
    for gas, R in ((ARGON, 1.0), (hs, 1.0), (ARGON, ARGON.gas_constant), (NITROGEN, NITROGEN.gas_constant)):
        Om = omega_factor(gas.omega)
        root = brentq(lambda e: 4 * e / (Om * math.sqrt(2 * math.pi * R)) - 1, 1e-3, 10, xtol=1e-16)
        errs.append(rel(reference_viscosity(gas, gas_constant=R), root))
    errs.append(rel(reference_viscosity(ARGON, gas_constant=1.0), 1.03383735838039774))
    errs.append(rel(reference_viscosity(hs, gas_constant=1.0), 0.78332133582218766))
    errs.append(rel(collision_number(NITROGEN, 273.0), 5.12045846305032255))
    mfp = [abs(mean_free_path(g, reference_viscosity(g), 1.0, 1.0) - 1.0)
           for g in (ARGON, get_gas("helium"), NITROGEN)]
    ok = max(errs) <= 1e-9 and max(mfp) <= 4 * np.finfo(float).eps
    record(7, ok, f"max relative error={max(errs):.1e}; mean-free-path closure error={max(mfp):.1e}")
    assert ok


def test_c8_nitrogen_qgd_converges():
    results = {}
    for Ma in (2.0, 4.0, 6.0, 8.0, 10.0):
        try:
            sol = solve("nitrogen", Ma, "qgd", A_BASE)
            results[Ma] = (sol.stats.converged, sol.stats.steps_taken, reciprocal_thickness(sol)
                           if sol.stats.converged else None)
        except DivergenceError as exc:
            results[Ma] = (False, exc.step, None)
    ok = all(v[0] for v in results.values())
    record(8, ok, "; ".join(f"Ma={m:g}: l/d={v[2]:.4f} in {v[1]} steps" if v[0] else f"Ma={m:g}: FAILED"
                            for m, v in results.items()))
    assert ok


def test_c8_observation_nitrogen_ns_high_mach():
    """Non-gating: record what NS does for nitrogen at Ma=8 within a step budget."""
    try:
        sol = solve("nitrogen", 8.0, "ns", A_BASE, max_steps=5_000_000)
        note = (f"converged in {sol.stats.steps_taken} steps" if sol.stats.converged else
                f"not converged after {sol.stats.steps_taken} steps "
                f"(residual {sol.stats.final_residual:.3e})")
    except DivergenceError as exc:
        note = f"diverged at step {exc.step}"
    record("8 (observation, non-gating)", True, f"nitrogen NS Ma=8: {note}")


def test_c9_profile_normalization():
    keys = [("argon", 10.0, "qgd", A_BASE), ("argon", 2.0, "qgd", A_PAIR),
            ("argon", 2.0, "ns", A_PAIR), ("nitrogen", 4.0, "qgd", A_BASE)]
    worst_plateau, worst_center = 0.0, 0.0
    missing, per_case = [], []
    for key in keys:
        sol = attempt(*key, NS_BUDGET)[0] if key[2] == "ns" else solve(*key)
        if sol is None or not sol.stats.converged:
            missing.append(key)
            continue
        t = normalized_profiles(sol)
        # plateau rows: the outer 5% on each side, not just the fixed end nodes
        k = len(t.x) // 20
        up = np.array([t.f_rho[:k], t.f_T[:k], t.f_u[:k] - 1])
        down = np.array([t.f_rho[-k:] - 1, t.f_T[-k:] - 1, t.f_u[-k:]])
        err = max(np.max(np.abs(up)), np.max(np.abs(down)))
        per_case.append(f"{key[0]} {key[2]} Ma={key[1]:g}: {err:.1e}")
        worst_plateau = max(worst_plateau, err)
        worst_center = max(worst_center, abs(np.interp(0.0, t.x, t.f_rho) - 0.5))
    ok = not missing and worst_plateau <= 0.01 and worst_center <= 1e-12
    record(9, ok, f"max plateau error={worst_plateau:.2e} ({', '.join(per_case)}); "
                  f"f_rho(0)-0.5={worst_center:.1e}"
                  + (f"; unconverged: {missing}" if missing else ""))
    assert ok
