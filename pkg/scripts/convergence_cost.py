"""NS versus QGD at identical settings: steps to steady state, thickness,
and the grid-scale density zigzag behind the shock.

Usage: python scripts/convergence_cost.py [--gas argon] [--Ma 9] [--a 0.005]
"""
import argparse
import logging

from qgdshock.diagnostics import convergence_report, oscillation_amplitude
from qgdshock.gas import get_gas
from qgdshock.marcher import DivergenceError, SolverConfig, run_to_steady


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--gas", default="argon")
    p.add_argument("--Ma", type=float, default=9.0)
    p.add_argument("--a", type=float, default=0.005)
    p.add_argument("--max-steps", type=float, default=2e7)
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO)
    sols = []
    for model in ("qgd", "ns"):
        cfg = SolverConfig(Ma=args.Ma, gas=get_gas(args.gas), model=model, a=args.a,
                           max_steps=int(args.max_steps), residual_log_stride=100_000)
        try:
            sols.append(run_to_steady(cfg))
        except DivergenceError as exc:
            print(f"{model}: diverged at step {exc.step}: {exc}")
    for row in convergence_report(sols):
        print(row)
    for s in sols:
        osc = oscillation_amplitude(s, allow_unconverged=True)
        state = "" if s.stats.converged else " (unconverged field)"
        print(f"{s.cfg.model.value}: zigzag amplitude {osc.amplitude:.3e}, "
              f"alternating over {100 * osc.alternation:.0f}% of the window{state}")


if __name__ == "__main__":
    main()
