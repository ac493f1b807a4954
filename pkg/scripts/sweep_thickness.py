"""Reciprocal shock thickness versus Mach number for one gas, NS and QGD.

Usage: python scripts/sweep_thickness.py argon [--a 0.005] [--jobs 4]

Runs that exhaust the step budget are kept with an empty thickness.
"""
import argparse
import logging

from qgdshock.cli import sweep_cmd
from qgdshock.gas import get_gas
from qgdshock.marcher import SolverConfig

MACH = [1.5, 2, 3, 4, 5, 6, 7, 8, 9, 10]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("gas")
    p.add_argument("--a", type=float, default=0.005)
    p.add_argument("--max-steps", type=float, default=2e7)
    p.add_argument("--models", default="qgd,ns")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO)
    base = SolverConfig(Ma=MACH[0], gas=get_gas(args.gas), a=args.a,
                        max_steps=int(args.max_steps), residual_log_stride=10_000)
    out = args.out or f"sweep_{args.gas}.csv"
    _, rows = sweep_cmd(base, MACH, args.models.split(","), out, args.jobs)
    for r in rows:
        print(f"{r['model']:>3} Ma={r['Ma']:<4} l/d={r['recip_thickness']} steps={r['steps']} {r['status']}")


if __name__ == "__main__":
    main()
