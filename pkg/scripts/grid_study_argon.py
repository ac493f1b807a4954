"""Argon Ma=10 QGD on the baseline grid (1200 x 0.25) and on a twice finer one.

Usage: python scripts/grid_study_argon.py [--a 0.005] [--out grid_study.csv]
"""
import argparse
import logging

from qgdshock.cli import grid_study_cmd
from qgdshock.gas import ARGON
from qgdshock.marcher import SolverConfig

PUBLISHED = (0.220253, 0.2211561)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--a", type=float, default=0.005)
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--out", default="grid_study.csv")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO)
    base = SolverConfig(Ma=10, gas=ARGON, a=args.a, residual_log_stride=10_000)
    _, rows = grid_study_cmd(base, args.levels, args.out)
    for r, ref in zip(rows, PUBLISHED + (None,) * args.levels):
        extra = f"  published {ref}" if ref else ""
        print(f"h_x={r['h_x']:<6} n_x={r['n_x']:<5} l/d={r['recip_thickness']}"
              f"  change={r['rel_change']}  steps={r['steps']}{extra}")


if __name__ == "__main__":
    main()
