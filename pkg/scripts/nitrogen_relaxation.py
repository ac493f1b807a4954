"""Rotational collision number and relaxation time across a nitrogen QGD shock.

The two-temperature system is not solved; Z and tau_r are evaluated on the
one-temperature profile as a diagnostic.

Usage: python scripts/nitrogen_relaxation.py [--Ma 6.1] [--out n2_relaxation.csv]
"""
import argparse
import csv

from qgdshock.diagnostics import normalized_profiles, reciprocal_thickness
from qgdshock.gas import NITROGEN, rotational_relaxation, transport_coefficients
from qgdshock.marcher import SolverConfig, run_to_steady


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--Ma", type=float, default=6.1)
    p.add_argument("--a", type=float, default=0.005)
    p.add_argument("--out", default="n2_relaxation.csv")
    args = p.parse_args()
    sol = run_to_steady(SolverConfig(Ma=args.Ma, gas=NITROGEN, a=args.a))
    prof = normalized_profiles(sol)
    _, _, tau = transport_coefficients(NITROGEN, prof.T, prof.p)
    Z, tau_c, tau_r = rotational_relaxation(NITROGEN, prof.T, tau)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "T", "f_rho", "Z", "tau_c", "tau_r"])
        for row in zip(prof.x, prof.T, prof.f_rho, Z, tau_c, tau_r):
            w.writerow([repr(float(v)) for v in row])
    print(f"l/d = {reciprocal_thickness(sol):.6f}; Z from {Z[0]:.3f} upstream "
          f"to {Z[-1]:.3f} downstream; written {args.out}")


if __name__ == "__main__":
    main()
