#!/usr/bin/env python3
"""Scan the shape parameter and tabulate radius-of-convergence estimates.

The a-sequence has the known radius min(rho, 1/rho)/2; the normal form and
invariant sequences are observed to share a strictly larger one.  Example:

    python3 scripts/radius_scan.py --kappas 1/4,1/2,1,3/2,2 --nmax 40
"""

import argparse
from fractions import Fraction

from eulertop.invariants import radius_analysis


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kappas", default="1/2,1,2", help="comma-separated rationals")
    parser.add_argument("--nmax", type=int, default=40)
    args = parser.parse_args()

    print(f"{'kappa':>8} {'a (known)':>10} {'a (est)':>10} {'bnf':>10} {'sigma':>10} {'bnf/a':>8}")
    for text in args.kappas.split(","):
        kappa = Fraction(text)
        reports = {r.name: r for r in radius_analysis(kappa, args.nmax, ("a", "bnf", "sigma"))}
        a, bnf, sigma = reports["a"], reports["bnf"], reports["sigma"]
        print(
            f"{text:>8} {a.theoretical:>10.6f} {a.extrapolated:>10.6f} "
            f"{bnf.extrapolated:>10.6f} {sigma.extrapolated:>10.6f} "
            f"{bnf.extrapolated / a.theoretical:>8.4f}"
        )


if __name__ == "__main__":
    main()
