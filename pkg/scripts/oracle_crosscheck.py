#!/usr/bin/env python3
"""Cross-check the two quadrature schemes and the series channel.

Prints, for each requested energy, the action from the angle-form
Gauss-Legendre scheme, the cut-form tanh-sinh scheme, and the truncated
series, with their mutual deviations.  This is the run that pins the
regression constants used by the test suite.

    python3 scripts/oracle_crosscheck.py --kappa 0.5 --h 0.02,-0.02 --dps 60
"""

import argparse

from mpmath import mp

from eulertop.oracle import action_quadrature, beta_action_value
from eulertop.picardfuchs import assemble_beta_actions


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kappa", type=float, default=0.5)
    parser.add_argument("--h", default="0.02,-0.02")
    parser.add_argument("--order", type=int, default=30)
    parser.add_argument("--dps", type=int, default=60)
    args = parser.parse_args()

    plus, minus = assemble_beta_actions(args.order)
    tol = 10.0 ** (-(args.dps - 12))
    with mp.workdps(args.dps):
        for text in args.h.split(","):
            h = float(text)
            gauss = action_quadrature(args.kappa, h, tol=tol, dps=args.dps, scheme="gauss")
            ts = action_quadrature(args.kappa, h, tol=tol, dps=args.dps, scheme="tanh-sinh")
            series = beta_action_value(plus if h > 0 else minus, args.kappa, h, args.dps)
            print(f"h = {h:+.6g}")
            print(f"  gauss      {mp.nstr(gauss.value, args.dps - 10)}  ({gauss.evaluations} evals)")
            print(f"  tanh-sinh  {mp.nstr(ts.value, args.dps - 10)}  ({ts.evaluations} evals)")
            print(f"  series     {mp.nstr(series, args.dps - 10)}  (order {args.order})")
            print(f"  scheme delta {mp.nstr(abs(gauss.value - ts.value), 4)}, "
                  f"series delta {mp.nstr(abs(series - gauss.value), 4)}")


if __name__ == "__main__":
    main()
