"""Brute-force check that squeezing and rotation never help the cheater.

    python scripts/gaussian_suboptimality.py [--alpha-prime A] [--parity odd|even] [--with-zero]

``--with-zero`` adds r = 0 and theta = 0 to the grid, so the pure-displacement
optimum is recovered to the resolution of the beta sweep.
"""

import argparse
import math

from catqbc.cheat import verify_gaussian_suboptimality


def cli():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha-prime", type=float, default=3 / math.sqrt(2))
    ap.add_argument("--parity", choices=("odd", "even"), default="odd")
    ap.add_argument("--with-zero", action="store_true")
    args = ap.parse_args()
    r_values = (-0.3, -0.1, 0.1, 0.3)
    theta_values = (0.0, math.pi / 4, math.pi / 2)
    if args.with_zero:
        r_values = (0.0,) + r_values
    rep = verify_gaussian_suboptimality(args.alpha_prime, args.parity, r_values=r_values, theta_values=theta_values)
    print(f"strategies evaluated   {rep.evaluated}")
    print(f"displacement-only <P>  {rep.displacement_only_parity:.6f}")
    print(f"best grid <P>          {rep.best_parity:.6f}  at {rep.best_params}")
    if rep.best_squeeze_rotation_params is not None:
        print(f"best with r/theta != 0 {rep.best_squeeze_rotation_parity:.6f}  at {rep.best_squeeze_rotation_params}")
    print(f"excess over optimum    {rep.margin:+.3e}  -> {'ok' if rep.passed else 'VIOLATION'}")


if __name__ == "__main__":
    cli()
