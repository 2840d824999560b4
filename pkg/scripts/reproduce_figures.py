"""Regenerate every figure's data through the CLI into one directory.

    python scripts/reproduce_figures.py [OUTDIR] [--force]

Writes the odd-cat Wigner grid (CSV + SVG), the photon-number histograms
with and without the optimal shift, the C_max / C'_max / G_max sweeps and
the N-copy trade-off table.
"""

import argparse
import math
import sys
from pathlib import Path

from catqbc.cli import main

SHOWCASE = repr(3 / math.sqrt(2))

JOBS = [
    ("wigner_odd_cat.csv", ["wigner", "--alpha-prime", SHOWCASE, "--parity", "odd", "--range", "5", "--resolution", "201"]),
    ("wigner_odd_cat.svg", ["wigner", "--alpha-prime", SHOWCASE, "--parity", "odd", "--range", "5", "--resolution", "201", "--format", "svg"]),
    ("photons_committed_odd.csv", ["photon-dist", "--alpha-prime", SHOWCASE, "--parity", "odd"]),
    ("photons_cheated.csv", ["photon-dist", "--alpha-prime", SHOWCASE, "--parity", "odd", "--displace", "optimal"]),
    ("photons_target_even.csv", ["photon-dist", "--alpha-prime", SHOWCASE, "--parity", "even"]),
    ("control_sweep.csv", ["cheat", "--sweep", "0.2:5:0.1", "--parity", "both", "--format", "csv"]),
    ("gain_sweep.csv", ["distinguish", "--sweep", "0.1:3.5:0.05", "--format", "csv"]),
    ("tradeoff.csv", ["tradeoff", "--alpha-prime-list", "1,1.5,2,2.5,3,3.5,4", "--n-list", "1,2,5,10,20,50,100,200,300,500,1000"]),
]


def cli():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("outdir", nargs="?", default="figures")
    ap.add_argument("--force", action="store_true")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name, argv in JOBS:
        extra = ["-o", str(out / name)] + (["--force"] if args.force else [])
        code = main(argv + extra)
        print(f"{'ok  ' if code == 0 else 'FAIL'} {out / name}")
        failed += code != 0
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(cli())
