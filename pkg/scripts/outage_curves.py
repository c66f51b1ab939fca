"""Saddle-point and empirical outage probability versus threshold at a fixed input SNR.

Thresholds are spaced uniformly in dB.

    python3 scripts/outage_curves.py --trials 2000 > outage_curves.csv
"""

import argparse
import sys

import numpy as np

from lmmse_snr.channel import SystemConfig
from lmmse_snr.cli import render_csv
from lmmse_snr.metrics import outage_curve

SETTINGS = [(4, 4, 0.0), (4, 4, 0.9), (4, 2, 0.0), (4, 2, 0.9)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--snr-db", type=float, default=15.0)
    ap.add_argument("--threshold-min-db", type=float, default=-10.0)
    ap.add_argument("--threshold-max-db", type=float, default=20.0)
    ap.add_argument("--points", type=int, default=61)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)

    grid = 10.0 ** (np.linspace(args.threshold_min_db, args.threshold_max_db, args.points) / 10.0)
    rows = []
    for n, k, a in SETTINGS:
        config = SystemConfig.from_snr_db(n, k, args.snr_db, a)
        for row in outage_curve(config, grid, trials=args.trials, seed=args.seed):
            rows.append({"n": n, "k": k, "a": a, **row})
    sys.stdout.write(render_csv(list(rows[0]), rows))


if __name__ == "__main__":
    main()
