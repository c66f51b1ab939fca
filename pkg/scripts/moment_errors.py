"""Relative error of the asymptotic moments versus the correlation coefficient.

Sweeps ``a`` for N = K and N = 2K at a fixed input SNR and prints one CSV
row per (N, K, a) with the relative error of the first three moments.

    python3 scripts/moment_errors.py --k 8 --trials 20000 > moment_errors.csv
"""

import argparse
import sys

import numpy as np

from lmmse_snr.channel import SystemConfig
from lmmse_snr.cli import render_csv
from lmmse_snr.moments import asymptotic_moments
from lmmse_snr.montecarlo import empirical_moments, run_trials


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=8, choices=(2, 4, 8, 16, 32))
    ap.add_argument("--snr-db", type=float, default=15.0)
    ap.add_argument("--trials", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    rows = []
    for n in (args.k, 2 * args.k):
        for a in np.round(np.arange(0.0, 0.91, 0.1), 2):
            config = SystemConfig.from_snr_db(n, args.k, args.snr_db, float(a))
            am = asymptotic_moments(config)
            emp = empirical_moments(run_trials(config, args.trials, args.seed, workers=args.workers))
            row = {"n": n, "k": args.k, "a": float(a)}
            for name, asym, e in zip(("first", "second", "third"), (am.mean, am.variance, am.third_central), emp):
                row[f"rel_err_{name}"] = abs(asym - e) / abs(e)
            rows.append(row)
    sys.stdout.write(render_csv(list(rows[0]), rows))


if __name__ == "__main__":
    main()
