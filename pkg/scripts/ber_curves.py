"""Theoretical and empirical BER versus input SNR for a few antenna/correlation settings.

    python3 scripts/ber_curves.py --trials 2000 > ber_curves.csv
"""

import argparse
import sys

from lmmse_snr.channel import SystemConfig
from lmmse_snr.cli import render_csv
from lmmse_snr.metrics import ber_curve

SETTINGS = [(4, 4, 0.0), (4, 4, 0.9), (8, 4, 0.0), (8, 4, 0.9), (8, 8, 0.5)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--snr-max", type=float, default=20.0)
    ap.add_argument("--snr-step", type=float, default=2.0)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)

    count = int(args.snr_max / args.snr_step) + 1
    rows = []
    for n, k, a in SETTINGS:
        configs = [SystemConfig.from_snr_db(n, k, i * args.snr_step, a) for i in range(count)]
        for row in ber_curve(configs, trials=args.trials, seed=args.seed):
            rows.append({"n": n, "k": k, "a": a, **row})
    sys.stdout.write(render_csv(list(rows[0]), rows))


if __name__ == "__main__":
    main()
