"""Command-line front end: ``lmmse-snr {moments,ber,outage,validate}``.

Numeric tables go to ``--output`` (or stdout) as CSV, or JSON with ``--json``.
Each file written with ``--output`` gets a ``<output>.manifest.json`` sidecar
recording the command, resolved config, seed, version and timestamp. The
table itself carries no timestamp, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .channel import SystemConfig, power_profile, read_power_file
from .errors import NumericError, ValidationError
from .gengamma import fit_from_moments
from .metrics import QuadratureSpec, ber_curve, outage_curve
from .moments import asymptotic_moments
from .montecarlo import empirical_moments, run_trials

SEED_ENV = "LMMSE_SNR_SEED"
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _model_parser():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model")
    g.add_argument("--n", type=int, required=True, help="receive antennas N")
    g.add_argument("--k", type=int, required=True, help="interfering users K")
    g.add_argument("--a", type=float, required=True, help="correlation coefficient, 0 <= a < 1")
    g.add_argument("--p0", type=float, default=1.0, help="power of the user of interest (default 1)")
    g.add_argument(
        "--powers",
        default="preset",
        help="'preset' (K in 2,4,8,16,32; base power p0) or a file with one power per line",
    )
    out = p.add_argument_group("output")
    out.add_argument("--json", action="store_true", help="emit JSON with full double precision")
    out.add_argument("--output", "-o", help="write here (atomically) instead of stdout")
    return p


def _mc_parser(required=False):
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("Monte Carlo")
    g.add_argument("--trials", type=int, required=required, help="channel realizations")
    g.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
    g.add_argument("--workers", type=int, default=1, help="worker processes for the trials")
    return p


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lmmse-snr",
        description="Asymptotic moments, generalized Gamma BER/outage approximations and "
        "Monte Carlo validation for the LMMSE output SNR on receive-correlated MIMO channels.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    model = _model_parser()

    p = sub.add_parser("moments", parents=[model], help="asymptotic moments and fitted parameters")
    p.add_argument("--snr-db", type=float, required=True, help="input SNR p0/rho in dB")

    p = sub.add_parser("ber", parents=[model, _mc_parser()], help="BER versus input SNR")
    p.add_argument("--snr-min", type=float, required=True)
    p.add_argument("--snr-max", type=float, required=True)
    p.add_argument("--snr-step", type=float, required=True)
    p.add_argument("--nodes", type=int, default=64, help="Gauss-Legendre nodes (default 64)")

    p = sub.add_parser("outage", parents=[model, _mc_parser()], help="outage probability versus threshold")
    p.add_argument("--snr-db", type=float, required=True, help="input SNR p0/rho in dB")
    p.add_argument("--threshold-min", type=float, required=True)
    p.add_argument("--threshold-max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument(
        "--grid",
        choices=("linear", "db"),
        default="linear",
        help="'db': min/max are in dB and points are spaced uniformly in dB; "
        "the threshold column is always linear",
    )

    p = sub.add_parser(
        "validate", parents=[model, _mc_parser(required=True)], help="asymptotic vs empirical moments"
    )
    p.add_argument("--snr-db", type=float, required=True, help="input SNR p0/rho in dB")
    return parser


def _resolve_powers(args):
    if args.powers == "preset":
        return power_profile(args.k, args.p0)
    powers = read_power_file(args.powers)
    if len(powers) != args.k:
        raise ValidationError(f"power file {args.powers} has {len(powers)} entries, expected --k {args.k}")
    return powers


def _config(args, snr_db):
    return SystemConfig.from_snr_db(
        args.n, args.k, snr_db, args.a, powers=_resolve_powers(args), p0=args.p0
    )


def _snr_grid(lo, hi, step):
    if not step > 0:
        raise ValidationError(f"--snr-step must be positive, got {step}")
    if hi < lo:
        raise ValidationError("--snr-max must not be below --snr-min")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(count)]


def _threshold_grid(lo, hi, points, grid):
    if points < 1:
        raise ValidationError(f"--points must be >= 1, got {points}")
    if hi < lo:
        raise ValidationError("--threshold-max must not be below --threshold-min")
    values = np.linspace(lo, hi, points) if points > 1 else np.array([lo])
    if grid == "db":
        values = 10.0 ** (values / 10.0)
    elif lo <= 0:
        raise ValidationError("linear thresholds must be positive")
    return [float(v) for v in values]


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return f"{float(value):.12g}"


def render_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[h]) for h in header])
    return buf.getvalue()


def render_json(payload):
    return json.dumps(payload, indent=2, sort_keys=False, allow_nan=False) + "\n"


def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def manifest(command, args, config, seed):
    return {
        "command": command,
        "config": config.to_dict() if config is not None else None,
        "arguments": {k: v for k, v in sorted(vars(args).items()) if k not in ("output",)},
        "input_snr_definition": "p0 / rho",
        "seed": seed,
        "moment_convention": "population central moments (1/n)",
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }


def cmd_moments(args):
    config = _config(args, args.snr_db)
    am = asymptotic_moments(config)
    fit = fit_from_moments(am.mean, am.variance, am.third_central)
    values = {
        "delta": am.delta,
        "delta_tilde": am.delta_tilde,
        "gamma": am.gamma,
        "gamma_tilde": am.gamma_tilde,
        "omega_sq": am.omega_sq,
        "nu": am.nu,
        "mean": am.mean,
        "variance": am.variance,
        "third_central": am.third_central,
        "alpha": fit.alpha,
        "b": fit.b,
        "xi": fit.xi,
    }
    if args.json:
        text = render_json(values)
    else:
        text = render_csv(["key", "value"], [{"key": k, "value": v} for k, v in values.items()])
    return text, config, None


def cmd_ber(args):
    seed = args.seed if args.seed is not None else _default_seed()
    grid = _snr_grid(args.snr_min, args.snr_max, args.snr_step)
    configs = [_config(args, snr) for snr in grid]
    trials = args.trials
    rows = ber_curve(
        configs,
        QuadratureSpec(args.nodes),
        trials=trials,
        seed=seed if trials else None,
        workers=args.workers,
    )
    for row, snr in zip(rows, grid):
        row["snr_db"] = snr
    header = ["snr_db", "ber_theory", "ber_empirical", "trials", "seed"]
    text = render_json(rows) if args.json else render_csv(header, rows)
    return text, (configs[0] if configs else None), (seed if trials else None)


def cmd_outage(args):
    seed = args.seed if args.seed is not None else _default_seed()
    config = _config(args, args.snr_db)
    grid = _threshold_grid(args.threshold_min, args.threshold_max, args.points, args.grid)
    trials = args.trials
    rows = outage_curve(config, grid, trials=trials, seed=seed if trials else None, workers=args.workers)
    header = ["threshold", "pout_saddle", "pout_empirical"]
    text = render_json(rows) if args.json else render_csv(header, rows)
    return text, config, (seed if trials else None)


def cmd_validate(args):
    seed = args.seed if args.seed is not None else _default_seed()
    config = _config(args, args.snr_db)
    am = asymptotic_moments(config)
    samples = run_trials(config, args.trials, seed, workers=args.workers)
    emp = empirical_moments(samples)
    rows = []
    for name, asym, e in zip(("first", "second", "third"), (am.mean, am.variance, am.third_central), emp):
        rel = abs(asym - e) / abs(e) if e != 0 else math.inf
        rows.append({"moment": name, "asymptotic": asym, "empirical": e, "relative_error": rel})
    header = ["moment", "asymptotic", "empirical", "relative_error"]
    text = render_json(rows) if args.json else render_csv(header, rows)
    return text, config, seed


COMMANDS = {
    "moments": cmd_moments,
    "ber": cmd_ber,
    "outage": cmd_outage,
    "validate": cmd_validate,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, config, seed = COMMANDS[args.command](args)
        if args.output:
            _atomic_write(args.output, text)
            _atomic_write(
                f"{args.output}.manifest.json", render_json(manifest(args.command, args, config, seed))
            )
        else:
            sys.stdout.write(text)
    except ValidationError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, ArithmeticError) as exc:
        print(f"{parser.prog} {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
