"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test records a PASS/FAIL line (shown in the pytest terminal summary
under "acceptance criteria") before asserting. Run alone with
``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import sys
import time

import numpy as np
import pytest
from scipy.special import gammainc, gammaincinv

from lmmse_snr import cli
from lmmse_snr.channel import SpectrumPair, SystemConfig
from lmmse_snr.gengamma import GenGammaParams, cgf, cumulants
from lmmse_snr.metrics import QuadratureSpec, ber_curve, ber_qpsk, fitted_params, outage_probability
from lmmse_snr.moments import asymptotic_moments, solve_fixed_point
from lmmse_snr.montecarlo import empirical_moments, empirical_outage, run_trials

SEED = 7


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_1_fixed_point_oracle(acceptance_report):
    start = time.perf_counter()
    errors = []
    for t in (0.1, 1.0, 10.0):
        spec = SpectrumPair(d=np.ones(8), d_tilde=np.ones(8))
        fp = solve_fixed_point(spec, t)
        exact = (-1.0 + math.sqrt(1.0 + 4.0 * t)) / (2.0 * t)
        errors.append(abs(fp.delta - exact))
    elapsed = time.perf_counter() - start
    ok = max(errors) <= 1e-10 and elapsed < 1.0
    acceptance_report(1, ok, f"max |delta - closed form| = {max(errors):.2e} (<= 1e-10), {elapsed:.3f} s (< 1 s)")
    assert ok


def test_criterion_2_gamma_consistency(acceptance_report):
    start = time.perf_counter()
    worst = {}
    for alpha in (1.0, 2.0, 4.0, 8.0):
        p = GenGammaParams(alpha, 1.0, 1.0)
        ys = gammaincinv(alpha, np.linspace(0.05, 0.95, 181))
        worst[alpha] = max(_rel(outage_probability(p, y), gammainc(alpha, y)) for y in ys)
    ber_err = 0.0
    for b in (0.01, 0.1, 1.0, 10.0, 100.0, 1000.0):
        exact = 0.5 * (1.0 - math.sqrt(b / (2.0 + b)))
        ber_err = max(ber_err, abs(ber_qpsk(GenGammaParams(1.0, b, 1.0)) - exact))
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) <= 0.02 and ber_err <= 1e-6 and elapsed < 5.0
    parts = ", ".join(f"alpha={a:g}: {e:.2%}" for a, e in worst.items())
    acceptance_report(
        2, ok, f"outage rel. error ({parts}; limit 2%), BER abs. error {ber_err:.1e} (<= 1e-6), {elapsed:.2f} s"
    )
    assert ok


def _d1(f, x, h):
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def _d2(f, x, h):
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def test_criterion_3_cumulants(acceptance_report):
    grid = [
        (alpha, b, xi, u / (b * xi))
        for alpha, b, xi in itertools.product([0.5, 2.0, 9.0], [0.2, 1.0, 5.0], [0.5, 0.999, 1.001, 2.0])
        for u in (-3.0, -0.4, 0.3)
    ]
    worst = 0.0
    for alpha, b, xi, t in grid:
        p = GenGammaParams(alpha, b, xi)
        _, k1, k2 = cumulants(p, t)
        h = 1e-3 / b
        f = lambda s: cgf(p, s)
        worst = max(worst, _rel(_d1(f, t, h), k1), _rel(_d2(f, t, h), k2))
    ok = len(grid) >= 100 and worst <= 1e-6
    acceptance_report(3, ok, f"{len(grid)} grid points, max rel. error {worst:.1e} (<= 1e-6)")
    assert ok


def _moment_errors(config, trials):
    am = asymptotic_moments(config)
    emp = empirical_moments(run_trials(config, trials, SEED))
    return [_rel(a, e) for a, e in zip((am.mean, am.variance, am.third_central), emp)]


def test_criterion_4_moment_validation(acceptance_report):
    start = time.perf_counter()
    square = _moment_errors(SystemConfig.from_snr_db(8, 8, 15.0, 0.3), 20_000)
    tall = _moment_errors(SystemConfig.from_snr_db(16, 8, 15.0, 0.3), 20_000)
    elapsed = time.perf_counter() - start
    ok = (
        square[0] < 0.02 and square[1] < 0.10 and square[2] < 0.30
        and tall[0] < 0.02 and tall[1] < 0.10
        and elapsed < 60.0
    )
    acceptance_report(
        4,
        ok,
        "N=K=8: first {:.2%} (<2%), second {:.2%} (<10%), third {:.2%} (<30%); "
        "N=16,K=8: first {:.2%}, second {:.2%}; {:.1f} s".format(*square, *tall[:2], elapsed),
    )
    assert ok


def test_criterion_5_third_moment_scaling(acceptance_report):
    scaled = {}
    for k in (8, 16):
        config = SystemConfig.from_snr_db(k, k, 15.0, 0.3)
        _, _, third = empirical_moments(run_trials(config, 50_000, SEED))
        scaled[k] = k * k * third / config.p0**3
    ratio = scaled[16] / scaled[8]
    ok = 0.7 <= ratio <= 1.4
    acceptance_report(5, ok, f"K^2 * third moment ratio K=16/K=8 = {ratio:.3f} (in [0.7, 1.4])")
    assert ok


def test_criterion_6_ber_curve(acceptance_report):
    start = time.perf_counter()
    trials = 2000
    details, ok = [], True
    for a in (0.0, 0.9):
        configs = [SystemConfig.from_snr_db(4, 4, float(s), a) for s in range(0, 21, 5)]
        rows = ber_curve(configs, QuadratureSpec(), trials=trials, seed=SEED)
        theory = [r["ber_theory"] for r in rows]
        emp = [r["ber_empirical"] for r in rows]
        z = [abs(t - e) / math.sqrt(e * (1 - e) / trials) for t, e in zip(theory, emp)]
        decreasing = all(x > y for x, y in zip(theory, theory[1:])) and all(x > y for x, y in zip(emp, emp[1:]))
        ok &= max(z) <= 3.0 and decreasing
        details.append(f"a={a:g}: max {max(z):.2f} SE at {rows[int(np.argmax(z))]['snr_db']:g} dB, decreasing={decreasing}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30.0
    acceptance_report(6, ok, "; ".join(details) + f" (limit 3 SE); {elapsed:.1f} s")
    assert ok


def test_criterion_7_outage_curve(acceptance_report):
    trials = 2000
    details, ok = [], True
    for (n, k), a in itertools.product([(4, 4), (4, 2)], (0.0, 0.9)):
        config = SystemConfig.from_snr_db(n, k, 15.0, a)
        samples = run_trials(config, trials, SEED).samples
        p = fitted_params(config)
        worst = 0.0
        for y in np.geomspace(samples.min(), samples.max(), 200):
            e = empirical_outage(samples, y)
            if not 0.1 <= e <= 0.9:
                continue
            allowed = max(0.03, 3.0 * math.sqrt(e * (1 - e) / trials))
            worst = max(worst, abs(outage_probability(p, y) - e) / allowed)
        ok &= worst <= 1.0
        details.append(f"N={n},K={k},a={a:g}: {worst:.2f}")
    acceptance_report(7, ok, "worst |saddle - empirical| / allowance: " + ", ".join(details) + " (<= 1)")
    assert ok


def test_criterion_8_cli_determinism(acceptance_report, tmp_path):
    model = ["--n", "4", "--k", "4", "--a", "0.9"]
    commands = [
        ["moments", *model, "--snr-db", "15"],
        ["ber", *model, "--snr-min", "0", "--snr-max", "20", "--snr-step", "5", "--trials", "500", "--seed", "7"],
        ["outage", *model, "--snr-db", "15", "--threshold-min", "-10", "--threshold-max", "20",
         "--points", "31", "--grid", "db", "--trials", "500", "--seed", "7"],
        ["validate", *model, "--snr-db", "15", "--trials", "500", "--seed", "7"],
    ]
    mismatched = []
    for i, argv in enumerate(commands):
        for fmt in ([], ["--json"]):
            first, second = tmp_path / f"{i}{fmt}a", tmp_path / f"{i}{fmt}b"
            codes = [cli.main(argv + fmt + ["-o", str(path)]) for path in (first, second)]
            if codes != [0, 0] or first.read_bytes() != second.read_bytes():
                mismatched.append(" ".join(argv[:1] + fmt))
    ok = not mismatched
    acceptance_report(8, ok, f"{2 * len(commands)} command/format pairs rerun, mismatches: {mismatched or 'none'}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
