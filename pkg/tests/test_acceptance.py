"""End-to-end acceptance checks, one test per criterion.

Each test logs a single PASS/FAIL line that is repeated in the pytest
terminal summary under "acceptance criteria".
"""

import io
import math

import mpmath
import numpy as np
import pytest

from fracwave import cli
from fracwave.dispersion import curve_to_csv, evaluate_curve, log_grid, regime_slopes, theoretical_slopes
from fracwave.models import (
    DiscreteRelaxation, RelaxationDistribution, ZenerMedium, dist_ml_equal, dist_ml_general,
    kappa_continuum, kappa_discrete, kappa_zener)
from fracwave.quad import QuadPolicy, adaptive_simpson, integrate
from fracwave.specfun import mittag_leffler, spectral_density
from test_quad import SMOOTH_SUITE

from conftest import load_ml_table


def record(log, label, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    log.append(line)
    print(line)
    assert ok, line


def kernel_oracle(a, b, A, t):
    """t**(b-1) E_{a,b}(-A t**a) from a 50-digit mpmath series."""
    with mpmath.workdps(50):
        z = -mpmath.mpf(A) * mpmath.mpf(t) ** a
        total = mpmath.nsum(lambda n: z**n / mpmath.gamma(a * n + b), [0, mpmath.inf])
        return float(mpmath.mpf(t) ** (b - 1) * total)


def test_equivalence_theorem(acceptance_log):
    grid = log_grid(1e-3, 1e3, 4)
    worst = 0.0
    for alpha in (0.3, 0.5, 0.8):
        for beta in (alpha, alpha / 2):
            m = ZenerMedium.normalized(alpha, beta)
            dist = dist_ml_general(m)
            for w in grid:
                kz = kappa_zener(m, float(w))
                worst = max(worst, abs(kappa_continuum(dist, float(w)).value - kz) / abs(kz))
    record(acceptance_log, "1 equivalence theorem",
           len(grid) == 25 and worst <= 1e-4, f"max rel |kN - kZ| = {worst:.2e} over 6 media x 25 points")


@pytest.mark.parametrize("alpha", [0.3, 0.8])
def test_power_law_regimes(acceptance_log, alpha):
    m = ZenerMedium.normalized(alpha)
    fitted = regime_slopes(evaluate_curve(m, log_grid(1e-4, 1e8, 60)), m)
    theory = theoretical_slopes(alpha)
    dev = [f - t for f, t in zip(fitted, theory)]
    record(acceptance_log, f"2 power-law regimes alpha={alpha}",
           max(map(abs, dev)) <= 0.05,
           "fitted (" + ", ".join(f"{x:.4f}" for x in fitted) + ") vs theory ("
           + ", ".join(f"{x:.2f}" for x in theory) + ")")


LAPLACE_CASES = [(a, b, t) for a, b in ((0.3, 1.0), (0.8, 1.0), (0.8, 1.3)) for t in (0.1, 1.0, 10.0)]


def test_laplace_identity(acceptance_log):
    worst = 0.0
    for a, b, t in LAPLACE_CASES:
        singular = 1.0 + a - b if b != a else 1.0 + a
        policy = QuadPolicy(rel_tol=1e-11, split_points=(1.0 / t, 1.0))
        value, _ = integrate(lambda w: math.exp(-w * t) * spectral_density(a, b, 1.0, w),
                             0.0, math.inf, policy, singular_exponent=singular)
        exact = kernel_oracle(a, b, 1.0, t)
        worst = max(worst, abs(value - exact) / abs(exact))
    record(acceptance_log, "3a Laplace identity", worst <= 1e-6,
           f"max rel error {worst:.2e} over {len(LAPLACE_CASES)} (a, b, t)")


def test_spectral_density_mass(acceptance_log):
    worst = 0.0
    for a in (0.3, 0.5, 0.8):
        total, _ = integrate(lambda w: spectral_density(a, 1.0, 1.0, w), 0.0, math.inf,
                             QuadPolicy(rel_tol=1e-10, split_points=(1.0,)),
                             singular_exponent=a, tail_exponent=a)
        worst = max(worst, abs(total - 1.0))
    record(acceptance_log, "3b unit mass of f_{a,1}", worst <= 1e-6, f"max |mass - 1| = {worst:.2e}")


def test_mittag_leffler_table(acceptance_log):
    rows = load_ml_table()
    worst = max(abs(mittag_leffler(a, b, z) - e) / abs(e) for a, b, z, e in rows)
    record(acceptance_log, "3c Mittag-Leffler vs mpmath", worst <= 1e-10,
           f"max rel error {worst:.2e} over {len(rows)} fixture rows")


def test_limit_behaviour(acceptance_log):
    m = ZenerMedium(kappa0=2.0, rho0=3.0, alpha=0.5, beta=0.5)
    cp = evaluate_curve(m, [1e-6]).phase_velocity[0]
    speed_dev = abs(cp - m.c0) / m.c0
    statics = [
        kappa_zener(m, 0.0),
        kappa_discrete(DiscreteRelaxation(kappa0=2.0, mechanisms=((1.0, 0.5),)), 0.0),
        kappa_continuum(dist_ml_equal(m), 0.0).value,
    ]
    lossless = ZenerMedium(alpha=0.5, beta=0.5, tau_sigma=1.0, tau_eps=1.0)
    att = evaluate_curve(lossless, log_grid(1e-4, 1e8, 10)).attenuation
    ok = speed_dev <= 1e-3 and all(k == 2.0 for k in statics) and not att.any()
    record(acceptance_log, "4 limit behaviour", ok,
           f"c_p(1e-6) off c0 by {speed_dev:.1e}; kappa(0) = {statics}; lossless max alpha_k = {att.max()}")


def test_truncated_band_contrast(acceptance_log):
    full = dist_ml_general(ZenerMedium.normalized(0.8))
    band = full.with_band(1e-2, 1e2)
    inside = log_grid(1e-1, 1e1, 10)
    near = np.max(np.abs(evaluate_curve(band, inside).attenuation
                         / evaluate_curve(full, inside).attenuation - 1))
    far = abs(evaluate_curve(band, [1e4]).attenuation[0] / evaluate_curve(full, [1e4]).attenuation[0] - 1)
    record(acceptance_log, "5 truncated band contrast (alpha=0.8)", near <= 0.05 and far > 0.2,
           f"max deviation {near:.1%} on [0.1, 10], {far:.1%} at 1e4")


def test_discrete_continuum_consistency(acceptance_log):
    width = 1e-4
    rect = RelaxationDistribution(2.0, 1.0, lambda x: 1.0 / width, (1 - width / 2, 1 + width / 2))
    single = DiscreteRelaxation(kappa0=2.0, mechanisms=((1.0, 1.0),))
    worst = 0.0
    for w in (1e-2, 1e-1, 1.0, 1e1, 1e2):
        kd = kappa_discrete(single, w)
        worst = max(worst, abs(kappa_continuum(rect, w).value - kd) / abs(kd))
    record(acceptance_log, "6 narrow rectangle vs single mechanism", worst <= 1e-3,
           f"max rel deviation {worst:.2e}")


def test_engineering_contract(acceptance_log, tmp_path, monkeypatch, capsys):
    curve = lambda: evaluate_curve(dist_ml_general(ZenerMedium.normalized(0.8, 0.5)), log_grid(1e-2, 1e2, 5))
    deterministic = curve_to_csv(curve(), 1.0) == curve_to_csv(curve(), 1.0)

    honest = all(abs(v - exact) <= 10 * err
                 for f, a, b, exact in SMOOTH_SUITE for tol in (1e-4, 1e-8, 1e-12)
                 for v, err in [adaptive_simpson(f, a, b, QuadPolicy(rel_tol=tol))])

    codes = {
        "ok": cli.main(["verify", "--alpha", "0.8"]),
        "config": cli.main(["sweep", "--alpha", "0.5", "--omega-min", "10", "--omega-max", "1",
                            "--out", str(tmp_path / "x.csv")]),
        "verify": cli.main(["verify", "--alpha", "0.8", "--threshold", "1e-15"]),
    }
    monkeypatch.setattr(cli, "dist_ml_general", lambda m: RelaxationDistribution(
        m.kappa0, m.rho0, lambda w: math.nan if 2 < w < 3 else 1.0, (0.0, 10.0)))
    codes["quadrature"] = cli.main(["sweep", "--family", "continuum-ml", "--alpha", "0.5",
                                    "--omega-min", "1", "--omega-max", "10", "--out", str(tmp_path / "q.csv")])
    capsys.readouterr()
    expected = {"ok": 0, "config": 2, "verify": 4, "quadrature": 3}
    ok = deterministic and honest and codes == expected
    record(acceptance_log, "7 engineering contract", ok,
           f"deterministic CSV {deterministic}; quadrature estimates honest {honest}; exit codes {codes}")
