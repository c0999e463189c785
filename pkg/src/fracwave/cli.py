"""Command-line front end: ``fracwave sweep | verify | slopes``.

Frequencies on the command line and in output are normalized, ``ωτσ`` and
``Ωτσ``. The default medium has ``tau_sigma = kappa0 = rho0 = 1``.

Exit codes: 0 success, 2 invalid configuration, 3 quadrature failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from fracwave import __version__
from fracwave.dispersion import (
    DEFAULT_PPD, evaluate_curve, log_grid, regime_slopes, theoretical_slopes, write_csv)
from fracwave.errors import ConvergenceError, FracwaveError, ParameterError
from fracwave.models import (
    DiscreteRelaxation, ZenerMedium, dist_ml_general, kappa_continuum, kappa_zener,
    medium_from_mapping, parse_medium_text)
from fracwave.quad import QuadPolicy

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_QUADRATURE = 3
EXIT_VERIFY_FAILED = 4

FAMILIES = ("zener", "discrete", "continuum-ml")
VERIFY_THRESHOLD = 1e-4


class ConfigError(ParameterError):
    pass


def _band(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"band must look like LO:HI, got {text!r}")
    try:
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"band limits must be numbers or inf, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--medium", type=Path, help="key-value medium file")
    common.add_argument("--family", choices=FAMILIES, default=None,
                        help="model family (default: zener)")
    common.add_argument("--alpha", type=float, help="fractional order alpha")
    common.add_argument("--beta", type=float, help="fractional order beta (default: alpha)")
    common.add_argument("--tau-ratio", type=float, help="tau_sigma / tau_eps (default: 1000)")
    common.add_argument("--tau-sigma", type=float, help="tau_sigma in seconds (default: 1)")
    common.add_argument("--kappa0", type=float, help="static compressibility (default: 1)")
    common.add_argument("--rho0", type=float, help="ambient density (default: 1)")
    common.add_argument("--omega-min", type=float, help="lowest omega*tau_sigma")
    common.add_argument("--omega-max", type=float, help="highest omega*tau_sigma")
    common.add_argument("--ppd", type=int, help="grid points per decade")
    common.add_argument("--band", type=_band, help="relaxation band LO:HI in Omega*tau_sigma units")
    common.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
    common.add_argument("--out", type=Path, help="output CSV path (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="fracwave",
        description="Fractional Zener and multiple-relaxation acoustic dispersion.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common],
                   help="attenuation and phase velocity over a frequency grid")
    verify = sub.add_parser("verify", parents=[common],
                            help="check that the Mittag-Leffler continuum reproduces the Zener medium")
    verify.add_argument("--threshold", type=float, default=VERIFY_THRESHOLD,
                        help="maximum allowed relative deviation (default: 1e-4)")
    sub.add_parser("slopes", parents=[common], help="fit the three attenuation power laws")
    return parser


def resolve_medium(args) -> ZenerMedium | DiscreteRelaxation:
    """Merge defaults, the medium file and flags (flags win)."""
    values: dict = {}
    if args.medium is not None:
        try:
            values = parse_medium_text(args.medium.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read medium file: {exc}") from None

    family = args.family or ("discrete" if "mechanisms" in values else "zener")
    for key in ("kappa0", "rho0"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    values.setdefault("kappa0", 1.0)
    values.setdefault("rho0", 1.0)

    if family == "discrete":
        zener_flags = [f for f in ("alpha", "beta", "tau_ratio", "tau_sigma") if getattr(args, f) is not None]
        if zener_flags:
            raise ConfigError(f"--{zener_flags[0].replace('_', '-')} does not apply to the discrete family")
        values.setdefault("mechanisms", ())
        return medium_from_mapping(values)

    if "mechanisms" in values:
        raise ConfigError(f"medium file lists relaxation mechanisms but family is {family}")
    if args.tau_sigma is not None:
        values["tau_sigma"] = args.tau_sigma
    values.setdefault("tau_sigma", 1.0)
    if args.tau_ratio is not None:
        if not args.tau_ratio > 0:
            raise ConfigError(f"--tau-ratio must be positive, got {args.tau_ratio}")
        values["tau_eps"] = values["tau_sigma"] / args.tau_ratio
    values.setdefault("tau_eps", values["tau_sigma"] / 1e3)
    if args.alpha is not None:
        values["alpha"] = args.alpha
    if "alpha" not in values:
        raise ConfigError("alpha is required (use --alpha or set it in the medium file)")
    if args.beta is not None:
        values["beta"] = args.beta
    values.setdefault("beta", values["alpha"])
    return medium_from_mapping(values)


def _policy(args) -> QuadPolicy:
    return QuadPolicy() if args.rel_tol is None else QuadPolicy(rel_tol=args.rel_tol)


def _grid(args, tau_sigma: float, lo: float, hi: float, ppd: int) -> np.ndarray:
    lo = args.omega_min if args.omega_min is not None else lo
    hi = args.omega_max if args.omega_max is not None else hi
    ppd = args.ppd if args.ppd is not None else ppd
    if not (lo > 0 and hi > lo and math.isfinite(hi)):
        raise ConfigError(f"empty frequency range: omega*tau_sigma from {lo} to {hi}")
    return log_grid(lo, hi, ppd) / tau_sigma


def cmd_sweep(args) -> int:
    medium = resolve_medium(args)
    family = args.family or ("discrete" if isinstance(medium, DiscreteRelaxation) else "zener")
    if args.band is not None and family != "continuum-ml":
        raise ConfigError("--band is only valid with --family continuum-ml")
    tau_sigma = getattr(medium, "tau_sigma", 1.0)
    grid = _grid(args, tau_sigma, 1e-4, 1e8, DEFAULT_PPD)
    model = medium
    if family == "continuum-ml":
        model = dist_ml_general(medium)
        if args.band is not None:
            lo, hi = args.band
            if not (0 <= lo < hi):
                raise ConfigError(f"band must satisfy 0 <= LO < HI, got {lo}:{hi}")
            model = model.with_band(lo / tau_sigma, hi / tau_sigma)

    curve = evaluate_curve(model, grid, _policy(args))
    if args.out is None:
        write_csv(curve, sys.stdout, tau_sigma)
    else:
        write_csv(curve, args.out, tau_sigma)

    report = sys.stderr if args.out is None else sys.stdout
    print(f"family            {family}", file=report)
    print(f"points            {len(curve)}", file=report)
    print(f"attenuation       min {curve.attenuation.min():.6g}  max {curve.attenuation.max():.6g} Np/m",
          file=report)
    print(f"phase velocity    {curve.phase_velocity[0]:.6g} -> {curve.phase_velocity[-1]:.6g} m/s",
          file=report)
    print(f"max quad error    {curve.max_quad_error:.3g} (relative)", file=report)
    if args.out is not None:
        print(f"wrote             {args.out}", file=report)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.family not in (None, "zener", "continuum-ml"):
        raise ConfigError("verify compares a Zener medium with its relaxation continuum")
    medium = resolve_medium(args)
    if not isinstance(medium, ZenerMedium):
        raise ConfigError("verify needs a Zener medium")
    dist = dist_ml_general(medium)
    if args.band is not None:
        raise ConfigError("verify always uses the full band [0, inf)")
    grid = _grid(args, medium.tau_sigma, 1e-3, 1e3, 4)
    policy = _policy(args)

    worst, worst_at = 0.0, grid[0]
    for w in grid:
        kz = kappa_zener(medium, float(w))
        kn, _ = kappa_continuum(dist, float(w), policy)
        dev = abs(kn - kz) / abs(kz)
        if dev > worst:
            worst, worst_at = dev, w
    dmin = dist.min_density()
    passed = worst <= args.threshold

    print(f"medium            alpha={medium.alpha:g} beta={medium.beta:g} "
          f"tau_sigma/tau_eps={medium.tau_ratio:.6g}")
    print(f"grid              {len(grid)} points, omega*tau_sigma in "
          f"[{grid[0] * medium.tau_sigma:.3g}, {grid[-1] * medium.tau_sigma:.3g}]")
    print(f"max rel deviation {worst:.3e} at omega*tau_sigma={worst_at * medium.tau_sigma:.4g}")
    print(f"density minimum   {dmin:.6g}" + ("  (sign-indefinite)" if dmin < 0 else ""))
    print(f"{'PASS' if passed else 'FAIL'}              threshold {args.threshold:.1e}")
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def cmd_slopes(args) -> int:
    medium = resolve_medium(args)
    if not isinstance(medium, ZenerMedium):
        raise ConfigError("slopes needs a Zener medium")
    if medium.alpha != medium.beta:
        raise ConfigError("slope theory covers alpha == beta only")
    if medium.tau_ratio < 1e3:
        raise ConfigError(
            f"tau_sigma/tau_eps = {medium.tau_ratio:.6g} < 1000: no intermediate power-law regime")
    grid = _grid(args, medium.tau_sigma, 1e-4, 1e4 * medium.tau_ratio, DEFAULT_PPD)
    fitted = regime_slopes(evaluate_curve(medium, grid), medium)
    theory = theoretical_slopes(medium.alpha)
    print(f"alpha={medium.alpha:g}  tau_sigma/tau_eps={medium.tau_ratio:.6g}")
    print(f"{'regime':<8}{'fitted':>10}{'theory':>10}{'deviation':>12}")
    for name in ("low", "mid", "high"):
        f, t = getattr(fitted, name), getattr(theory, name)
        print(f"{name:<8}{f:>10.4f}{t:>10.4f}{f - t:>+12.4f}")
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "verify": cmd_verify, "slopes": cmd_slopes}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConvergenceError as exc:
        print(f"fracwave: quadrature failure: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except (FracwaveError, ValueError) as exc:
        print(f"fracwave: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
