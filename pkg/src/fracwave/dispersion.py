"""Wavenumber, attenuation and phase velocity from generalized compressibility.

``k² = ω² ρ0 κ(ω)``, with ``α_k = -Im k`` and ``c_p = ω / Re k``.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from collections.abc import Sequence
from dataclasses import dataclass, replace
from pathlib import Path
from typing import NamedTuple, TextIO

import numpy as np

from fracwave.errors import DomainError, ParameterError, QuadratureError
from fracwave.models import Medium, ZenerMedium, compressibility
from fracwave.quad import DEFAULT_POLICY, QuadPolicy

CSV_HEADER = ("omega_norm", "alpha_k", "alpha_k_norm", "c_p")
DEFAULT_PPD = 60

# fit windows, in units of omega*tau_sigma (low, mid) and omega*tau_eps (high)
LOW_WINDOW = (1e-4, 1e-2)
MID_OFFSET = 10.0
HIGH_WINDOW = (1e2, 1e4)
MIN_TAU_RATIO = 1e3
_ROUNDING = 16 * 2.0**-52


def wavenumber(kappa: complex, omega: float, rho0: float) -> complex:
    """Forward-propagating root ``k = ω sqrt(ρ0 κ)`` with ``Re k > 0``.

    Raises:
        DomainError: If ``kappa == 0`` or ``omega <= 0``.
    """
    if kappa == 0:
        raise DomainError("degenerate medium: compressibility is zero")
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    k = omega * cmath.sqrt(rho0 * complex(kappa))
    return -k if k.real < 0 else k


class Normalization(NamedTuple):
    omega_ref: float
    alpha_ref: float


@dataclass(frozen=True)
class DispersionCurve:
    """Attenuation and phase velocity sampled on an ascending frequency grid.

    Attributes:
        omegas: Angular frequencies (rad/s), strictly increasing and positive.
        attenuation: ``α_k`` in Np/m, or dimensionless once normalized.
        phase_velocity: ``c_p`` in m/s.
        normalization: Reference point the attenuation was divided by, if any.
        max_quad_error: Largest relative compressibility error estimate over
            the grid (zero for closed-form models).
    """

    omegas: np.ndarray
    attenuation: np.ndarray
    phase_velocity: np.ndarray
    normalization: Normalization | None = None
    max_quad_error: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.omegas, dtype=float)
        att = np.asarray(self.attenuation, dtype=float)
        cp = np.asarray(self.phase_velocity, dtype=float)
        if not (w.ndim == att.ndim == cp.ndim == 1 and len(w) == len(att) == len(cp)):
            raise ParameterError("omegas, attenuation and phase_velocity must be 1-D and equally long")
        if len(w) == 0 or np.any(w <= 0) or np.any(np.diff(w) <= 0):
            raise ParameterError("omegas must be positive and strictly increasing")
        if np.any(att < 0):
            raise ParameterError(f"negative attenuation {att.min():.3g}; medium is not passive")
        if np.any(cp <= 0):
            raise ParameterError("phase velocity must be positive")
        for name, arr in (("omegas", w), ("attenuation", att), ("phase_velocity", cp)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def raw_attenuation(self) -> np.ndarray:
        """Attenuation in Np/m, undoing any normalization."""
        if self.normalization is None:
            return self.attenuation
        return self.attenuation * self.normalization.alpha_ref

    def __len__(self):
        return len(self.omegas)


def log_grid(lo: float, hi: float, ppd: int = DEFAULT_PPD) -> np.ndarray:
    """Log-spaced grid with ``ppd`` points per decade, endpoints included.

    When ``lo`` and ``hi`` lie on the ``10**(k/ppd)`` lattice the grid is
    built from integer exponents, so exact decades such as 1.0 appear exactly.
    """
    if not (lo > 0 and hi > lo):
        raise ParameterError(f"empty or invalid frequency range [{lo}, {hi}]")
    if ppd < 1:
        raise ParameterError(f"points per decade must be >= 1, got {ppd}")
    k_lo = math.log10(lo) * ppd
    k_hi = math.log10(hi) * ppd
    if abs(k_lo - round(k_lo)) < 1e-9 and abs(k_hi - round(k_hi)) < 1e-9:
        return 10.0 ** (np.arange(round(k_lo), round(k_hi) + 1) / ppd)
    n = max(2, int(math.ceil((k_hi - k_lo) - 1e-9)) + 1)
    return np.geomspace(lo, hi, n)


def _rho0(model: Medium) -> float:
    return model.rho0


def evaluate_curve(model: Medium, omega_grid: Sequence[float],
                   policy: QuadPolicy = DEFAULT_POLICY) -> DispersionCurve:
    """Attenuation and phase velocity of ``model`` on ``omega_grid``.

    Raises:
        QuadratureError: For continuum media, annotated with the failing ω.
        ParameterError: If ``Im κ > 0`` at some grid point (an active medium).
    """
    omegas = np.asarray(omega_grid, dtype=float)
    rho0 = _rho0(model)
    att = np.empty_like(omegas)
    cp = np.empty_like(omegas)
    worst = 0.0
    for i, w in enumerate(omegas):
        try:
            kappa, err = compressibility(model, float(w), policy)
        except QuadratureError as exc:
            raise QuadratureError(f"quadrature failed at omega={w:.6g}: {exc}",
                                  partial=exc.partial, error=exc.error, omega=float(w)) from exc
        k = wavenumber(kappa, float(w), rho0)
        # an imaginary part at rounding level is a lossless point, not a gain
        att[i] = 0.0 if abs(k.imag) <= _ROUNDING * abs(k) else -k.imag
        if att[i] < 0:
            raise ParameterError(f"medium is not passive at omega={w:.6g}: "
                                 f"Im kappa = {kappa.imag:.3g} > 0 gives attenuation {att[i]:.3g}")
        cp[i] = w / k.real
        worst = max(worst, err / abs(kappa))
    return DispersionCurve(omegas, att, cp, max_quad_error=worst)


def _locate(omegas: np.ndarray, omega_ref: float) -> int | None:
    i = int(np.searchsorted(omegas, omega_ref))
    for j in (i - 1, i):
        if 0 <= j < len(omegas) and math.isclose(omegas[j], omega_ref, rel_tol=1e-12):
            return j
    return None


def attenuation_at(curve: DispersionCurve, omega: float) -> float:
    """Attenuation at ``omega`` by log-log linear interpolation."""
    w = curve.omegas
    if not w[0] * (1 - 1e-12) <= omega <= w[-1] * (1 + 1e-12):
        raise DomainError(f"reference frequency {omega:.6g} outside grid [{w[0]:.6g}, {w[-1]:.6g}]")
    j = _locate(w, omega)
    if j is not None:
        return float(curve.attenuation[j])
    i = int(np.searchsorted(w, omega))
    y0, y1 = curve.attenuation[i - 1], curve.attenuation[i]
    if y0 <= 0 or y1 <= 0:
        raise DomainError(f"attenuation vanishes near omega={omega:.6g}; cannot interpolate in log")
    t = math.log(omega / w[i - 1]) / math.log(w[i] / w[i - 1])
    return math.exp((1 - t) * math.log(y0) + t * math.log(y1))


def normalize(curve: DispersionCurve, omega_ref: float) -> DispersionCurve:
    """Divide the attenuation by its value at ``omega_ref``.

    Normalizing an already normalized curve at the same reference is a no-op.

    Raises:
        DomainError: If ``omega_ref`` is outside the grid or the attenuation
            there is zero.
    """
    ref = attenuation_at(curve, omega_ref)
    if not ref > 0:
        raise DomainError(f"attenuation is zero at omega_ref={omega_ref:.6g}; cannot normalize")
    previous = curve.normalization.alpha_ref if curve.normalization else 1.0
    return replace(curve, attenuation=curve.attenuation / ref,
                   normalization=Normalization(float(omega_ref), previous * ref))


class RegimeSlopes(NamedTuple):
    low: float
    mid: float
    high: float


def theoretical_slopes(alpha: float) -> RegimeSlopes:
    """Asymptotic attenuation exponents ``(1 + α, 1 - α/2, 1 - α)``."""
    return RegimeSlopes(1.0 + alpha, 1.0 - alpha / 2.0, 1.0 - alpha)


def slope_windows(medium: ZenerMedium) -> dict[str, tuple[float, float]]:
    """Angular-frequency fit windows for the three power-law regimes.

    Low: ``ωτσ ∈ [1e-4, 1e-2]``. Mid: a decade above ``1/τσ`` to a decade
    below ``1/τε``. High: ``ωτε ∈ [1e2, 1e4]``.
    """
    ts, te = medium.tau_sigma, medium.tau_eps
    return {
        "low": (LOW_WINDOW[0] / ts, LOW_WINDOW[1] / ts),
        "mid": (MID_OFFSET / ts, 1.0 / (MID_OFFSET * te)),
        "high": (HIGH_WINDOW[0] / te, HIGH_WINDOW[1] / te),
    }


def regime_slopes(curve: DispersionCurve, medium: ZenerMedium) -> RegimeSlopes:
    """Least-squares log-log attenuation slopes in the three regimes.

    Raises:
        ParameterError: If ``tau_sigma / tau_eps < 1e3`` (no intermediate regime).
        DomainError: If the curve does not cover a window or the attenuation
            vanishes inside one.
    """
    if medium.tau_ratio < MIN_TAU_RATIO * (1 - 1e-12):
        raise ParameterError(
            f"tau_sigma/tau_eps = {medium.tau_ratio:.6g} < {MIN_TAU_RATIO:g}: "
            "no intermediate power-law regime")
    w = curve.omegas
    slopes = {}
    for name, (lo, hi) in slope_windows(medium).items():
        if w[0] > lo * (1 + 1e-9) or w[-1] < hi * (1 - 1e-9):
            raise DomainError(
                f"curve [{w[0]:.3g}, {w[-1]:.3g}] rad/s does not span the {name} window "
                f"[{lo:.3g}, {hi:.3g}]")
        sel = (w >= lo * (1 - 1e-9)) & (w <= hi * (1 + 1e-9))
        att = curve.attenuation[sel]
        if sel.sum() < 3:
            raise DomainError(f"fewer than 3 grid points in the {name} window")
        if np.any(att <= 0):
            raise DomainError(f"attenuation vanishes in the {name} window")
        slopes[name] = float(np.polyfit(np.log10(w[sel]), np.log10(att), 1)[0])
    return RegimeSlopes(**slopes)


# -- CSV interchange ----------------------------------------------------------

def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.12g}"


def curve_rows(curve: DispersionCurve, tau_sigma: float) -> list[tuple[float, float, float, float]]:
    """Rows ``(ωτσ, α_k, α_k normalized at ωτσ = 1, c_p)``.

    The normalized column is NaN when ``ωτσ = 1`` is outside the grid or the
    attenuation there is zero.
    """
    if curve.normalization is not None:
        normed = curve.attenuation
    else:
        try:
            normed = normalize(curve, 1.0 / tau_sigma).attenuation
        except DomainError:
            normed = np.full(len(curve), math.nan)
    raw = curve.raw_attenuation
    return [(float(w * tau_sigma), float(a), float(n), float(c))
            for w, a, n, c in zip(curve.omegas, raw, normed, curve.phase_velocity)]


def write_csv(curve: DispersionCurve, target: str | Path | TextIO, tau_sigma: float) -> None:
    """Write the curve as CSV with 12 significant digits."""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="") as fh:
            write_csv(curve, fh, tau_sigma)
        return
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in curve_rows(curve, tau_sigma):
        writer.writerow([_fmt(x) for x in row])


def curve_to_csv(curve: DispersionCurve, tau_sigma: float) -> str:
    buf = io.StringIO()
    write_csv(curve, buf, tau_sigma)
    return buf.getvalue()


def read_csv(source: str | Path | TextIO) -> dict[str, np.ndarray]:
    """Read a curve CSV back into columns keyed by the header names."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_csv(fh)
    reader = csv.reader(source)
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ParameterError(f"unexpected CSV header {header}")
    rows = np.array([[float(x) for x in row] for row in reader], dtype=float).reshape(-1, len(CSV_HEADER))
    return {name: rows[:, i] for i, name in enumerate(CSV_HEADER)}
