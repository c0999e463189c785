"""Generalized compressibility for the three acoustic loss model families.

* :class:`ZenerMedium` - five-parameter fractional Zener medium.
* :class:`DiscreteRelaxation` - finitely many Debye relaxation mechanisms.
* :class:`RelaxationDistribution` - a continuum of mechanisms weighted by a
  density over relaxation frequency.

The Mittag-Leffler distributions :func:`dist_ml_equal` and
:func:`dist_ml_general` turn a Zener medium into a relaxation continuum with
the same compressibility.

Sign convention: time dependence ``exp(+iωt)``, so lossy media have
``Im κ(ω) <= 0`` for ``ω > 0``. Every family returns exactly ``kappa0`` at
``ω = 0``.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from fracwave.errors import ParameterError
from fracwave.quad import DEFAULT_POLICY, Estimate, QuadPolicy, stieltjes_integral
from fracwave.specfun import _density_function


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ParameterError(f"{name} must be positive and finite, got {value}")
    return value


@dataclass(frozen=True)
class ZenerMedium:
    """Fractional Zener medium.

    Attributes:
        kappa0: Static compressibility (1/Pa).
        tau_sigma: Relaxation time on the strain side (s).
        tau_eps: Relaxation time on the stress side (s), ``<= tau_sigma``.
        alpha: Fractional order of the strain derivative, ``0 < alpha <= 1``.
        beta: Fractional order of the stress derivative, ``0 < beta <= alpha``.
        rho0: Ambient density (kg/m^3).
    """

    kappa0: float = 1.0
    tau_sigma: float = 1.0
    tau_eps: float = 1e-3
    alpha: float = 0.5
    beta: float = 0.5
    rho0: float = 1.0

    def __post_init__(self):
        for name in ("kappa0", "tau_sigma", "tau_eps", "alpha", "beta", "rho0"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))
        if self.alpha > 1.0:
            raise ParameterError(f"alpha must satisfy 0 < alpha <= 1, got {self.alpha}")
        if self.beta > self.alpha:
            raise ParameterError(
                f"thermodynamic constraint violated: beta={self.beta} must not exceed alpha={self.alpha}")
        if self.tau_eps > self.tau_sigma:
            raise ParameterError(
                f"tau_eps={self.tau_eps} must not exceed tau_sigma={self.tau_sigma}")

    @classmethod
    def normalized(cls, alpha: float, beta: float | None = None, tau_ratio: float = 1e3,
                   **overrides) -> ZenerMedium:
        """Medium with ``tau_sigma = kappa0 = rho0 = 1`` and ``tau_eps = 1 / tau_ratio``."""
        tau_sigma = overrides.pop("tau_sigma", 1.0)
        return cls(alpha=alpha, beta=alpha if beta is None else beta, tau_sigma=tau_sigma,
                   tau_eps=tau_sigma / tau_ratio, **overrides)

    @property
    def c0(self) -> float:
        """Low-frequency sound speed ``1 / sqrt(rho0 kappa0)``."""
        return 1.0 / math.sqrt(self.rho0 * self.kappa0)

    @property
    def tau_ratio(self) -> float:
        return self.tau_sigma / self.tau_eps


@dataclass(frozen=True)
class DiscreteRelaxation:
    """Finite set of Debye relaxation mechanisms.

    ``mechanisms`` holds ``(tau_nu, kappa_nu)`` pairs; an empty tuple is a
    lossless medium.
    """

    kappa0: float = 1.0
    rho0: float = 1.0
    mechanisms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        _positive("kappa0", self.kappa0)
        _positive("rho0", self.rho0)
        mechs = []
        for tau, kappa in self.mechanisms:
            tau = _positive("tau_nu", tau)
            kappa = float(kappa)
            if not (math.isfinite(kappa) and kappa >= 0):
                raise ParameterError(f"kappa_nu must be non-negative, got {kappa}")
            mechs.append((tau, kappa))
        object.__setattr__(self, "kappa0", float(self.kappa0))
        object.__setattr__(self, "rho0", float(self.rho0))
        object.__setattr__(self, "mechanisms", tuple(mechs))


@dataclass(frozen=True)
class RelaxationDistribution:
    """Continuum of relaxation mechanisms over a band of relaxation frequencies.

    Attributes:
        kappa0: Static compressibility (1/Pa).
        rho0: Ambient density (kg/m^3).
        density: Compressibility per unit relaxation frequency, ``Ω -> κ_ν(Ω)``.
        band: ``(Omega1, Omega2)`` in rad/s; ``Omega2`` may be ``math.inf``.
        singular_exponent: ``g`` with ``density ~ Ω**(g-1)`` near ``Ω = 0``,
            used to regularize the quadrature. ``None`` if the density is
            bounded there.
        tail_exponent: ``d`` with ``density ~ Ω**(-1-d)`` as ``Ω -> inf``.
        scale: Characteristic relaxation frequency, always used as a panel split.
    """

    kappa0: float
    rho0: float
    density: Callable[[float], float]
    band: tuple[float, float] = (0.0, math.inf)
    singular_exponent: float | None = None
    tail_exponent: float | None = None
    scale: float | None = None

    def __post_init__(self):
        _positive("kappa0", self.kappa0)
        _positive("rho0", self.rho0)
        lo, hi = (float(x) for x in self.band)
        if not (0.0 <= lo < hi):
            raise ParameterError(f"band must satisfy 0 <= Omega1 < Omega2, got [{lo}, {hi}]")
        object.__setattr__(self, "band", (lo, hi))

    def with_band(self, omega1: float, omega2: float) -> RelaxationDistribution:
        """Same density restricted to ``[omega1, omega2]``."""
        return RelaxationDistribution(self.kappa0, self.rho0, self.density, (omega1, omega2),
                                      self.singular_exponent, self.tail_exponent, self.scale)

    def policy(self, base: QuadPolicy = DEFAULT_POLICY) -> QuadPolicy:
        """``base`` with this distribution's characteristic frequency added as a split."""
        return base.with_split_points(self.scale) if self.scale else base

    def min_density(self, points_per_decade: int = 20, decades: float = 8.0) -> float:
        """Smallest density value on a log grid over the band.

        Infinite or zero band ends are replaced by ``scale * 10**(±decades)``.
        Used as a sign diagnostic; the density is not required to be positive.
        """
        centre = self.scale or 1.0
        lo = self.band[0] if self.band[0] > 0 else centre * 10.0**-decades
        hi = self.band[1] if math.isfinite(self.band[1]) else centre * 10.0**decades
        n = max(2, int(round(math.log10(hi / lo) * points_per_decade)) + 1)
        return min(self.density(float(w)) for w in np.geomspace(lo, hi, n))


Medium = Union[ZenerMedium, DiscreteRelaxation, RelaxationDistribution]


def kappa_zener(m: ZenerMedium, omega):
    """Fractional Zener compressibility ``κ0 (1 + (iωτε)^β) / (1 + (iωτσ)^α)``.

    ``(iω)^γ`` is the principal branch ``ω^γ exp(iπγ/2)``. Accepts a scalar
    or an array of non-negative frequencies.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ParameterError("omega must be non-negative")
    num = 1.0 + (m.tau_eps * w) ** m.beta * np.exp(0.5j * math.pi * m.beta)
    den = 1.0 + (m.tau_sigma * w) ** m.alpha * np.exp(0.5j * math.pi * m.alpha)
    # 1 + (num - den)/den stays exactly real in the lossless case num == den
    kappa = np.where(w == 0, m.kappa0 + 0j, m.kappa0 * (1.0 + (num - den) / den))
    return complex(kappa) if kappa.ndim == 0 else kappa


def kappa_discrete(d: DiscreteRelaxation, omega):
    """Discrete relaxation compressibility ``κ0 - iω Σ κν τν / (1 + iωτν)``."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ParameterError("omega must be non-negative")
    total = np.zeros_like(w, dtype=complex)
    for tau, kappa in d.mechanisms:
        total = total + kappa * tau / (1.0 + 1j * w * tau)
    kappa = np.where(w == 0, d.kappa0 + 0j, d.kappa0 - 1j * w * total)
    return complex(kappa) if kappa.ndim == 0 else kappa


def kappa_continuum(r: RelaxationDistribution, omega: float,
                    policy: QuadPolicy = DEFAULT_POLICY) -> Estimate:
    """Continuum compressibility ``κ0 - iω ∫ κν(Ω) / (Ω + iω) dΩ``.

    Returns:
        The compressibility and its absolute error estimate.

    Raises:
        QuadratureError: If the Stieltjes integral cannot meet ``policy``.
    """
    omega = float(omega)
    if not omega >= 0:
        raise ParameterError(f"omega must be non-negative, got {omega}")
    if omega == 0.0:
        return Estimate(complex(r.kappa0), 0.0)
    value, err = stieltjes_integral(r.density, omega, r.band, r.policy(policy),
                                    singular_exponent=r.singular_exponent,
                                    tail_exponent=r.tail_exponent)
    return Estimate(r.kappa0 - 1j * omega * value, omega * err)


def compressibility(medium: Medium, omega: float, policy: QuadPolicy = DEFAULT_POLICY) -> Estimate:
    """Compressibility of any medium at one frequency, with an error estimate."""
    if isinstance(medium, ZenerMedium):
        return Estimate(kappa_zener(medium, float(omega)), 0.0)
    if isinstance(medium, DiscreteRelaxation):
        return Estimate(kappa_discrete(medium, float(omega)), 0.0)
    if isinstance(medium, RelaxationDistribution):
        return kappa_continuum(medium, omega, policy)
    raise TypeError(f"unsupported medium type {type(medium).__name__}")


def dist_ml_equal(m: ZenerMedium) -> RelaxationDistribution:
    """Mittag-Leffler relaxation continuum reproducing a Zener medium with ``alpha == beta``.

    The density is ``κ0 (1 - (τε/τσ)^α) f_{α,1}(Ω, τσ^-α)`` on ``[0, inf)``.
    """
    if m.alpha != m.beta:
        raise ParameterError(f"dist_ml_equal needs alpha == beta, got {m.alpha} and {m.beta}")
    _require_fractional(m)
    A = m.tau_sigma ** -m.alpha
    weight = m.kappa0 * (1.0 - (m.tau_eps / m.tau_sigma) ** m.alpha)
    f = _density_function(m.alpha, 1.0, A)

    def density(w: float) -> float:
        return weight * f(w)

    return RelaxationDistribution(m.kappa0, m.rho0, density, (0.0, math.inf),
                                  singular_exponent=m.alpha, tail_exponent=m.alpha,
                                  scale=1.0 / m.tau_sigma)


def dist_ml_general(m: ZenerMedium) -> RelaxationDistribution:
    """Relaxation continuum reproducing a Zener medium with ``beta <= alpha``.

    The density is ``κ0 f_{α,1}(Ω, A) - κ0 (τε^β / τσ^α) f_{α,α-β+1}(Ω, A)``
    with ``A = τσ^-α``. For ``beta < alpha`` it may change sign; see
    :meth:`RelaxationDistribution.min_density`.
    """
    _require_fractional(m)
    a, b = m.alpha, m.beta
    A = m.tau_sigma ** -a
    f1 = _density_function(a, 1.0, A)
    f2 = _density_function(a, a - b + 1.0, A)
    k1 = m.kappa0
    k2 = m.kappa0 * m.tau_eps**b / m.tau_sigma**a

    def density(w: float) -> float:
        return k1 * f1(w) - k2 * f2(w)

    # near 0 the second term dominates as Ω^(β-1); at infinity it decays as
    # Ω^(β-α-1), unless β == α where its sin((α-β)π) coefficient vanishes
    return RelaxationDistribution(m.kappa0, m.rho0, density, (0.0, math.inf),
                                  singular_exponent=b, tail_exponent=a - b if b < a else a,
                                  scale=1.0 / m.tau_sigma)


def _require_fractional(m: ZenerMedium) -> None:
    if not m.alpha < 1.0:
        raise ParameterError(
            "alpha = 1 collapses the relaxation density to a single mechanism; "
            "use DiscreteRelaxation instead")


# -- flat key-value serialization -------------------------------------------

ZENER_KEYS = ("kappa0", "tau_sigma", "tau_eps", "alpha", "beta", "rho0")


def parse_medium_text(text: str) -> dict:
    """Parse ``key = value`` lines into a dict.

    Blank lines and ``#`` comments are ignored. ``tau_nu`` and ``kappa_nu``
    may repeat; they are paired in order into ``"mechanisms"``.
    """
    values: dict = {}
    taus: list[float] = []
    kappas: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, sep, value = line.partition(":")
        key = key.strip()
        if not sep or not key:
            raise ParameterError(f"line {lineno}: expected 'key = value', got {raw!r}")
        try:
            number = float(value)
        except ValueError:
            raise ParameterError(f"line {lineno}: {key} is not a number: {value.strip()!r}") from None
        if key == "tau_nu":
            taus.append(number)
        elif key == "kappa_nu":
            kappas.append(number)
        elif key in ZENER_KEYS:
            if key in values:
                raise ParameterError(f"line {lineno}: duplicate key {key}")
            values[key] = number
        else:
            raise ParameterError(f"line {lineno}: unknown key {key!r}")
    if len(taus) != len(kappas):
        raise ParameterError(f"{len(taus)} tau_nu values but {len(kappas)} kappa_nu values")
    if taus:
        values["mechanisms"] = tuple(zip(taus, kappas))
    return values


def medium_from_mapping(values: Mapping) -> ZenerMedium | DiscreteRelaxation:
    """Build a medium: discrete if mechanisms are present, Zener otherwise."""
    if "mechanisms" in values:
        extra = set(values) - {"kappa0", "rho0", "mechanisms"}
        if extra:
            raise ParameterError(f"discrete medium does not take {sorted(extra)}")
        return DiscreteRelaxation(**values)
    missing = [k for k in ZENER_KEYS if k not in values]
    if missing:
        raise ParameterError(f"Zener medium is missing {missing}")
    return ZenerMedium(**{k: values[k] for k in ZENER_KEYS})


def loads_medium(text: str) -> ZenerMedium | DiscreteRelaxation:
    return medium_from_mapping(parse_medium_text(text))


def load_medium(path: str | Path) -> ZenerMedium | DiscreteRelaxation:
    return loads_medium(Path(path).read_text())


def dumps_medium(medium: ZenerMedium | DiscreteRelaxation) -> str:
    """Serialize a medium to the key-value format with round-trip precision."""
    if isinstance(medium, ZenerMedium):
        lines = [f"{k} = {getattr(medium, k)!r}" for k in ZENER_KEYS]
    elif isinstance(medium, DiscreteRelaxation):
        lines = [f"kappa0 = {medium.kappa0!r}", f"rho0 = {medium.rho0!r}"]
        for tau, kappa in medium.mechanisms:
            lines += [f"tau_nu = {tau!r}", f"kappa_nu = {kappa!r}"]
    else:
        raise TypeError(f"cannot serialize {type(medium).__name__}")
    return "\n".join(lines) + "\n"
