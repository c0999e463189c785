"""Two-parameter Mittag-Leffler function and its relaxation spectrum.

``E_{a,b}(z) = sum_n z**n / Gamma(a n + b)`` is evaluated by its Taylor series
for ``|z| <= z_switch`` and, for large negative real arguments, through the
Laplace representation

    t**(b-1) E_{a,b}(-A t**a) = ∫_0^∞ exp(-Ω t) f_{a,b}(Ω, A) dΩ,   0 < a < 1,

with the spectral density ``f_{a,b}`` from :func:`spectral_density`.

Accuracy targets are relative ``1e-10`` on the series path and ``1e-8`` on
the integral path. Anything that cannot be certified to these targets raises
:class:`~fracwave.errors.ConvergenceError` instead of returning a value.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from fracwave.errors import ConvergenceError, DomainError, ParameterError, QuadratureError
from fracwave.quad import QuadPolicy, integrate

Z_SWITCH = 5.0
SERIES_RTOL = 1e-10
INTEGRAL_RTOL = 1e-8

_EPS = 2.0**-52
_MAX_TERMS = 100_000
_INTEGRAL_POLICY = QuadPolicy(rel_tol=1e-11, max_depth=50)


@dataclass(frozen=True)
class MLParams:
    """Orders ``(a, b)`` of a Mittag-Leffler function, both real and positive."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise ParameterError(f"order a must be positive, got {self.a}")
        if not (math.isfinite(self.b) and self.b > 0):
            raise ParameterError(f"order b must be positive, got {self.b}")

    @property
    def has_integral_form(self) -> bool:
        """True when the Laplace representation converges (0 < a < 1, b < 1 + a)."""
        return self.a < 1.0 and self.b < 1.0 + self.a


def mittag_leffler(a: float, b: float, z: complex, *, z_switch: float = Z_SWITCH) -> complex:
    """Evaluate ``E_{a,b}(z)``.

    Args:
        a: First order, ``a > 0``.
        b: Second order, ``b > 0``.
        z: Finite complex argument.
        z_switch: Largest ``|z|`` handled by the series before large negative
            real arguments move to the integral representation.

    Raises:
        ParameterError: If ``a <= 0`` or ``b <= 0``.
        ConvergenceError: If no available scheme meets the accuracy target,
            e.g. large complex ``|z|`` where the series loses all digits.
    """
    p = MLParams(float(a), float(b))
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z}")
    if z == 0:
        return complex(1.0 / math.gamma(p.b))
    if p.a == 1.0 and p.b == 1.0:
        return cmath.exp(z)

    negative_real = z.imag == 0.0 and z.real < 0.0
    if negative_real and abs(z) > z_switch and p.has_integral_form:
        return complex(_integral(p, -z.real))

    try:
        value, rounding = _series(p, z)
    except ConvergenceError:
        if negative_real and p.has_integral_form:
            return complex(_integral(p, -z.real))
        raise
    if rounding <= SERIES_RTOL * abs(value):
        return value
    if negative_real and p.has_integral_form:
        return complex(_integral(p, -z.real))
    raise ConvergenceError(
        f"series for E_{{{p.a},{p.b}}}({z}) loses too many digits to cancellation "
        f"(rounding bound {rounding:.3g} vs |E| = {abs(value):.3g})")


def _series(p: MLParams, z: complex) -> tuple[complex, float]:
    """Sum the Taylor series; returns the value and a bound on its rounding error.

    The truncation rule is rigorous: ``log Gamma`` is convex, so the ratio of
    consecutive term magnitudes ``|z| Gamma(a n + b) / Gamma(a n + a + b)``
    decreases in ``n``, and once it is below one the remaining tail is
    bounded by a geometric series. Terms are summed with ``math.fsum``; the
    rounding bound charges each term ``(n + 4) eps`` relative error.
    """
    a, b = p.a, p.b
    log_r = math.log(abs(z))
    real_z = z.imag == 0.0
    re_terms: list[float] = []
    im_terms: list[float] = []
    running = 0j
    rounding = 0.0
    n = 0
    log_gamma_n = math.lgamma(b)
    try:
        while n < _MAX_TERMS:
            x = a * n + b
            if x < 170.0 and n * log_r < 700.0:
                term = (z.real**n if real_z else z**n) / math.gamma(x)
            else:
                term = math.exp(n * log_r - log_gamma_n) * (z / abs(z)) ** n
            term = complex(term)
            re_terms.append(term.real)
            im_terms.append(term.imag)
            running += term
            magnitude = abs(term)
            rounding += (n + 4) * _EPS * magnitude
            log_gamma_next = math.lgamma(x + a)
            ratio = math.exp(log_r + log_gamma_n - log_gamma_next)
            if ratio < 1.0:
                tail = magnitude * ratio / (1.0 - ratio)
                if tail <= 0.1 * SERIES_RTOL * abs(running) or tail <= 1e-300:
                    break
            n += 1
            log_gamma_n = log_gamma_next
        else:
            raise ConvergenceError(f"series for E_{{{a},{b}}}({z}) needs more than {_MAX_TERMS} terms")
    except OverflowError:
        raise ConvergenceError(f"series for E_{{{a},{b}}}({z}) overflows double precision") from None
    total = complex(math.fsum(re_terms), math.fsum(im_terms))
    if not (math.isfinite(total.real) and math.isfinite(total.imag)):
        raise ConvergenceError(f"series for E_{{{a},{b}}}({z}) overflows double precision")
    return total, rounding + tail


def _integral(p: MLParams, x: float) -> float:
    """``E_{a,b}(-x)`` from the Laplace representation at ``t = 1``."""
    a, b = p.a, p.b
    density = _density_function(a, b, x)
    # f ~ Ω^(a-b) at the origin; when b == a the leading coefficient vanishes
    singular = 1.0 + a - b if b != a else 1.0 + a
    peak = x ** (1.0 / a)
    points = sorted({1.0, min(peak, 60.0)})
    policy = QuadPolicy(rel_tol=_INTEGRAL_POLICY.rel_tol, max_depth=_INTEGRAL_POLICY.max_depth,
                        split_points=points)
    try:
        value, err = integrate(lambda w: math.exp(-w) * density(w), 0.0, math.inf, policy,
                               singular_exponent=singular)
    except QuadratureError as exc:
        raise ConvergenceError(f"integral representation of E_{{{a},{b}}}({-x}) failed: {exc}") from exc
    if not err <= INTEGRAL_RTOL * abs(value):
        raise ConvergenceError(
            f"integral representation of E_{{{a},{b}}}({-x}) missed its target "
            f"(error {err:.3g} vs |E| = {abs(value):.3g})")
    return value


def ml_kernel(a: float, b: float, A: float, t: float) -> float:
    """Relaxation kernel ``t**(b-1) * E_{a,b}(-A t**a)``.

    Completely monotone in ``t`` for ``0 < a <= 1`` and ``0 < b <= 1``.

    Raises:
        DomainError: If ``t <= 0``, ``A <= 0`` or ``a`` is outside ``(0, 1]``.
    """
    MLParams(a, b)
    if not t > 0:
        raise DomainError(f"kernel is only defined for t > 0, got t={t}")
    if not A > 0:
        raise DomainError(f"rate A must be positive, got {A}")
    if not a <= 1.0:
        raise DomainError(f"kernel requires 0 < a <= 1, got a={a}")
    return t ** (b - 1.0) * mittag_leffler(a, b, -A * t**a).real


def spectral_density(a: float, b: float, A: float, Omega: float) -> float:
    """Spectral density ``f_{a,b}(Ω, A)`` whose Laplace transform is the kernel.

        f = Ω**(a-b)/π · [A sin((b-a)π) + Ω**a sin(bπ)] / [Ω**(2a) + 2AΩ**a cos(aπ) + A²]

    For ``0 < a < 1`` the denominator is at least ``A² sin²(aπ)``.

    Raises:
        DomainError: If ``Omega <= 0``, ``A <= 0`` or ``a`` is outside ``(0, 1)``;
            at ``a = 1`` the density degenerates into a point mass.
    """
    MLParams(a, b)
    if not 0.0 < a < 1.0:
        raise DomainError(f"spectral density requires 0 < a < 1, got a={a}")
    if not A > 0:
        raise DomainError(f"rate A must be positive, got {A}")
    if not Omega > 0:
        raise DomainError(f"Omega must be positive, got {Omega}")
    return _density_function(a, b, A)(Omega)


def sinpi(x: float) -> float:
    """``sin(πx)``, exactly zero at integers."""
    r = math.fmod(x, 2.0)
    if r == int(r):
        return 0.0
    if 2.0 * r == int(2.0 * r):
        return 1.0 if r in (0.5, -1.5) else -1.0
    return math.sin(math.pi * r)


def cospi(x: float) -> float:
    """``cos(πx)``, exactly zero at half-integers."""
    return sinpi(x + 0.5)


def _density_function(a: float, b: float, A: float):
    """Unchecked ``Ω -> f_{a,b}(Ω, A)`` with constants hoisted out."""
    s_ba = A * sinpi(b - a)
    s_b = sinpi(b)
    c2 = 2.0 * A * cospi(a)
    a2 = A * A
    amb = a - b

    def f(w: float) -> float:
        wa = w**a
        return w**amb / math.pi * (s_ba + wa * s_b) / (wa * wa + c2 * wa + a2)

    return f
