"""Recursive adaptive Simpson quadrature.

The engine behind the continuum relaxation integrals. Three layers:

- :func:`adaptive_simpson` is the plain recursive rule on a finite interval.
- :func:`integrate` splits an interval (possibly ending at infinity) into
  panels and removes endpoint singularities and infinite tails with power
  substitutions whose exponents are supplied by the caller.
- :func:`stieltjes_integral` evaluates ``∫ density(Ω) / (Ω + iω) dΩ`` as two
  real quadratures.

All routines are pure functions of their arguments and hold no state.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from typing import NamedTuple

from fracwave.errors import NonIntegrableError, QuadratureError

_EPS = 2.0**-52

# the first Simpson pass uses this many panels so narrow features are not missed
_SEED_PANELS = 8

# mapped endpoints are sampled this far inside the panel, relative to its width
_ENDPOINT_OFFSET = 1e-12


@dataclass(frozen=True)
class QuadPolicy:
    """Tolerances and subdivision budget for adaptive quadrature.

    Attributes:
        rel_tol: Target error relative to the magnitude of each panel integral.
        abs_tol: Absolute error floor, in integrand units times abscissa units.
        max_depth: Maximum number of interval halvings below the seed panels.
        split_points: Abscissae at which integration panels are always split.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    max_depth: int = 40
    split_points: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise ValueError(f"abs_tol must be non-negative, got {self.abs_tol}")
        if not 10 <= self.max_depth <= 60:
            raise ValueError(f"max_depth must lie in [10, 60], got {self.max_depth}")
        object.__setattr__(self, "split_points", tuple(float(p) for p in self.split_points))

    def with_split_points(self, *points: float) -> QuadPolicy:
        return replace(self, split_points=tuple(sorted(set(self.split_points) | set(points))))


DEFAULT_POLICY = QuadPolicy()


class Estimate(NamedTuple):
    """A computed value with its estimated absolute error."""

    value: float | complex
    error: float


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     policy: QuadPolicy = DEFAULT_POLICY) -> Estimate:
    """Integrate ``f`` over the finite interval ``[a, b]``.

    Each seed panel is halved recursively until the two-half Simpson sum
    differs from the whole-panel sum by at most ``15 * tol``, with the panel
    tolerance halved on every split. Accepted panels contribute their
    Richardson-corrected value.

    Args:
        f: Real integrand, evaluated at both endpoints.
        a: Lower limit.
        b: Upper limit, ``b > a``.
        policy: Tolerances and depth budget.

    Returns:
        The integral and an error estimate that includes a round-off floor.

    Raises:
        ValueError: If the limits are not finite or not ordered.
        QuadratureError: If some panel still fails the test at ``max_depth``,
            or the integrand returns a non-finite value.
    """
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise ValueError(f"need finite limits with a < b, got [{a}, {b}]")

    n = 2 * _SEED_PANELS
    h = (b - a) / n
    xs = [a + i * h for i in range(n)] + [b]
    fs = [_checked(f, x) for x in xs]
    seeds = []
    for k in range(_SEED_PANELS):
        i = 2 * k
        whole = (xs[i + 2] - xs[i]) / 6.0 * (fs[i] + 4.0 * fs[i + 1] + fs[i + 2])
        seeds.append((xs[i], fs[i], xs[i + 1], fs[i + 1], xs[i + 2], fs[i + 2], whole))

    scale = abs(sum(s[-1] for s in seeds))
    tol = max(policy.abs_tol, policy.rel_tol * scale) / _SEED_PANELS

    state = _State(f, policy.max_depth)
    total = 0.0
    for seed in seeds:
        total += state.refine(*seed, tol, 0)

    # round-off in the accumulated panel sums
    error = state.error + 8.0 * _EPS * state.magnitude
    if state.exhausted:
        raise QuadratureError(
            f"adaptive Simpson reached max_depth={policy.max_depth} on [{a}, {b}]",
            partial=total, error=error)
    return Estimate(total, error)


class _State:
    __slots__ = ("f", "max_depth", "error", "magnitude", "exhausted")

    def __init__(self, f, max_depth):
        self.f = f
        self.max_depth = max_depth
        self.error = 0.0
        self.magnitude = 0.0
        self.exhausted = False

    def refine(self, a, fa, m, fm, b, fb, whole, tol, depth):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = _checked(self.f, lm)
        frm = _checked(self.f, rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        halves = left + right
        delta = halves - whole

        converged = abs(delta) <= 15.0 * tol or abs(delta) <= 64.0 * _EPS * (abs(left) + abs(right))
        if not converged and (depth >= self.max_depth or not a < lm < m < rm < b):
            self.exhausted = True
            converged = True
        if converged:
            self.error += abs(delta) / 15.0
            self.magnitude += abs(left) + abs(right)
            return halves + delta / 15.0
        return (self.refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1)
                + self.refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1))


def _checked(f, x):
    try:
        y = f(x)
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise QuadratureError(f"integrand failed at x={x!r}: {exc}") from None
    if not math.isfinite(y):
        raise QuadratureError(f"integrand is not finite at x={x!r} (got {y!r})")
    return y


def integrate(f: Callable[[float], float], a: float, b: float,
              policy: QuadPolicy = DEFAULT_POLICY, *,
              singular_exponent: float | None = None,
              tail_exponent: float | None = None) -> Estimate:
    """Integrate over ``[a, b]`` where ``b`` may be ``+inf``.

    The interval is cut at every ``policy.split_points`` entry inside it.
    Panels whose ends differ by more than a factor of four on the positive
    axis are integrated in ``log x``.

    Args:
        f: Real integrand.
        a: Finite lower limit.
        b: Upper limit, finite or ``math.inf``.
        policy: Tolerances, depth budget and split points.
        singular_exponent: If given as ``g``, the first panel is mapped with
            ``u = (x - a)**g``, which makes ``(x - a)**(g - 1)`` behaviour at
            ``a`` regular.
        tail_exponent: If given as ``d``, the infinite tail is mapped with
            ``v = x**(-d)``; defaults to ``d = 1``.

    Returns:
        Sum of the panel integrals and of their error estimates.

    Raises:
        QuadratureError: If any panel fails; carries the partial sum.
    """
    if not math.isfinite(a) or not a < b:
        raise ValueError(f"need finite a < b, got [{a}, {b}]")
    if singular_exponent is not None and not singular_exponent > 0:
        raise NonIntegrableError(
            f"singularity (x - a)^({singular_exponent} - 1) at x={a} is not integrable")
    if tail_exponent is not None and not tail_exponent > 0:
        raise ValueError(f"tail_exponent must be positive, got {tail_exponent}")

    points = sorted(p for p in set(policy.split_points) if a < p < b)
    if math.isinf(b) and not points:
        points = [a + 1.0 if a <= 0 else 2.0 * a]
    edges = [a, *points] + ([] if math.isinf(b) else [b])

    pieces: list[tuple[Callable[[float], float], float, float]] = []
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        if i == 0 and singular_exponent is not None:
            pieces.append(_power_map(f, lo, hi, singular_exponent))
        elif lo > 0 and hi > 4.0 * lo:
            pieces.append(_log_map(f, lo, hi))
        else:
            pieces.append((f, lo, hi))
    if math.isinf(b):
        pieces.append(_tail_map(f, edges[-1], tail_exponent or 1.0))

    total = 0.0
    error = 0.0
    failed: QuadratureError | None = None
    for g, lo, hi in pieces:
        try:
            value, err = adaptive_simpson(g, lo, hi, policy)
        except QuadratureError as exc:
            failed = failed or exc
            value, err = exc.partial, exc.error
        total += value
        error += err
    if failed is not None:
        raise QuadratureError(str(failed), partial=total, error=error)
    return Estimate(total, error)


def _power_map(f, a, b, g):
    # x = a + u**(1/g), dx = (1/g) u**(1/g - 1) du
    u_end = (b - a) ** g
    floor = _ENDPOINT_OFFSET * u_end
    p = 1.0 / g

    def mapped(u):
        u = max(u, floor)
        return f(a + u**p) * p * u ** (p - 1.0)

    return mapped, 0.0, u_end


def _log_map(f, a, b):
    def mapped(s):
        x = math.exp(s)
        return f(x) * x

    return mapped, math.log(a), math.log(b)


def _tail_map(f, c, d):
    # x = v**(-1/d), dx = -(1/d) v**(-1/d - 1) dv, v in (0, c**-d]
    v_end = c ** (-d)
    floor = _ENDPOINT_OFFSET * v_end
    p = 1.0 / d

    def mapped(v):
        v = max(v, floor)
        return f(v ** (-p)) * p * v ** (-p - 1.0)

    return mapped, 0.0, v_end


def stieltjes_integral(density: Callable[[float], float], omega: float,
                       band: Sequence[float], policy: QuadPolicy = DEFAULT_POLICY, *,
                       singular_exponent: float | None = None,
                       tail_exponent: float | None = None) -> Estimate:
    """Evaluate ``∫ density(Ω) / (Ω + iω) dΩ`` over ``band``.

    The real part integrates ``density(Ω) Ω / (Ω² + ω²)`` and the imaginary
    part ``-density(Ω) ω / (Ω² + ω²)``. ``ω`` is added to the split points.

    Args:
        density: Relaxation density of the continuum.
        omega: Angular frequency, ``>= 0``.
        band: ``(Omega1, Omega2)`` with ``0 <= Omega1 < Omega2 <= inf``.
        policy: Quadrature policy; its split points should include the
            density's characteristic frequency.
        singular_exponent: ``g`` such that the density behaves like
            ``Ω**(g - 1)`` as ``Ω -> Omega1 = 0``.
        tail_exponent: ``d`` such that the density decays like ``Ω**(-1 - d)``.

    Returns:
        The complex integral with the summed error estimate of both parts.

    Raises:
        NonIntegrableError: If the density singularity is not integrable, or
            ``omega == 0`` with a density that does not vanish fast enough at 0.
        QuadratureError: If either real quadrature fails.
    """
    lo, hi = float(band[0]), float(band[1])
    if not (0.0 <= lo < hi):
        raise ValueError(f"invalid band [{lo}, {hi}]")
    if not omega >= 0:
        raise ValueError(f"omega must be non-negative, got {omega}")
    if singular_exponent is not None and not singular_exponent > 0:
        raise NonIntegrableError(
            f"density ~ Omega^({singular_exponent} - 1) is not integrable at Omega=0")
    singular = singular_exponent if lo == 0.0 else None

    w2 = omega * omega
    if omega == 0.0:
        if lo == 0.0 and (singular_exponent is None or singular_exponent <= 1.0):
            raise NonIntegrableError(
                "density / Omega is not integrable at Omega=0 for omega=0")
        real, err = integrate(lambda x: density(x) / x, lo, hi, policy,
                              singular_exponent=None if singular is None else singular - 1.0,
                              tail_exponent=tail_exponent)
        return Estimate(complex(real, 0.0), err)

    pol = policy.with_split_points(omega)

    def re_part(x):
        return density(x) * x / (x * x + w2)

    def im_part(x):
        return -density(x) * omega / (x * x + w2)

    errors = []
    values = []
    failure = None
    for part in (re_part, im_part):
        try:
            value, err = integrate(part, lo, hi, pol, singular_exponent=singular,
                                   tail_exponent=tail_exponent)
        except QuadratureError as exc:
            failure = failure or exc
            value, err = exc.partial, exc.error
        values.append(value)
        errors.append(err)
    result = complex(values[0], values[1])
    if failure is not None:
        raise QuadratureError(str(failure), partial=result, error=sum(errors), omega=omega)
    return Estimate(result, sum(errors))
