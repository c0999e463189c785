import math

import pytest

from fracwave.errors import NonIntegrableError, QuadratureError
from fracwave.quad import QuadPolicy, adaptive_simpson, integrate, stieltjes_integral

# (integrand, a, b, exact) with closed-form antiderivatives
SMOOTH_SUITE = [
    (math.exp, 0.0, 1.0, math.e - 1.0),
    (math.sin, 0.0, math.pi, 2.0),
    (math.cos, 0.0, math.pi / 2, 1.0),
    (lambda x: 1 / (1 + x * x), 0.0, 1.0, math.pi / 4),
    (lambda x: 1 / (1 + x), 0.0, 1.0, math.log(2)),
    (lambda x: x**5, 0.0, 2.0, 64 / 6),
    (lambda x: math.sqrt(x + 1), 0.0, 3.0, 14 / 3),
    (lambda x: math.exp(-x * x), 0.0, 2.0, math.sqrt(math.pi) / 2 * math.erf(2)),
    (lambda x: x * math.exp(x), 0.0, 1.0, 1.0),
    (lambda x: math.log1p(x), 0.0, 1.0, 2 * math.log(2) - 1),
    (lambda x: 1 / (x * x + 0.01), -1.0, 1.0, 20 * math.atan(10)),
    (lambda x: math.sin(10 * x), 0.0, 1.0, (1 - math.cos(10)) / 10),
    (math.cosh, -1.0, 2.0, math.sinh(2) + math.sinh(1)),
    (lambda x: 1 / x, 1.0, 10.0, math.log(10)),
    (math.tan, 0.0, 1.0, -math.log(math.cos(1))),
    (lambda x: 1 / math.cos(x) ** 2, 0.0, 1.0, math.tan(1)),
    (lambda x: math.exp(-3 * x) * math.sin(5 * x), 0.0, 2.0,
     (math.exp(-6) * (-3 * math.sin(10) - 5 * math.cos(10)) + 5) / 34),
    (lambda x: x * x * math.cos(x), 0.0, math.pi, -2 * math.pi),
    (math.atan, 0.0, 1.0, math.pi / 4 - math.log(2) / 2),
    (lambda x: 1 / math.sqrt(1 + x), 0.0, 8.0, 4.0),
]


class TestAdaptiveSimpson:
    def test_cubic_exact(self):
        value, err = adaptive_simpson(lambda x: x * x, 0.0, 1.0)
        assert abs(value - 1 / 3) <= 2e-16
        assert err < 1e-15

    def test_sine(self):
        value, _ = adaptive_simpson(math.sin, 0.0, math.pi, QuadPolicy(rel_tol=1e-12))
        assert abs(value - 2.0) <= 1e-10

    @pytest.mark.parametrize("rel_tol", [1e-4, 1e-8, 1e-12])
    @pytest.mark.parametrize("case", range(len(SMOOTH_SUITE)))
    def test_error_estimate_is_honest(self, case, rel_tol):
        f, a, b, exact = SMOOTH_SUITE[case]
        value, err = adaptive_simpson(f, a, b, QuadPolicy(rel_tol=rel_tol))
        assert abs(value - exact) <= 10 * err
        assert err <= max(rel_tol * abs(exact), 1e-14)

    def test_depth_exhaustion_reports_partial(self):
        def step(x):
            return 0.0 if x < 1 / 3 else 1.0

        with pytest.raises(QuadratureError) as info:
            adaptive_simpson(step, 0.0, 1.0, QuadPolicy(rel_tol=1e-14, max_depth=10))
        assert info.value.partial == pytest.approx(2 / 3, abs=1e-3)
        assert info.value.error > 0

    def test_non_finite_integrand(self):
        with pytest.raises(QuadratureError):
            adaptive_simpson(lambda x: 1 / x, 0.0, 1.0)

    @pytest.mark.parametrize("a,b", [(1.0, 1.0), (2.0, 1.0), (0.0, math.inf)])
    def test_rejects_bad_limits(self, a, b):
        with pytest.raises(ValueError):
            adaptive_simpson(math.exp, a, b)


class TestPolicy:
    @pytest.mark.parametrize("kwargs", [dict(rel_tol=0), dict(abs_tol=-1), dict(max_depth=9),
                                        dict(max_depth=61)])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            QuadPolicy(**kwargs)

    def test_split_points_merge(self):
        p = QuadPolicy(split_points=(3.0, 1.0)).with_split_points(2.0, 1.0)
        assert p.split_points == (1.0, 2.0, 3.0)


class TestIntegrate:
    def test_inverse_sqrt_endpoint(self):
        value, _ = integrate(lambda x: x**-0.5, 0.0, 1.0, singular_exponent=0.5)
        assert abs(value - 2.0) <= 1e-8

    def test_semi_infinite_exponential(self):
        value, _ = integrate(lambda x: math.exp(-x), 0.0, math.inf, QuadPolicy(rel_tol=1e-10))
        assert value == pytest.approx(1.0, rel=1e-9)

    def test_semi_infinite_power_tail(self):
        # ∫_1^∞ x^-1.2 dx = 5, decaying like x^(-1-0.2)
        value, _ = integrate(lambda x: x**-1.2, 1.0, math.inf, QuadPolicy(rel_tol=1e-10),
                             tail_exponent=0.2)
        assert value == pytest.approx(5.0, rel=1e-8)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_substitution_matches_truncated_direct(self, alpha):
        # ∫_0^1 Ω^(α-1) e^-Ω dΩ: direct quadrature on [ε, 1] plus the analytic
        # piece ∫_0^ε Ω^(α-1)(1 - Ω) dΩ, compared with the u = Ω^α substitution
        def f(w):
            return w ** (alpha - 1) * math.exp(-w)

        policy = QuadPolicy(rel_tol=1e-11)
        mapped, _ = integrate(f, 0.0, 1.0, policy, singular_exponent=alpha)
        eps = 1e-9
        direct, _ = integrate(f, eps, 1.0, policy)
        head = eps**alpha / alpha - eps ** (alpha + 1) / (alpha + 1)
        assert abs(mapped - (direct + head)) <= 1e-7

    def test_nonintegrable_singularity_flagged(self):
        with pytest.raises(NonIntegrableError):
            integrate(lambda x: 1 / x, 0.0, 1.0, singular_exponent=0.0)


class TestStieltjes:
    def test_zero_density(self):
        value, err = stieltjes_integral(lambda w: 0.0, 1.0, (0.0, math.inf))
        assert value == 0j and err == 0.0

    def test_rectangle_closed_form(self):
        value, _ = stieltjes_integral(lambda w: 1.0, 1.0, (1.0, 2.0), QuadPolicy(rel_tol=1e-12))
        assert abs(value.real - 0.45814536593707755) <= 1e-10  # ½ ln(5/2)
        assert abs(value.imag + 0.32175055439664213) <= 1e-10  # -(atan 2 - π/4)

    def test_interior_singularity_rejected(self):
        with pytest.raises(NonIntegrableError):
            stieltjes_integral(lambda w: 1 / w, 1.0, (0.0, 1.0), singular_exponent=0.0)

    def test_zero_frequency_nonintegrable(self):
        with pytest.raises(NonIntegrableError):
            stieltjes_integral(lambda w: w**-0.5, 0.0, (0.0, 1.0), singular_exponent=0.5)

    def test_zero_frequency_regular(self):
        # density Ω on [0, 2]: ∫ Ω/Ω dΩ = 2
        value, _ = stieltjes_integral(lambda w: w, 0.0, (0.0, 2.0), singular_exponent=2.0)
        assert value == pytest.approx(2.0, rel=1e-10)

    @pytest.mark.parametrize("w", [0.1, 3.0])
    def test_lorentzian_against_closed_form(self, w):
        # partial fractions give ∫_0^∞ dΩ / ((1+Ω²)(Ω+iω)) = (-ln ω - iπ/2 + iπω/2) / (1 - ω²)
        value, _ = stieltjes_integral(lambda x: 1 / (1 + x * x), w, (0.0, math.inf),
                                      QuadPolicy(rel_tol=1e-11), tail_exponent=1.0)
        expected = complex(-math.log(w), math.pi / 2 * (w - 1)) / (1 - w * w)
        assert value == pytest.approx(expected, rel=1e-9)
