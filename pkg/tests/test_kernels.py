"""Tests for the special-function and random-source kernels.

Expected values come from sources independent of the implementation under
test: closed forms, the gamma recurrence seeded at ln_gamma(0.5) = ln(sqrt(pi)),
binomial sums for integer-parameter incomplete betas, adaptive quadrature of
the t and F densities (normalizing constants via math.lgamma), and the
incomplete-gamma power series.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from twinreg import kernels


def ln_gamma_by_recurrence(n_halves: int) -> float:
    """ln Gamma(n_halves / 2) built up from Gamma(1/2) = sqrt(pi)."""
    acc = 0.5 * math.log(math.pi)
    z = 0.5
    while z + 1.0 <= n_halves / 2.0 + 1e-9:
        acc += math.log(z)
        z += 1.0
    return acc


def inc_beta_binomial_sum(a: int, b: int, x: float) -> float:
    """I_x(a, b) for integer a, b as a binomial tail sum."""
    n = a + b - 1
    return sum(
        math.comb(n, j) * x**j * (1.0 - x) ** (n - j) for j in range(a, n + 1)
    )


def t_density(u: float, df: float) -> float:
    c = math.exp(math.lgamma((df + 1) / 2) - math.lgamma(df / 2)) / math.sqrt(
        df * math.pi
    )
    return c * (1.0 + u * u / df) ** (-(df + 1) / 2)


def f_density(u: float, d1: float, d2: float) -> float:
    c = math.exp(
        math.lgamma((d1 + d2) / 2)
        - math.lgamma(d1 / 2)
        - math.lgamma(d2 / 2)
        + (d1 / 2) * math.log(d1 / d2)
    )
    return c * u ** (d1 / 2 - 1) * (1.0 + d1 * u / d2) ** (-(d1 + d2) / 2)


def gamma_q_series(a: float, x: float) -> float:
    """Q(a, x) via the lower-tail power series (valid for x < a + 1)."""
    term = 1.0 / a
    total = term
    k = 0
    while abs(term) > 1e-18 * abs(total):
        k += 1
        term *= x / (a + k)
        total += term
    return 1.0 - total * math.exp(-x + a * math.log(x) - math.lgamma(a))


class TestLnGamma:
    def test_exact_values(self):
        assert kernels.ln_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
        assert kernels.ln_gamma(2.0) == pytest.approx(0.0, abs=1e-14)
        assert kernels.ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
        # Gamma(5) = 24
        assert kernels.ln_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)

    def test_half_integer_recurrence(self):
        for n_halves in (3, 7, 21, 29, 59):
            want = ln_gamma_by_recurrence(n_halves)
            assert kernels.ln_gamma(n_halves / 2.0) == pytest.approx(want, rel=1e-13)

    def test_recurrence_identity_on_grid(self):
        # ln G(x+1) - ln G(x) = ln x; tolerance tracks the cancellation in the
        # subtraction, which grows with the magnitude of ln G itself
        for x in np.geomspace(1e-3, 1e6, 60):
            hi = kernels.ln_gamma(x + 1.0)
            lo = kernels.ln_gamma(x)
            tol = 1e-14 * max(1.0, abs(hi), abs(lo))
            assert hi - lo == pytest.approx(math.log(x), abs=tol)

    def test_agrees_with_stdlib_across_range(self):
        for x in np.geomspace(1e-3, 1e6, 200):
            want = math.lgamma(x)
            tol = 1e-12 * max(abs(want), 1.0)
            assert abs(kernels.ln_gamma(float(x)) - want) <= tol

    def test_domain(self):
        with pytest.raises(ValueError):
            kernels.ln_gamma(0.0)
        with pytest.raises(ValueError):
            kernels.ln_gamma(-2.5)


class TestRegIncBeta:
    def test_endpoints(self):
        assert kernels.reg_inc_beta(2.0, 3.0, 0.0) == 0.0
        assert kernels.reg_inc_beta(2.0, 3.0, 1.0) == 1.0

    def test_uniform_special_case(self):
        # I_x(1, 1) is the uniform CDF
        for x in (0.1, 0.25, 0.5, 0.9):
            assert kernels.reg_inc_beta(1.0, 1.0, x) == pytest.approx(x, abs=1e-14)

    def test_integer_parameters_binomial_sum(self):
        cases = [(2, 3, 0.5), (1, 4, 0.2), (5, 2, 0.73), (7, 7, 0.41), (3, 9, 0.08)]
        for a, b, x in cases:
            want = inc_beta_binomial_sum(a, b, x)
            assert kernels.reg_inc_beta(float(a), float(b), x) == pytest.approx(
                want, abs=1e-13
            )
        assert inc_beta_binomial_sum(2, 3, 0.5) == pytest.approx(11.0 / 16.0)

    def test_symmetry(self):
        for a, b, x in [(0.5, 4.0, 0.3), (14.5, 0.5, 0.97), (3.3, 2.2, 0.6)]:
            lhs = kernels.reg_inc_beta(a, b, x)
            rhs = 1.0 - kernels.reg_inc_beta(b, a, 1.0 - x)
            assert lhs == pytest.approx(rhs, abs=1e-13)

    def test_monotone_in_x(self):
        xs = np.linspace(0.0, 1.0, 41)
        vals = [kernels.reg_inc_beta(2.7, 0.9, float(x)) for x in xs]
        assert all(v2 >= v1 for v1, v2 in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            kernels.reg_inc_beta(0.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            kernels.reg_inc_beta(1.0, -1.0, 0.5)
        with pytest.raises(ValueError):
            kernels.reg_inc_beta(1.0, 1.0, 1.5)


class TestStudentTSf2:
    def test_center_and_limits(self):
        assert kernels.student_t_sf2(0.0, 29.0) == 1.0
        assert kernels.student_t_sf2(math.inf, 5.0) == 0.0
        assert kernels.student_t_sf2(-math.inf, 5.0) == 0.0

    def test_even_in_t(self):
        for t in (0.3, 1.7, 2.05, 15.2):
            assert kernels.student_t_sf2(t, 29.0) == kernels.student_t_sf2(-t, 29.0)

    def test_df1_is_cauchy(self):
        # two-sided Cauchy tail has the closed form 1 - (2/pi) atan(t)
        for t in (0.5, 1.0, 3.0):
            want = 1.0 - 2.0 / math.pi * math.atan(t)
            assert kernels.student_t_sf2(t, 1.0) == pytest.approx(want, rel=1e-12)

    def test_against_quadrature(self):
        for t, df in [(2.05, 29.0), (1.38, 29.0), (2.36, 29.0), (4.0, 7.0)]:
            tail, _ = integrate.quad(t_density, t, math.inf, args=(df,))
            assert kernels.student_t_sf2(t, df) == pytest.approx(2.0 * tail, rel=1e-9)

    def test_extreme_tail_window(self):
        v = kernels.student_t_sf2(15.2, 29.0)
        assert 2.3e-15 <= v <= 2.7e-15

    def test_domain(self):
        with pytest.raises(ValueError):
            kernels.student_t_sf2(1.0, 0.0)


class TestFSf:
    def test_limits(self):
        assert kernels.f_sf(0.0, 3.0, 33.0) == 1.0
        assert kernels.f_sf(math.inf, 3.0, 33.0) == 0.0

    def test_square_of_t(self):
        # F(1, df) upper tail at t^2 equals the two-sided t tail at t
        for t, df in [(1.5, 12.0), (2.4, 29.0)]:
            assert kernels.f_sf(t * t, 1.0, df) == pytest.approx(
                kernels.student_t_sf2(t, df), rel=1e-12
            )

    def test_against_quadrature(self):
        for f, d1, d2 in [(4.26, 3.0, 33.0), (11.3, 9.0, 27.0), (0.7, 5.0, 20.0)]:
            tail, _ = integrate.quad(f_density, f, math.inf, args=(d1, d2))
            assert kernels.f_sf(f, d1, d2) == pytest.approx(tail, rel=1e-8)

    def test_domain(self):
        with pytest.raises(ValueError):
            kernels.f_sf(-0.1, 3.0, 33.0)
        with pytest.raises(ValueError):
            kernels.f_sf(1.0, 0.0, 33.0)


class TestChi2Sf:
    def test_limits(self):
        assert kernels.chi2_sf(0.0, 4.0) == 1.0
        assert kernels.chi2_sf(math.inf, 4.0) == 0.0

    def test_df2_exponential(self):
        # chi-squared with 2 df is Exp(1/2): tail is exp(-x/2)
        for x in (0.5, 3.0, 40.0):
            assert kernels.chi2_sf(x, 2.0) == pytest.approx(math.exp(-x / 2), rel=1e-13)

    def test_df4_closed_form(self):
        # even df gives a Poisson-sum tail; df=4: (1 + x/2) exp(-x/2)
        want = (1.0 + 2.5) * math.exp(-2.5)
        assert kernels.chi2_sf(5.0, 4.0) == pytest.approx(want, rel=1e-13)

    def test_against_series(self):
        for x, df in [(1.2, 5.0), (5.0, 4.0), (9.9, 11.0), (0.3, 1.0)]:
            assert kernels.chi2_sf(x, df) == pytest.approx(
                gamma_q_series(df / 2.0, x / 2.0), rel=1e-11
            )

    def test_normal_square(self):
        # chi-squared(1) tail at z^2 is the two-sided normal tail at z
        z = 1.959963984540054
        assert kernels.chi2_sf(z * z, 1.0) == pytest.approx(0.05, rel=1e-9)

    def test_domain(self):
        with pytest.raises(ValueError):
            kernels.chi2_sf(-1.0, 4.0)
        with pytest.raises(ValueError):
            kernels.chi2_sf(1.0, 0.0)


class TestRandomSource:
    def test_same_seed_same_stream(self):
        a = kernels.RandomSource(42)
        b = kernels.RandomSource(42)
        assert [a.uniform() for _ in range(10)] == [b.uniform() for _ in range(10)]

    def test_different_seeds_differ(self):
        a = kernels.RandomSource(1)
        b = kernels.RandomSource(2)
        assert [a.uniform() for _ in range(5)] != [b.uniform() for _ in range(5)]

    def test_uniform_range(self):
        rs = kernels.RandomSource(3)
        u = rs.uniforms(100_000)
        assert u.min() >= 0.0 and u.max() < 1.0

    def test_vector_uniforms_match_scalar(self):
        a = kernels.RandomSource(9)
        b = kernels.RandomSource(9)
        scalar = np.array([a.uniform() for _ in range(257)])
        assert np.array_equal(scalar, b.uniforms(257))

    def test_vector_normals_match_scalar(self):
        a = kernels.RandomSource(123)
        b = kernels.RandomSource(123)
        scalar = np.array([a.draw_normal(0.0, 1.0) for _ in range(100)])
        assert np.array_equal(scalar, b.normals(100))

    def test_normal_consumes_two_uniforms(self):
        a = kernels.RandomSource(5)
        a.draw_normal(0.0, 1.0)
        b = kernels.RandomSource(5)
        b.uniform()
        b.uniform()
        assert a.uniform() == b.uniform()

    def test_normal_location_scale(self):
        a = kernels.RandomSource(77)
        b = kernels.RandomSource(77)
        z = a.draw_normal(0.0, 1.0)
        assert b.draw_normal(10.0, 2.0) == pytest.approx(10.0 + 2.0 * z, rel=1e-15)

    def test_degenerate_sd_zero(self):
        rs = kernels.RandomSource(8)
        assert rs.draw_normal(5.0, 0.0) == 5.0

    def test_normal_moments(self):
        rs = kernels.RandomSource(2024)
        z = rs.normals(1_000_000)
        assert abs(z.mean()) < 0.005
        assert abs(z.var() - 1.0) < 0.01
        assert abs(np.mean(z**3)) < 0.02  # symmetric

    def test_inverse_gamma_moments(self):
        # shape 6, scale 5: mean 5/5 = 1, variance 1/(6-2) = 0.25; shape > 4
        # keeps the fourth moment finite so the sample variance is stable
        rs = kernels.RandomSource(31)
        x = rs.inverse_gammas(1_000_000, 6.0, 5.0)
        assert (x > 0.0).all()
        assert x.mean() == pytest.approx(1.0, abs=0.005)
        assert x.var() == pytest.approx(0.25, abs=0.01)

    def test_inverse_gamma_scale_equivariance(self):
        a = kernels.RandomSource(55)
        b = kernels.RandomSource(55)
        x = a.inverse_gammas(1000, 2.5, 1.0)
        y = b.inverse_gammas(1000, 2.5, 7.0)
        assert np.allclose(y, 7.0 * x, rtol=1e-14)

    def test_inverse_gamma_shape_below_one(self):
        rs = kernels.RandomSource(66)
        x = rs.inverse_gammas(200_000, 0.7, 1.0)
        assert (x > 0.0).all() and np.isfinite(x).all()
        # median of the reciprocal gamma: 1/median(Gamma(0.7, 1)) ~ 2.4545
        assert float(np.median(x)) == pytest.approx(2.4544, rel=0.02)

    def test_scalar_inverse_gamma_deterministic(self):
        a = kernels.RandomSource(12)
        b = kernels.RandomSource(12)
        assert [a.draw_inverse_gamma(3.0, 2.0) for _ in range(20)] == [
            b.draw_inverse_gamma(3.0, 2.0) for _ in range(20)
        ]

    def test_domain(self):
        rs = kernels.RandomSource(1)
        with pytest.raises(ValueError):
            rs.draw_normal(0.0, -1.0)
        with pytest.raises(ValueError):
            rs.draw_inverse_gamma(0.0, 1.0)
        with pytest.raises(ValueError):
            rs.inverse_gammas(5, 1.0, -2.0)
