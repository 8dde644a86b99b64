import math

import numpy as np
import pytest

from eivreg.errors import DomainError
from eivreg.model import NoiseModel, ProblemShape, SparsityBudget
from eivreg.rates import (
    RateInputs,
    fit_rate_exponent,
    lower_bound_rate,
    rate_ratio_p2,
    upper_bound_rate,
)


def make_inputs(p=2.0, q=0.0, radius=1.0, m=100, n=100,
                sx2=1.0, sw2=0.0, se2=1.0, kc=1.0, kl=1.0):
    return RateInputs(
        p=p,
        budget=SparsityBudget(q, radius),
        shape=ProblemShape(m, n),
        noise=NoiseModel(sx2, sw2, se2),
        kappa_c=kc,
        kappa_l=kl,
    )


class TestLowerBound:
    def test_reference_substitution(self):
        # 1 * 1 * (log 100 / 100)
        assert lower_bound_rate(make_inputs()) == pytest.approx(
            0.04605170185988091, abs=1e-10
        )

    def test_doubling_m_halves_at_q0_p2(self):
        a = lower_bound_rate(make_inputs(m=100))
        b = lower_bound_rate(make_inputs(m=200))
        assert a == pytest.approx(2.0 * b, rel=1e-14)

    def test_sigma_w_zero_reduction(self):
        # with sw = 0 the prefactor collapses to (se2 / kc^2)^((p-q)/2)
        rng = np.random.default_rng(50)
        for _ in range(10):
            p = float(rng.uniform(1.0, 3.0))
            q = float(rng.uniform(0.0, min(1.0, p - 0.05)))
            radius = float(rng.uniform(1.0, 4.0))
            se2 = float(rng.uniform(0.2, 2.0))
            sx2 = float(rng.uniform(0.2, 2.0))
            kc = float(rng.uniform(0.5, 2.0))
            m, n = int(rng.integers(10, 500)), int(rng.integers(2, 500))
            got = lower_bound_rate(
                make_inputs(p=p, q=q, radius=radius, m=m, n=n,
                            sx2=sx2, sw2=0.0, se2=se2, kc=kc)
            )
            expect = (se2 / kc**2) ** ((p - q) / 2) * radius * (
                math.log(n) / m
            ) ** ((p - q) / 2)
            assert got == pytest.approx(expect, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            lower_bound_rate(make_inputs(n=1))
        with pytest.raises(DomainError):
            lower_bound_rate(make_inputs(p=1.0, q=1.0))

    def test_monotone_in_m_and_radius(self):
        for m1, m2 in [(50, 100), (100, 400)]:
            assert lower_bound_rate(make_inputs(m=m1)) > lower_bound_rate(
                make_inputs(m=m2)
            )
        assert lower_bound_rate(make_inputs(radius=2.0)) > lower_bound_rate(
            make_inputs(radius=1.0)
        )

    def test_exact_sparse_scaling(self):
        # at q = 0, p = 2 the curve is proportional to radius * log(n) / m
        base = lower_bound_rate(make_inputs(radius=1.0))
        assert lower_bound_rate(make_inputs(radius=3.0)) == pytest.approx(
            3.0 * base, rel=1e-14
        )


class TestUpperBound:
    def test_reference_substitution(self):
        # [(1*1) + 1] / 1 * (log 100 / 100)
        assert upper_bound_rate(make_inputs()) == pytest.approx(
            0.09210340371976182, abs=1e-10
        )

    def test_q1_exponent_is_half(self):
        a = upper_bound_rate(make_inputs(q=1.0, m=100))
        b = upper_bound_rate(make_inputs(q=1.0, m=400))
        assert a == pytest.approx(2.0 * b, rel=1e-14)

    def test_increasing_in_sigma_w(self):
        lo = upper_bound_rate(make_inputs(sw2=0.25))
        hi = upper_bound_rate(make_inputs(sw2=1.0))
        assert hi > lo

    def test_monotone_in_m_and_radius(self):
        assert upper_bound_rate(make_inputs(m=100)) > upper_bound_rate(
            make_inputs(m=200)
        )
        assert upper_bound_rate(make_inputs(radius=2.0)) > upper_bound_rate(
            make_inputs(radius=1.0)
        )


class TestRateRatio:
    def test_reference_value(self):
        assert rate_ratio_p2(make_inputs()) == pytest.approx(2.0, rel=1e-12)

    def test_independent_of_m_n_radius(self):
        ratios = [
            rate_ratio_p2(make_inputs(m=m, n=n, radius=r, q=0.5, sw2=0.5))
            for m in (100, 500, 1000)
            for n in (50, 200, 500)
            for r in (1.0, 2.0, 4.0)
        ]
        assert max(ratios) / min(ratios) - 1.0 < 1e-12

    def test_p_forced_to_two(self):
        a = rate_ratio_p2(make_inputs(p=3.0))
        b = rate_ratio_p2(make_inputs(p=2.0))
        assert a == b


class TestFitRateExponent:
    def test_exact_power_law(self):
        xs = np.linspace(0.1, 2.0, 12)
        points = [(x, 3.0 * x**2) for x in xs]
        slope, intercept, r2 = fit_rate_exponent(points)
        assert slope == pytest.approx(2.0, abs=1e-10)
        assert r2 == pytest.approx(1.0, abs=1e-10)
        assert intercept == pytest.approx(math.log(3.0), abs=1e-10)

    def test_two_points(self):
        slope, _, _ = fit_rate_exponent([(1.0, 1.0), (math.e, math.e)])
        assert slope == pytest.approx(1.0, abs=1e-12)

    def test_noisy_half_exponent(self):
        rng = np.random.default_rng(51)
        xs = np.logspace(-2, 0, 20)
        eps = rng.uniform(-0.05, 0.05, size=20)
        points = [(x, x**0.5 * (1 + e)) for x, e in zip(xs, eps)]
        slope, _, _ = fit_rate_exponent(points)
        assert 0.45 <= slope <= 0.55

    def test_scale_invariance_of_slope(self):
        xs = np.linspace(0.5, 3.0, 9)
        pts = [(x, x**1.3 + 0.1) for x in xs]
        slope1, _, _ = fit_rate_exponent(pts)
        slope2, _, _ = fit_rate_exponent([(x, 7.5 * y) for x, y in pts])
        assert slope1 == pytest.approx(slope2, abs=1e-12)

    def test_errors(self):
        with pytest.raises(DomainError):
            fit_rate_exponent([(1.0, 1.0)])
        with pytest.raises(DomainError):
            fit_rate_exponent([(1.0, 1.0), (1.0, 2.0)])
        with pytest.raises(DomainError):
            fit_rate_exponent([(1.0, 1.0), (2.0, -1.0)])
