"""Numerical verification: RK4 integration and identity residuals."""

import numpy as np
import pytest

from sgrowth.core import DomainError, NATIONS, RecoveryCurve, default_constants
from sgrowth.model import (
    evolution,
    evolution_rate,
    lagged_curve,
    life_expectancy,
    national_gdp,
    recovery_rate,
)
from sgrowth.verify import (
    ResidualReport,
    capital_balance_residual,
    capital_flow_identity_residual,
    gap_decay_rate,
    integrate_evolution,
    integrate_national,
    inverse_gap_decay_residual,
    rk4_solve,
)

C = default_constants()
GERMANY = NATIONS["germany"]
GERMANY_CURVE = RecoveryCurve.from_nation(GERMANY, C)

# measured once on the reference configuration: the worst crossover residual
# of the capital-support balance is rounding-level (~6e-15); the bound leaves
# an order of magnitude for platform-to-platform rounding differences
CAPITAL_BALANCE_REGRESSION_BOUND = 1e-13


class TestRk4Core:
    def test_exact_on_constant_slope(self):
        ts, ys = rk4_solve(lambda t, y: 2.0, 1.0, 0.0, 10.0, 0.5)
        assert ts[-1] == 10.0
        assert ys[-1] == pytest.approx(21.0, rel=1e-15)

    def test_grid_lands_on_end(self):
        ts, _ = rk4_solve(lambda t, y: 0.0, 0.0, 0.0, 1.0, 0.3)
        assert len(ts) == 5  # four equal steps of 0.25
        assert ts[-1] == 1.0

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            rk4_solve(lambda t, y: 0.0, 0.0, 0.0, 1.0, 0.0)
        with pytest.raises(DomainError):
            rk4_solve(lambda t, y: 0.0, 0.0, 1.0, 1.0, 0.1)

    def test_fourth_order_convergence_on_evolution_law(self):
        # steps chosen where truncation dominates rounding; halving the step
        # must cut the end-point error by about 2^4
        def f(t, a):
            return a * (1.0 - a / C.a_bar) / C.E

        exact = evolution(2104.0)
        errors = {}
        for h in (4.0, 2.0, 1.0):
            _, ys = rk4_solve(f, C.a_bar / 2.0, 2040.0, 2104.0, h)
            errors[h] = abs(ys[-1] - exact)
        assert 13.0 < errors[4.0] / errors[2.0] < 19.0
        assert 13.0 < errors[2.0] / errors[1.0] < 19.0


class TestIntegrateEvolution:
    def test_matches_analytic_one_lifetime_past_halftime(self):
        # frozen: a(2102) = 75000/(1 + exp(-1))
        series = integrate_evolution(C.a_bar / 2.0, 2040.0, 2102.0, 0.01, C)
        assert series.value_at(2102) == pytest.approx(54829.393397250366, rel=1e-9)

    def test_matches_analytic_over_two_centuries(self):
        series = integrate_evolution(evolution(1850.0), 1850.0, 2100.0, 0.01, C)
        rel = np.abs(series.values - evolution(series.years)) / evolution(series.years)
        assert rel.max() < 1e-9

    def test_saturated_start_is_fixed_point(self):
        series = integrate_evolution(C.a_bar, 2000.0, 2010.0, 0.5, C)
        assert np.all(series.values == C.a_bar)

    def test_rejects_invalid_start(self):
        with pytest.raises(DomainError):
            integrate_evolution(0.0, 2000.0, 2010.0, 0.5, C)
        with pytest.raises(DomainError):
            integrate_evolution(C.a_bar * 1.01, 2000.0, 2010.0, 0.5, C)

    def test_unit_tag(self):
        series = integrate_evolution(C.a_bar / 2.0, 2040.0, 2042.0, 0.5, C)
        assert series.unit == "currency-flow"


class TestIntegrateNational:
    def test_matches_analytic_recovery(self):
        y0 = national_gdp(1850.0, GERMANY_CURVE)
        series = integrate_national(y0, 1850.0, 2100.0, 0.01, GERMANY_CURVE)
        truth = national_gdp(series.years, GERMANY_CURVE)
        rel = np.abs(series.values - truth) / truth
        assert rel.max() < 1e-9

    def test_envelope_is_invariant_manifold(self):
        y0 = evolution(1950.0)
        series = integrate_national(y0, 1950.0, 2050.0, 0.01, GERMANY_CURVE)
        rel = np.abs(series.values - evolution(series.years)) / evolution(series.years)
        assert rel.max() < 1e-9

    def test_zero_start_stays_zero(self):
        series = integrate_national(0.0, 1950.0, 1960.0, 0.5, GERMANY_CURVE)
        assert np.all(series.values == 0.0)

    def test_rejects_start_above_envelope(self):
        with pytest.raises(DomainError):
            integrate_national(evolution(1950.0) * 1.01, 1950.0, 1960.0, 0.5, GERMANY_CURVE)


class TestCapitalBalance:
    def test_crossover_region_within_frozen_bound(self):
        report = capital_balance_residual(GERMANY, C, (1950.0, 2100.0), 1001)
        assert report.max_rel_residual < CAPITAL_BALANCE_REGRESSION_BOUND

    def test_envelope_dominated_limit(self):
        # far past the recovery halftime only the envelope term remains
        report = capital_balance_residual(GERMANY, C, (2150.0, 2400.0), 101)
        assert report.max_rel_residual < 1e-12

    def test_recovery_dominated_limit(self):
        # far before the evolution halftime only the recovery term matters
        report = capital_balance_residual(GERMANY, C, (1700.0, 1900.0), 101)
        assert report.max_rel_residual < 1e-12

    @pytest.mark.parametrize("name", ["usa", "japan", "korea", "china"])
    def test_all_reference_nations(self, name):
        report = capital_balance_residual(NATIONS[name], C, (1900.0, 2200.0), 301)
        assert report.max_rel_residual < CAPITAL_BALANCE_REGRESSION_BOUND

    def test_flow_identity_by_finite_differences(self):
        report = capital_flow_identity_residual(GERMANY, C, (1950.0, 2100.0), 151)
        assert report.max_rel_residual < 1e-6


class TestInverseGapDecay:
    def test_residual_within_bound(self):
        report = inverse_gap_decay_residual(GERMANY_CURVE, (1950.0, 2060.0), 201)
        assert report.max_rel_residual < 1e-9

    def test_slower_recovery_curve(self):
        r = RecoveryCurve(C.a_bar, C.T, C.E, beta=0.05, tau=1965.0)
        assert inverse_gap_decay_residual(r, (1950.0, 2060.0), 201).max_rel_residual < 1e-9

    @pytest.mark.parametrize("beta", [0.05, 0.09])
    def test_measured_decay_rate_matches_input(self, beta):
        r = RecoveryCurve(C.a_bar, C.T, C.E, beta=beta, tau=1970.0)
        assert gap_decay_rate(r, (1950.0, 2060.0), 201) == pytest.approx(beta, rel=1e-9)

    def test_range_spanning_both_halftimes(self):
        # Germany halftimes are 1970 and 2040; the default range covers both
        report = inverse_gap_decay_residual(GERMANY_CURVE, (1950.0, 2060.0), 301)
        assert report.t_range[0] < GERMANY.tau < C.T < report.t_range[1]
        assert report.max_rel_residual < 1e-9


class TestDerivativeCrossChecks:
    """Finite differences vs the closed-form slope of each curve family."""

    H = 1e-4
    SAMPLE_YEARS = (1900.0, 1950.0, 1970.0, 2000.0, 2040.0, 2100.0)

    def _check(self, f, slope):
        for t in self.SAMPLE_YEARS:
            fd = (f(t + self.H) - f(t - self.H)) / (2.0 * self.H)
            assert fd == pytest.approx(slope(t), rel=1e-6)

    def test_evolution(self):
        self._check(
            lambda t: evolution(t, C), lambda t: evolution(t, C) * evolution_rate(evolution(t, C), C)
        )

    def test_national(self):
        self._check(
            lambda t: national_gdp(t, GERMANY_CURVE),
            lambda t: national_gdp(t, GERMANY_CURVE) * recovery_rate(t, GERMANY_CURVE),
        )

    def test_capital(self):
        shifted = lagged_curve(GERMANY, C)
        self._check(
            lambda t: national_gdp(t, shifted),
            lambda t: national_gdp(t, shifted) * recovery_rate(t, shifted),
        )

    def test_life_expectancy(self):
        def slope(t):
            frac = (life_expectancy(t, C) - C.L0) / (C.L_bar - C.L0)
            return (C.L_bar - C.L0) * frac * (1.0 - frac) / C.E

        self._check(lambda t: life_expectancy(t, C), slope)


class TestResidualReport:
    def test_validation(self):
        with pytest.raises(DomainError):
            ResidualReport(-1.0, 0.0, (0.0, 1.0), 10)
        with pytest.raises(DomainError):
            ResidualReport(0.0, 0.0, (0.0, 1.0), 1)
