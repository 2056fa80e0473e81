"""Acceptance suite: one test per exit criterion, at its stated tolerance.

Each test prints one line with its verdict (run pytest with -s to see them
inline).  Expected values were either taken from the published reference
numbers or computed with independent oracles before implementation.
"""

import math

import numpy as np

from sgrowth.cli import main
from sgrowth.core import AnnualSeries, NATIONS, RecoveryCurve, default_constants
from sgrowth.estimate import fit_recovery, fit_scurve, measure_time_shift
from sgrowth.model import (
    beta_from_support,
    evolution,
    evolution_capital_lag,
    life_expectancy,
    national_gdp,
    recovery_capital_lag,
    required_capacity,
)
from sgrowth.validate import run_validation
from sgrowth.verify import (
    capital_balance_residual,
    integrate_evolution,
    integrate_national,
    rk4_solve,
)

C = default_constants()

# measured once: the worst residual of the capital-support balance over the
# Germany crossover [1950, 2100] is ~6e-15 (rounding only); frozen with a
# decade of margin as a regression bound
CROSSOVER_REGRESSION_BOUND = 1e-13


def report(num, name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {name} {detail}")
    assert ok, f"criterion {num} failed: {name} {detail}"


def test_criterion_01_capital_lag_value():
    lag = evolution_capital_lag(C)
    report(1, "evolution capital lag = 21.0 +/- 0.1 yr", abs(lag - 21.0) <= 0.1, f"(lag={lag:.4f})")


def test_criterion_02_support_rates_match_table():
    ok = True
    details = []
    for name, expected in (("usa", 0.05), ("japan", 0.09), ("korea", 0.08)):
        n = NATIONS[name]
        got = beta_from_support(n.mu_bar, n.mu_e, C)
        ok &= abs(got - expected) < 0.005
        details.append(f"{name}={got:.4f}")
    germany = beta_from_support(0.25, 0.08, C)
    china = beta_from_support(0.34, 0.11, C)
    ok &= abs(germany - 0.085) < 5e-4 and abs(china - 0.084) < 1e-3
    statuses = {ch.name: ch.status for ch in run_validation(C)}
    ok &= statuses["recovery rate from support, germany"] == "WARN"
    ok &= statuses["recovery rate from support, china"] == "WARN"
    report(2, "support rates reproduce the table; rounded rows WARN", ok,
           f"({', '.join(details)}, germany={germany:.4f}, china={china:.4f})")


def test_criterion_03_two_form_identity():
    rng = np.random.default_rng(20250809)
    n = 10_000
    ts = rng.uniform(1800.0, 2200.0, n)
    betas = rng.uniform(0.03, 0.12, n)
    taus = rng.uniform(1950.0, 2050.0, n)
    worst = 0.0
    for t, beta, tau in zip(ts, betas, taus):
        r = RecoveryCurve(C.a_bar, C.T, C.E, beta, tau)
        direct = national_gdp(t, r)
        worst = max(worst, abs(direct - (1.0 / (1.0 / evolution(t, C)
                                                + math.exp(beta * (tau - t)) / C.a_bar))) / direct)
    report(3, "two-form GDP identity < 1e-12 over 10^4 samples", worst < 1e-12,
           f"(worst={worst:.2e})")


def test_criterion_04_shift_identities_and_measurement():
    lag_e = evolution_capital_lag(C)
    ok = abs(math.exp(lag_e / C.E) - (1.0 + C.G / C.E)) <= 1e-14 * (1.0 + C.G / C.E)
    beta = 0.09
    lag_r = recovery_capital_lag(beta, C)
    ok &= abs(math.exp(beta * lag_r) - (1.0 + beta * C.G)) <= 1e-14 * (1.0 + beta * C.G)

    years = np.arange(1900, 2101)
    gdp = AnnualSeries.from_arrays(years, evolution(years.astype(float)), "currency-flow")
    cap = AnnualSeries.from_arrays(years, evolution(years.astype(float) - 21.0), "currency-flow")
    m1 = measure_time_shift(gdp, cap)
    ok &= abs(m1 - 21.0) <= 0.25

    r = RecoveryCurve.from_nation(NATIONS["germany"], C)
    gdp_r = AnnualSeries.from_arrays(years, national_gdp(years.astype(float), r), "currency-flow")
    cap_r = AnnualSeries.from_arrays(
        years, national_gdp(years.astype(float) - 13.1, r), "currency-flow"
    )
    m2 = measure_time_shift(gdp_r, cap_r)
    ok &= abs(m2 - 13.1) <= 0.25
    report(4, "shift identities exact; injected 21.0/13.1 yr lags recovered", ok,
           f"(measured {m1:.3f}, {m2:.3f})")


def test_criterion_05_integration_matches_closed_forms():
    series_e = integrate_evolution(evolution(1850.0), 1850.0, 2100.0, 0.01, C)
    rel_e = np.max(
        np.abs(series_e.values - evolution(series_e.years)) / evolution(series_e.years)
    )
    r = RecoveryCurve.from_nation(NATIONS["germany"], C)
    series_n = integrate_national(national_gdp(1850.0, r), 1850.0, 2100.0, 0.01, r)
    truth = national_gdp(series_n.years, r)
    rel_n = np.max(np.abs(series_n.values - truth) / truth)

    def f(t, a):
        return a * (1.0 - a / C.a_bar) / C.E

    errors = {}
    for h in (4.0, 2.0):
        _, ys = rk4_solve(f, C.a_bar / 2.0, 2040.0, 2104.0, h)
        errors[h] = abs(ys[-1] - evolution(2104.0))
    ratio = errors[4.0] / errors[2.0]
    ok = rel_e < 1e-9 and rel_n < 1e-9 and 13.0 < ratio < 19.0
    report(5, "fixed-step integration matches closed forms; 4th-order convergence", ok,
           f"(rel_e={rel_e:.1e}, rel_n={rel_n:.1e}, halving ratio={ratio:.1f})")


def test_criterion_06_capital_balance_residuals():
    late = capital_balance_residual(NATIONS["germany"], C, (2150.0, 2400.0), 101)
    early = capital_balance_residual(NATIONS["germany"], C, (1700.0, 1900.0), 101)
    crossover = capital_balance_residual(NATIONS["germany"], C, (1950.0, 2100.0), 1001)
    ok = (
        late.max_rel_residual < 1e-12
        and early.max_rel_residual < 1e-12
        and crossover.max_rel_residual < CROSSOVER_REGRESSION_BOUND
    )
    report(6, "capital-support balance: single-term limits < 1e-12, crossover frozen", ok,
           f"(crossover={crossover.max_rel_residual:.2e})")


def test_criterion_07_required_capacity_bound():
    factor = required_capacity(1.0, 0.15, C)
    ratio = factor / 4.0
    ok = abs(factor - 1.3636) < 1e-3 and factor < 1.4 and abs(ratio - 0.341) < 1e-3
    report(7, "required capacity 1.3636 < 1.4; one third of the stock engaged", ok,
           f"(factor={factor:.4f}, share={ratio:.4f})")


def test_criterion_08_life_expectancy_linkage():
    gap = C.T - C.T_L
    ok = abs(gap - 59.0) <= 0.5 and abs(gap - C.L_bar / 2.0) <= 0.5
    ts = np.arange(1850.0, 2101.0)
    ratio = (life_expectancy(ts, C) - C.L0) / evolution(ts + gap, C)
    spread = (ratio.max() - ratio.min()) / ratio.mean()
    ok &= spread < 1e-9
    report(8, "life expectancy leads the evolution by L_bar/2; increment ratio constant", ok,
           f"(gap={gap}, ratio spread={spread:.1e})")


def test_criterion_09_fit_roundtrips_under_noise():
    # simple S-curve: amplitude noise at 2% of the asymptote, growth parameter
    # held at the universal 1/E, window reaching saturation; halftime must
    # land within +/-1 yr at the 90th percentile over 100 seeds
    years = np.arange(1800, 2301)
    truth = evolution(years.astype(float))
    halftime_errors = []
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        noisy = truth + rng.normal(0.0, 0.02 * C.a_bar, truth.size)
        rep = fit_scurve(
            AnnualSeries.from_arrays(years, noisy, "currency-flow"),
            growth_param_fixed=1.0 / C.E,
        )
        halftime_errors.append(abs(rep.params["halftime"] - C.T))
    t_p90 = float(np.sort(halftime_errors)[89])

    # recovery curve: proportional 2% noise (an amplitude-sized floor would
    # drown the informative early exponential years entirely)
    jp = NATIONS["japan"]
    r = RecoveryCurve.from_nation(jp, C)
    years_r = np.arange(1946, 2026)
    truth_r = national_gdp(years_r.astype(float), r)
    beta_errors, tau_errors = [], []
    for seed in range(100):
        rng = np.random.default_rng(2000 + seed)
        noisy = truth_r * (1.0 + rng.normal(0.0, 0.02, truth_r.size))
        rep = fit_recovery(AnnualSeries.from_arrays(years_r, noisy, "currency-flow"), C)
        beta_errors.append(abs(rep.params["beta"] - jp.beta))
        tau_errors.append(abs(rep.params["tau"] - jp.tau))
    beta_p90 = float(np.sort(beta_errors)[89])
    tau_p90 = float(np.sort(tau_errors)[89])

    ok = t_p90 <= 1.0 and tau_p90 <= 1.0 and beta_p90 <= 0.005
    report(9, "noisy fits: halftimes within 1 yr, rate within 0.005 (90th pct)", ok,
           f"(T: {t_p90:.2f} yr, tau: {tau_p90:.2f} yr, beta: {beta_p90:.4f})")


def test_criterion_10_saturated_capital_coefficient():
    coeff = NATIONS["china"].mu_bar * C.G * C.eps_bar
    statuses = {ch.name: ch.status for ch in run_validation(C)}
    ok = abs(coeff - 8.5) < 1e-12 and statuses["saturated capital coefficient, china"] == "WARN"
    report(10, "china capital coefficient 8.5 vs rounded 8, reported WARN", ok,
           f"(coefficient={coeff})")


def test_criterion_11_validate_command_clean(capsys):
    code = main(["validate"])
    out = capsys.readouterr().out
    checks = run_validation(C)
    n_fail = sum(1 for ch in checks if ch.status == "FAIL")
    ok = code == 0 and n_fail == 0 and "PASS" in out
    report(11, "validate command exits 0 with zero FAIL", ok,
           f"(exit={code}, fails={n_fail}, checks={len(checks)})")
