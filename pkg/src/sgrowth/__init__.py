"""S-function growth curves for macroeconomic time series.

Closed-form solutions for GDP, physical capital, and life expectancy; the
demand/supply equilibrium relations; parameter estimation from national
series; and numerical verification of the growth laws.
"""

from .core import (
    AnnualSeries,
    CoverageError,
    DataFormatError,
    DomainError,
    FitReport,
    ModelConstants,
    NATIONS,
    NationParams,
    RecoveryCurve,
    SCurve,
    default_constants,
    hours_per_week,
    nation,
)
from .dataio import deflate, five_year_average, per_capita, read_csv, write_csv
from .estimate import (
    beta_from_point,
    constants_from_shifts,
    fit_recovery,
    fit_scurve,
    half_amplitude_crossing,
    inflection_halftime,
    measure_time_shift,
)
from .model import (
    EquilibriumState,
    beta_from_support,
    capacity_function,
    capital,
    capital_function,
    equilibrium_state,
    evolution,
    evolution_capital_lag,
    evolution_rate,
    life_expectancy,
    maintenance_stocks,
    mu_bar_required,
    national_gdp,
    national_gdp_inverse_form,
    national_rate,
    production,
    recovery_capital_lag,
    recovery_rate,
    required_capacity,
    scurve_value,
    storables_from_observables,
    working_time,
    working_time_curve,
)
from .validate import Check, format_table, run_validation
from .verify import (
    ResidualReport,
    capital_balance_residual,
    capital_flow_identity_residual,
    gap_decay_rate,
    integrate_evolution,
    integrate_national,
    inverse_gap_decay_residual,
    rk4_solve,
)

__version__ = "0.1.0"
