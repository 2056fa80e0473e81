"""Closed-form relations of the growth framework.

Equilibrium between spare-time demand and working-time supply, the production
function, the S-function solutions for GDP / physical capital / life
expectancy, the capital and capacity shares, and the time lags between GDP
and capital.  Everything here is a pure function of immutable inputs.

Curve evaluators accept a scalar year or an array of years; S-functions are
evaluated in log-space so any year, however extreme, yields a finite value
with the correct exponential asymptote.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .core import (
    DEFAULT_CONSTANTS,
    DomainError,
    ModelConstants,
    NationParams,
    RecoveryCurve,
    SCurve,
)

__all__ = [
    "EquilibriumState",
    "beta_from_support",
    "capacity_function",
    "capital",
    "capital_function",
    "equilibrium_state",
    "evolution",
    "evolution_capital_lag",
    "evolution_rate",
    "lagged_curve",
    "life_expectancy",
    "maintenance_stocks",
    "mu_bar_required",
    "national_gdp",
    "national_gdp_inverse_form",
    "national_rate",
    "production",
    "recovery_capital_lag",
    "recovery_rate",
    "required_capacity",
    "scurve_value",
    "storables_from_observables",
    "working_time",
    "working_time_curve",
]


# ---------------------------------------------------------------------------
# equilibrium relations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquilibriumState:
    """One consistent point of the demand/supply equilibrium.

    w and s are working and spare time as fractions of the annual maximum;
    h_s and k_w are the demand- and supply-side storable quantities actually
    engaged; y is the resulting GDP flow.
    """

    w: float
    s: float
    y: float
    h_s: float
    k_w: float

    def __post_init__(self):
        if self.w + self.s != 1.0:
            raise DomainError(f"time budget violated: w + s = {self.w + self.s!r} != 1.0")


def working_time(h_s: float, k_w: float, c: ModelConstants = DEFAULT_CONSTANTS) -> float:
    """Working-time fraction needed to balance demand h_s against capital k_w.

    Returns w = eps_bar*h_s / (h_s + k_w - y0/eps_bar), in (0, 1].  k_w at the
    agricultural floor y0/eps_bar gives w = eps_bar (everyone works full time).
    """
    if h_s <= 0:
        raise DomainError(f"require h_s > 0, got {h_s}")
    if k_w < c.y0 / c.eps_bar:
        raise DomainError(f"k_w={k_w} below the agricultural floor {c.y0 / c.eps_bar}")
    den = h_s + k_w - c.y0 / c.eps_bar
    if den <= 0:
        raise DomainError(f"degenerate equilibrium: denominator {den} <= 0")
    return c.eps_bar * h_s / den


def production(h_s: float, k_w: float, c: ModelConstants = DEFAULT_CONSTANTS) -> float:
    """GDP flow produced by engaged capacity h_s and employed capital k_w.

    y = eps_bar*h_s*k_w / (h_s + k_w - y0/eps_bar); no adjustable parameter.
    The output is bounded by eps_bar*h_s however large k_w grows.
    """
    return working_time(h_s, k_w, c) * k_w


def storables_from_observables(
    w: float, y: float, c: ModelConstants = DEFAULT_CONSTANTS
) -> tuple[float, float]:
    """Invert the equilibrium: recover (h_s, k_w) from observed (w, y).

    Undefined at w = eps_bar (pre-industrial state: no spare time to divide
    the demand flow by).
    """
    if y <= 0:
        raise DomainError(f"require y > 0, got {y}")
    if not 0 < w < c.eps_bar:
        raise DomainError(f"require 0 < w < eps_bar; w={w} has no industrial inverse")
    k_w = y / w
    h_s = (y - c.y0 * w / c.eps_bar) / (c.eps_bar - w)
    return h_s, k_w


def equilibrium_state(
    h_s: float, k_w: float, c: ModelConstants = DEFAULT_CONSTANTS
) -> EquilibriumState:
    """Build the full equilibrium state for a pair of storable quantities."""
    w = working_time(h_s, k_w, c)
    y = w * k_w
    return EquilibriumState(w=w, s=c.eps_bar - w, y=y, h_s=h_s, k_w=k_w)


# ---------------------------------------------------------------------------
# S-function solutions
# ---------------------------------------------------------------------------

def _as_float_or_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def scurve_value(t, s: SCurve):
    """Evaluate a simple S-function at year(s) t."""
    arr, scalar = _as_float_or_array(t)
    val = s.floor + s.amplitude * expit(s.growth_param * (arr - s.halftime))
    return float(val) if scalar else val


def evolution(t, c: ModelConstants = DEFAULT_CONSTANTS):
    """Industrial evolution a(t): the S-function envelope of long-term GDP.

    a(t) = a_bar / (1 + exp((T - t)/E)); strictly increasing, 0 < a < a_bar.
    """
    arr, scalar = _as_float_or_array(t)
    val = c.a_bar * expit((arr - c.T) / c.E)
    return float(val) if scalar else val


def _two_term_denominator_log(t, r: RecoveryCurve):
    """log(1 + exp((T-t)/E) + exp(beta*(tau-t))), overflow-safe."""
    lu = (r.T - t) / r.E
    lv = r.beta * (r.tau - t)
    m = np.maximum(0.0, np.maximum(lu, lv))
    return m + np.log(np.exp(-m) + np.exp(lu - m) + np.exp(lv - m))


def national_gdp(t, r: RecoveryCurve):
    """Recovery curve y(t) = a_bar / (1 + exp((T-t)/E) + exp(beta*(tau-t))).

    The unique two-term S-function converging to the evolution envelope from
    below; y(t) < evolution(t) for every finite t.
    """
    arr, scalar = _as_float_or_array(t)
    val = r.a_bar * np.exp(-_two_term_denominator_log(arr, r))
    return float(val) if scalar else val


def national_gdp_inverse_form(t, r: RecoveryCurve):
    """Recovery GDP via the inverse-form identity.

    1/y = 1/a + (1/a_bar) * exp(beta*(tau - t)): the gap of inverses decays
    exponentially at rate beta.  Algebraically identical to national_gdp;
    kept as a literal second route for cross-checking.
    """
    arr, scalar = _as_float_or_array(t)
    a = r.a_bar * expit((arr - r.T) / r.E)
    val = 1.0 / (1.0 / a + np.exp(r.beta * (r.tau - arr)) / r.a_bar)
    return float(val) if scalar else val


def recovery_rate(t, r: RecoveryCurve):
    """Analytic growth rate ydot/y of the recovery curve at year(s) t."""
    arr, scalar = _as_float_or_array(t)
    lu = (r.T - arr) / r.E
    lv = r.beta * (r.tau - arr)
    m = np.maximum(0.0, np.maximum(lu, lv))
    u = np.exp(lu - m)
    v = np.exp(lv - m)
    val = (u / r.E + r.beta * v) / (np.exp(-m) + u + v)
    return float(val) if scalar else val


def life_expectancy(t, c: ModelConstants = DEFAULT_CONSTANTS):
    """Unisex life expectancy L(t) = L0 + (L_bar - L0)/(1 + exp((T_L - t)/E)).

    Shares the growth parameter 1/E with the industrial evolution and
    precedes it by T - T_L years.
    """
    arr, scalar = _as_float_or_array(t)
    val = c.L0 + (c.L_bar - c.L0) * expit((arr - c.T_L) / c.E)
    return float(val) if scalar else val


# ---------------------------------------------------------------------------
# growth rates
# ---------------------------------------------------------------------------

def evolution_rate(a, c: ModelConstants = DEFAULT_CONSTANTS):
    """Growth rate adot/a = (1 - a/a_bar)/E of the industrial evolution."""
    arr, scalar = _as_float_or_array(a)
    if np.any(arr <= 0) or np.any(arr >= c.a_bar):
        raise DomainError(f"require 0 < a < a_bar={c.a_bar}")
    val = (1.0 - arr / c.a_bar) / c.E
    return float(val) if scalar else val


def national_rate(y, a, beta: float, c: ModelConstants = DEFAULT_CONSTANTS):
    """National growth rate ydot/y = beta*(1 - y/a) + (adot/a)*(y/a).

    Interpolates between the initial exponential phase (rate beta for y << a)
    and the envelope rate once converged (y = a).
    """
    y_arr, scalar = _as_float_or_array(y)
    a_arr = np.asarray(a, dtype=float)
    if np.any(y_arr <= 0):
        raise DomainError("require y > 0")
    if np.any(y_arr > a_arr):
        raise DomainError("y above the evolution envelope; the recovery model does not apply")
    ratio = y_arr / a_arr
    val = beta * (1.0 - ratio) + evolution_rate(a_arr, c) * ratio
    return float(val) if scalar else val


# ---------------------------------------------------------------------------
# capital: lags, solution, shares
# ---------------------------------------------------------------------------

def evolution_capital_lag(c: ModelConstants = DEFAULT_CONSTANTS) -> float:
    """Delay of physical capital behind the evolution GDP: E*ln(1 + G/E) years."""
    return c.E * math.log1p(c.G / c.E)


def recovery_capital_lag(beta: float, c: ModelConstants = DEFAULT_CONSTANTS) -> float:
    """Delay of physical capital behind a recovery: ln(1 + beta*G)/beta years.

    Tends to G as beta -> 0 (log1p keeps the small-beta limit exact).
    """
    if beta <= 0:
        raise DomainError(f"require beta > 0, got {beta}")
    return math.log1p(beta * c.G) / beta


def lagged_curve(n: NationParams, c: ModelConstants = DEFAULT_CONSTANTS) -> RecoveryCurve:
    """Recovery curve with both halftimes delayed by the capital lags."""
    return RecoveryCurve(
        a_bar=c.a_bar,
        T=c.T + evolution_capital_lag(c),
        E=c.E,
        beta=n.beta,
        tau=n.tau + recovery_capital_lag(n.beta, c),
    )


def capital(t, n: NationParams, c: ModelConstants = DEFAULT_CONSTANTS):
    """Physical-capital stock k(t) = mu_bar * G * y_k(t).

    y_k is the recovery curve with each halftime shifted by its capital lag;
    the shifts make the capital-support balance hold identically.
    """
    arr, scalar = _as_float_or_array(t)
    val = n.mu_bar * c.G * national_gdp(arr, lagged_curve(n, c))
    return float(val) if scalar else val


def beta_from_support(mu_bar: float, mu_e: float, c: ModelConstants = DEFAULT_CONSTANTS) -> float:
    """Recovery growth rate set by the capital support: (mu_bar/mu_e - 1)/G."""
    if not 0 < mu_e < mu_bar:
        raise DomainError(f"require 0 < mu_e < mu_bar, got mu_e={mu_e}, mu_bar={mu_bar}")
    return (mu_bar / mu_e - 1.0) / c.G


def mu_bar_required(beta: float, mu_e: float, c: ModelConstants = DEFAULT_CONSTANTS) -> float:
    """Capital share required to recover at rate beta from entrance value mu_e."""
    if beta <= 0 or mu_e <= 0:
        raise DomainError(f"require beta > 0 and mu_e > 0, got beta={beta}, mu_e={mu_e}")
    return mu_e * (1.0 + beta * c.G)


def capital_function(
    ydot_over_y: float, mu_bar: float, c: ModelConstants = DEFAULT_CONSTANTS
) -> float:
    """Capital share mu = mu_bar / (1 + G*ydot/y) at a given growth rate.

    At rate 0 all support is maintenance (mu = mu_bar); at the recovery rate
    beta it equals the entrance value mu_e.
    """
    den = 1.0 + c.G * ydot_over_y
    if den <= 0:
        raise DomainError(f"shrinkage rate {ydot_over_y} exceeds the capital decay 1/G")
    return mu_bar / den


def capacity_function(
    adot_over_a: float, nu_bar: float, c: ModelConstants = DEFAULT_CONSTANTS
) -> float:
    """Capacity share nu = nu_bar / (1 + E*adot/a), the demand-side analogue."""
    den = 1.0 + c.E * adot_over_a
    if den <= 0:
        raise DomainError(f"shrinkage rate {adot_over_a} exceeds the capacity decay 1/E")
    return nu_bar / den


def maintenance_stocks(
    y: float, mu: float, nu: float, c: ModelConstants = DEFAULT_CONSTANTS
) -> tuple[float, float]:
    """Stocks maintained by the shares mu and nu of the GDP flow y.

    h = nu*E*y (human capacity) and k = mu*G*y (physical capital): each stock
    is the share of GDP times the lifetime of what it maintains.
    """
    if y <= 0 or mu <= 0 or nu <= 0:
        raise DomainError(f"require y, mu, nu > 0, got y={y}, mu={mu}, nu={nu}")
    return nu * c.E * y, mu * c.G * y


def required_capacity(y: float, mu_w: float, c: ModelConstants = DEFAULT_CONSTANTS) -> float:
    """Demand-side capacity h_s actually required to absorb the GDP flow y.

    h_s = y / (eps_bar*(1 - 1/(mu_w*eps_bar*G))).  mu_w*eps_bar*G must exceed
    1, otherwise the implied working time would exceed the annual maximum.
    """
    if y <= 0:
        raise DomainError(f"require y > 0, got {y}")
    coeff = mu_w * c.eps_bar * c.G
    if coeff <= 1.0:
        raise DomainError(
            f"mu_w*eps_bar*G = {coeff} <= 1: working time would exceed the annual maximum"
        )
    return y / (c.eps_bar * (1.0 - 1.0 / coeff))


# ---------------------------------------------------------------------------
# working-time reconstruction
# ---------------------------------------------------------------------------

def working_time_curve(
    t,
    c: ModelConstants = DEFAULT_CONSTANTS,
    n: NationParams | None = None,
    capital_share: float | None = None,
):
    """Working-time fraction w(t) = y(t)/k_w(t) reconstructed from the curves.

    GDP carries the agricultural floor y0; employed capital carries the floor
    k0 = y0/eps_bar plus capital_share*G times the lag-shifted curve.  With no
    nation the envelope curves are used.  capital_share defaults to the
    nation's mu_w (0.15 otherwise) and must exceed (1 + beta*G)/G, or
    (1 + G/E)/G for the envelope, so that w never exceeds the annual maximum.
    """
    arr, scalar = _as_float_or_array(t)
    if n is None:
        share = 0.15 if capital_share is None else capital_share
        growth_ratio = 1.0 + c.G / c.E
        y = evolution(arr, c)
        y_k = c.a_bar * expit((arr - c.T - evolution_capital_lag(c)) / c.E)
    else:
        share = n.mu_w if capital_share is None else capital_share
        growth_ratio = max(1.0 + n.beta * c.G, 1.0 + c.G / c.E)
        y = national_gdp(arr, RecoveryCurve.from_nation(n, c))
        y_k = national_gdp(arr, lagged_curve(n, c))
    if share * c.G <= growth_ratio:
        raise DomainError(
            f"capital share {share} too small: employed capital would fall below "
            f"GDP during the fastest growth phase (need share*G > {growth_ratio})"
        )
    val = (c.y0 + y) / (c.y0 / c.eps_bar + share * c.G * y_k)
    return float(val) if scalar else val
