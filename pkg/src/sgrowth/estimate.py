"""Parameter estimation from national time series.

Implements the application procedure: the recovery rate from a single point
with slope, halftimes from half-amplitude crossings, full least-squares fits
of the simple and the two-term S-functions, and the lag measurement between
amplitude-normalized series that yields the lifetime constants E and G.

Least-squares refinement uses derivative-free simplex minimization with a
small multi-start grid; data are normalized before fitting so the results are
invariant under uniform rescaling of the input values.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import bisect, minimize

from .core import (
    DEFAULT_CONSTANTS,
    AnnualSeries,
    DomainError,
    FitReport,
    ModelConstants,
)
from .model import evolution, evolution_rate

__all__ = [
    "beta_from_point",
    "constants_from_shifts",
    "fit_recovery",
    "fit_scurve",
    "half_amplitude_crossing",
    "inflection_halftime",
    "measure_time_shift",
]

# Above this fraction of the envelope the rate inversion divides by (1 - y/a)
# and amplifies slope noise more than 20x.
_BETA_GUARD = 0.95


def beta_from_point(
    y: float, ydot: float, t: float, c: ModelConstants = DEFAULT_CONSTANTS
) -> float:
    """Recovery rate from one GDP point with slope.

    beta = (ydot/y - (adot/a)*(y/a)) / (1 - y/a) with the envelope a(t)
    evaluated at the same year.  Rejected near the envelope (y/a > 0.95)
    where the inversion becomes noise-dominated.
    """
    a = evolution(t, c)
    if not 0 < y < a:
        raise DomainError(f"require 0 < y < evolution({t}) = {a:.1f}, got {y}")
    ratio = y / a
    if ratio > _BETA_GUARD:
        raise DomainError(
            f"y/a = {ratio:.3f} > {_BETA_GUARD}: too close to the envelope for a "
            "stable rate inversion"
        )
    return (ydot / y - evolution_rate(a, c) * ratio) / (1.0 - ratio)


# ---------------------------------------------------------------------------
# halftime measurement
# ---------------------------------------------------------------------------

def half_amplitude_crossing(series: AnnualSeries, amplitude: float, floor: float = 0.0) -> float:
    """Year of the first upward crossing of floor + amplitude/2.

    Linear interpolation between the bracketing years; the default halftime
    measurement.
    """
    target = floor + amplitude / 2.0
    ys = series.years
    vs = series.values
    for i in range(len(vs) - 1):
        if vs[i] <= target < vs[i + 1]:
            frac = (target - vs[i]) / (vs[i + 1] - vs[i])
            return float(ys[i] + frac * (ys[i + 1] - ys[i]))
    raise DomainError("series never crosses half amplitude from below")


def _quadratic_point(ys, vs, i):
    """Value and slope at ys[i] from a local quadratic over a 5-point window."""
    lo = max(0, min(i - 2, len(ys) - 5))
    t = ys[lo:lo + 5] - ys[i]
    coeffs = np.polyfit(t, vs[lo:lo + 5], 2)
    return float(np.polyval(coeffs, 0.0)), float(np.polyval(np.polyder(coeffs), 0.0))


def inflection_halftime(series: AnnualSeries) -> float:
    """Year of the steepest slope, the alternative halftime measurement.

    Slopes come from local quadratic fits over 5-point windows; the discrete
    maximum is refined with a parabola through its neighbours.
    """
    ys = series.years
    vs = series.values
    if len(vs) < 7:
        raise DomainError("need at least 7 points to locate an inflection")
    idx = range(2, len(vs) - 2)
    slopes = np.array([_quadratic_point(ys, vs, i)[1] for i in idx])
    k = int(np.argmax(slopes))
    if 0 < k < len(slopes) - 1:
        s0, s1, s2 = slopes[k - 1], slopes[k], slopes[k + 1]
        den = s0 - 2.0 * s1 + s2
        offset = 0.5 * (s0 - s2) / den if den != 0 else 0.0
        return float(ys[k + 2] + offset * (ys[1] - ys[0]))
    return float(ys[k + 2])


# ---------------------------------------------------------------------------
# simplex least squares
# ---------------------------------------------------------------------------

def _simplex_multistart(objective, starts, deltas, max_iter=4000):
    """Nelder-Mead from several starts; deterministic best-of selection."""
    best = None
    for x0 in starts:
        simplex = [np.asarray(x0, dtype=float)]
        for j, d in enumerate(deltas):
            v = np.asarray(x0, dtype=float).copy()
            v[j] += d
            simplex.append(v)
        f0 = objective(np.asarray(x0, dtype=float))
        res = minimize(
            objective,
            np.asarray(x0, dtype=float),
            method="Nelder-Mead",
            options={
                "initial_simplex": np.array(simplex),
                "xatol": 1e-9,
                "fatol": 1e-12 * (abs(f0) + 1e-30),
                "maxiter": max_iter,
                "maxfev": max_iter,
            },
        )
        key = (res.fun, tuple(res.x))
        if best is None or key < best[0]:
            best = (key, res)
    return best[1]


def fit_scurve(
    series: AnnualSeries,
    growth_param_fixed: float | None = None,
    floor: float = 0.0,
) -> FitReport:
    """Least-squares fit of a simple S-function to an annual series.

    Estimates (amplitude, halftime) and, unless fixed, the growth parameter.
    The series must span the inflection region for the halftime to be
    identifiable.  Non-convergence is reported in the FitReport, never raised.
    """
    if len(series) < 5:
        raise DomainError(f"need at least 5 points, got {len(series)}")
    ys = series.years
    raw = series.values - floor
    scale = float(np.max(np.abs(raw)))
    if scale == 0.0 or float(np.max(raw) - np.min(raw)) < 1e-12 * scale:
        return FitReport(
            params={}, rss=0.0, n_points=len(series), converged=False,
            iterations=0, message="degenerate series: no amplitude variation",
        )
    vn = raw / scale

    vmax = float(np.max(vn))
    amp0 = 1.05 * vmax
    try:
        half0 = half_amplitude_crossing(
            AnnualSeries.from_arrays(ys, vn, series.unit), amp0
        )
    except DomainError:
        half0 = float(0.5 * (ys[0] + ys[-1]))
    slopes = [_quadratic_point(ys, vn, i)[1] for i in range(len(vn))]
    smax = max(max(slopes), 1e-9)
    g0 = growth_param_fixed if growth_param_fixed is not None else 4.0 * smax / amp0

    if growth_param_fixed is None:
        def objective(x):
            if x[0] <= 0 or x[2] <= 0:
                return 1e9
            m = x[0] / (1.0 + np.exp(np.clip(x[2] * (x[1] - ys), -700, 700)))
            return float(np.sum((m - vn) ** 2))

        span = ys[-1] - ys[0]
        starts = [
            (a_f * amp0, half0 + h_off, g_f * g0)
            for a_f in (1.0, 1.7, 3.0)
            for h_off in (-0.1 * span, 0.0, 0.1 * span)
            for g_f in (0.5, 1.0, 2.0)
        ]
        deltas = (0.1 * amp0, 5.0, 0.3 * g0)
        names = ("amplitude", "halftime", "growth_param")
    else:
        g = growth_param_fixed

        def objective(x):
            if x[0] <= 0:
                return 1e9
            m = x[0] / (1.0 + np.exp(np.clip(g * (x[1] - ys), -700, 700)))
            return float(np.sum((m - vn) ** 2))

        span = ys[-1] - ys[0]
        starts = [
            (a_f * amp0, half0 + h_off)
            for a_f in (1.0, 1.7, 3.0)
            for h_off in (-0.1 * span, 0.0, 0.1 * span)
        ]
        deltas = (0.1 * amp0, 5.0)
        names = ("amplitude", "halftime")

    res = _simplex_multistart(objective, starts, deltas)
    params = dict(zip(names, (float(v) for v in res.x)))
    params["amplitude"] *= scale
    if growth_param_fixed is not None:
        params["growth_param"] = growth_param_fixed
    params["floor"] = floor
    return FitReport(
        params=params,
        rss=float(res.fun) * scale * scale,
        n_points=len(series),
        converged=bool(res.success),
        iterations=int(res.nit),
        message=res.message if not res.success else "",
    )


def fit_recovery(series: AnnualSeries, c: ModelConstants = DEFAULT_CONSTANTS) -> FitReport:
    """Two-stage estimate of a nation's recovery parameters (beta, tau).

    Stage 1 initializes beta from the smoothed mid-series point with its
    slope, and tau from the half-amplitude crossing.  Stage 2 refines both by
    derivative-free least squares on the two-term S-function with the
    envelope (a_bar, T, E) held at the supplied constants.

    A series lying entirely above the envelope is rejected: such economies
    lean on non-physical capital and the recovery model does not apply.
    """
    if len(series) < 5:
        raise DomainError(f"need at least 5 points, got {len(series)}")
    ys = series.years
    vs = series.values
    env = evolution(ys, c)
    if np.all(vs > env):
        raise DomainError("series lies entirely above the evolution envelope")

    vn = vs / c.a_bar

    # stage 1: point estimate for beta, crossing estimate for tau
    beta0 = None
    order = sorted(range(2, len(vs) - 2), key=lambda i: abs(i - len(vs) // 2))
    for i in order:
        y_i, ydot_i = _quadratic_point(ys, vs, i)
        try:
            b = beta_from_point(y_i, ydot_i, float(ys[i]), c)
        except DomainError:
            continue
        if b > 0:
            beta0 = b
            break
    if beta0 is None:
        beta0 = 1.0 / c.G
    try:
        tau0 = half_amplitude_crossing(series, c.a_bar)
    except DomainError:
        # no crossing observed: place tau from the mid point, attributing the
        # remaining gap to the recovery term
        i = len(vs) // 2
        gap = max(c.a_bar / vs[i] - 1.0 - math.exp((c.T - ys[i]) / c.E), 0.05)
        tau0 = float(ys[i]) + math.log(gap) / beta0

    def model(beta, tau, t):
        lu = (c.T - t) / c.E
        lv = beta * (tau - t)
        return 1.0 / (1.0 + np.exp(np.clip(lu, -700, 700)) + np.exp(np.clip(lv, -700, 700)))

    def objective(x):
        if x[0] <= 0:
            return 1e9
        return float(np.sum((model(x[0], x[1], ys) - vn) ** 2))

    starts = [
        (b_f * beta0, tau0 + t_off)
        for b_f in (0.75, 1.0, 1.3)
        for t_off in (-4.0, 0.0, 4.0)
    ]
    res = _simplex_multistart(objective, starts, deltas=(0.1 * beta0, 2.0))
    params = {"beta": float(res.x[0]), "tau": float(res.x[1])}
    return FitReport(
        params=params,
        rss=float(res.fun) * c.a_bar * c.a_bar,
        n_points=len(series),
        converged=bool(res.success),
        iterations=int(res.nit),
        message=res.message if not res.success else "",
    )


# ---------------------------------------------------------------------------
# lag measurement and constants
# ---------------------------------------------------------------------------

def measure_time_shift(
    series_a: AnnualSeries,
    series_b: AnnualSeries,
    max_lag: float | None = None,
    resolution: float = 0.25,
) -> float:
    """Lag (years) by which series_b trails series_a.

    Both series are normalized to unit amplitude; the lag minimizing the mean
    squared difference over the overlap is scanned at the given resolution and
    refined with a parabola through the discrete minimum.  Positive result
    means b(t) matches a(t - lag).
    """
    ya, va = series_a.years, series_a.values
    yb, vb = series_b.years, series_b.values
    overlap = min(ya[-1], yb[-1]) - max(ya[0], yb[0])
    if overlap < 30:
        raise DomainError(f"overlap of {overlap:.0f} yr is too short; need >= 30")
    for label, v in (("first", va), ("second", vb)):
        if float(np.max(v) - np.min(v)) <= 0:
            raise DomainError(f"{label} series is flat; no shift is measurable")

    if max_lag is None:
        max_lag = max(overlap - 15.0, resolution)
    lags = np.arange(-max_lag, max_lag + resolution / 2.0, resolution)

    def msd(lag):
        shifted = yb - lag
        mask = (shifted >= ya[0]) & (shifted <= ya[-1])
        if mask.sum() < 15:
            return np.inf
        ref = np.interp(shifted[mask], ya, va)
        win = vb[mask]
        # normalize both windows to unit amplitude over the same overlap, so
        # a pure time shift scores exactly zero regardless of series scales
        ref_span = ref.max() - ref.min()
        win_span = win.max() - win.min()
        if ref_span <= 0 or win_span <= 0:
            return np.inf
        ref_n = (ref - ref.min()) / ref_span
        win_n = (win - win.min()) / win_span
        return float(np.mean((win_n - ref_n) ** 2))

    scores = np.array([msd(l) for l in lags])
    k = int(np.argmin(scores))
    if not np.isfinite(scores[k]):
        raise DomainError("no lag leaves enough overlapping points")
    if 0 < k < len(lags) - 1 and np.isfinite(scores[k - 1]) and np.isfinite(scores[k + 1]):
        s0, s1, s2 = scores[k - 1], scores[k], scores[k + 1]
        den = s0 - 2.0 * s1 + s2
        if den > 0:
            return float(lags[k] + 0.5 * (s0 - s2) / den * resolution)
    return float(lags[k])


def constants_from_shifts(
    shift_evolution: float,
    shift_recovery: float,
    beta: float,
    c: ModelConstants = DEFAULT_CONSTANTS,
) -> tuple[float, float]:
    """Recover (E, G) from the measured capital lags.

    The recovery lag inverts directly: G = (exp(beta*lag) - 1)/beta.  The
    evolution lag then fixes E through lag = E*ln(1 + G/E), solved by
    bracketed bisection on E in [1, 500]; the lag tends to G as E grows, so a
    lag of G or more has no solution.
    """
    if shift_evolution <= 0 or shift_recovery <= 0:
        raise DomainError("shifts must be positive")
    if beta <= 0:
        raise DomainError(f"require beta > 0, got {beta}")
    g_est = math.expm1(beta * shift_recovery) / beta

    def f(e):
        return e * math.log1p(g_est / e) - shift_evolution

    lo, hi = 1.0, 500.0
    if f(lo) > 0 or f(hi) < 0:
        raise DomainError(
            f"no E in [{lo}, {hi}] reproduces an evolution lag of {shift_evolution} yr "
            f"with G = {g_est:.2f}"
        )
    e_est = bisect(f, lo, hi, xtol=1e-10)
    return float(e_est), float(g_est)
