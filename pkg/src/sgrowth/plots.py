"""Figure builders for the reference charts.

Figures are rendered with matplotlib to SVG files.  Output bytes are
deterministic for fixed inputs: the SVG id hash salt is pinned and the
creation date is stripped.  Every curve carries a ``curve-<name>`` group id
so rendered figures can be inspected structurally.

Alongside each figure the sampled curve data can be written as CSV files,
one per curve, in the standard ingestion format.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .core import (
    DEFAULT_CONSTANTS,
    AnnualSeries,
    ModelConstants,
    NationParams,
    NATIONS,
    RecoveryCurve,
    hours_per_week,
)
from .dataio import write_csv
from .model import (
    capital,
    evolution,
    evolution_capital_lag,
    life_expectancy,
    national_gdp,
    recovery_capital_lag,
    working_time_curve,
)

__all__ = [
    "build_overview_figure",
    "build_series_figure",
    "build_shift_figure",
    "build_working_time_figure",
    "save_figure",
]

_SVG_SALT = "sgrowth"

_UNIT_LABEL = {
    "currency-flow": "US$ of 1991 p.a. per capita",
    "currency-stock": "US$ of 1991 per capita",
    "years": "years",
    "dimensionless-fraction": "fraction of the annual maximum",
}


def save_figure(fig, path, curves: dict[str, AnnualSeries] | None = None, data_dir=None) -> None:
    """Write the figure as SVG; optionally dump the plotted curves as CSV."""
    with plt.rc_context({"svg.hashsalt": _SVG_SALT}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    if data_dir is not None and curves:
        out = Path(data_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, series in curves.items():
            write_csv(series, out / f"{name}.csv")


def _annual(years, values, unit) -> AnnualSeries:
    return AnnualSeries.from_arrays(years, values, unit)


def build_working_time_figure(
    c: ModelConstants = DEFAULT_CONSTANTS,
    n: NationParams | None = None,
    t_range: tuple[float, float] = (1500.0, 2100.0),
    overlays: list[AnnualSeries] | None = None,
):
    """Working time against calendar year, from the reconstruction w = y/k_w.

    The default range starts at the pre-industrial plateau where the curve
    sits at the annual maximum (96 h/week) before its long decrease.
    """
    years = np.arange(int(t_range[0]), int(t_range[1]) + 1)
    w = working_time_curve(years, c, n)
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    (line,) = ax.plot(years, hours_per_week(w), color="#1f4e79", lw=1.6)
    line.set_gid("curve-working-time")
    for i, series in enumerate(overlays or []):
        pts = ax.plot(
            series.years, hours_per_week(series.values), "o", ms=3.5, label=f"data {i + 1}"
        )
        pts[0].set_gid(f"data-{i + 1}")
    ax.set_xlabel("year")
    ax.set_ylabel("working time (h/week)")
    ax.set_ylim(0, 100)
    ax.grid(True, ls=":", alpha=0.5)
    ax.set_title("Annual working time")
    if overlays:
        ax.legend(loc="upper right")
    fig.tight_layout()
    curves = {"working-time": _annual(years, w, "dimensionless-fraction")}
    return fig, curves


def build_shift_figure(
    c: ModelConstants = DEFAULT_CONSTANTS,
    n: NationParams | None = None,
    overlays: list[AnnualSeries] | None = None,
):
    """Amplitude-normalized GDP and capital, showing the two lags.

    Top panel: the evolution envelope against its capital curve (lag
    E*ln(1+G/E)).  Bottom panel: one nation's recovery against its capital
    (lag ln(1+beta*G)/beta).
    """
    n = n or NATIONS["germany"]
    years = np.arange(1850, 2151)
    a_norm = evolution(years, c) / c.a_bar
    lag_e = evolution_capital_lag(c)
    ak_norm = evolution(years - lag_e, c) / c.a_bar

    r = RecoveryCurve.from_nation(n, c)
    y_norm = national_gdp(years, r) / c.a_bar
    k_norm = capital(years, n, c) / (n.mu_bar * c.G * c.a_bar)

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7.0, 6.4), sharex=True)
    l1, = ax1.plot(years, a_norm, color="#1f4e79", lw=1.6, label="GDP envelope")
    l2, = ax1.plot(years, ak_norm, color="#b04a3a", lw=1.6, ls="--", label="physical capital")
    l1.set_gid("curve-evolution")
    l2.set_gid("curve-evolution-capital")
    ax1.annotate(
        f"lag {lag_e:.1f} yr",
        xy=(c.T, 0.5), xytext=(c.T + lag_e + 8, 0.47),
        arrowprops={"arrowstyle": "->"}, fontsize=9,
    )
    ax1.set_ylabel("normalized amplitude")
    ax1.grid(True, ls=":", alpha=0.5)
    ax1.legend(loc="upper left")
    ax1.set_title("Capital trailing GDP: the long-term envelope")

    lag_r = recovery_capital_lag(n.beta, c)
    l3, = ax2.plot(years, y_norm, color="#1f4e79", lw=1.6, label=f"{n.name} GDP")
    l4, = ax2.plot(years, k_norm, color="#b04a3a", lw=1.6, ls="--", label=f"{n.name} capital")
    l3.set_gid("curve-recovery")
    l4.set_gid("curve-recovery-capital")
    ax2.annotate(
        f"lag {lag_r:.1f} yr",
        xy=(n.tau, 0.45), xytext=(n.tau + lag_r + 8, 0.42),
        arrowprops={"arrowstyle": "->"}, fontsize=9,
    )
    for i, series in enumerate(overlays or []):
        vmax = float(np.max(series.values))
        pts = ax2.plot(series.years, series.values / vmax, "o", ms=3.5, label=f"data {i + 1}")
        pts[0].set_gid(f"data-{i + 1}")
    ax2.set_xlabel("year")
    ax2.set_ylabel("normalized amplitude")
    ax2.grid(True, ls=":", alpha=0.5)
    ax2.legend(loc="upper left")
    ax2.set_title(f"Capital trailing GDP: the {n.name} recovery")
    fig.tight_layout()
    curves = {
        "evolution": _annual(years, a_norm * c.a_bar, "currency-flow"),
        "evolution-capital": _annual(years, ak_norm * c.a_bar, "currency-flow"),
        f"{n.name}-gdp": _annual(years, y_norm * c.a_bar, "currency-flow"),
        f"{n.name}-capital": _annual(years, capital(years, n, c), "currency-stock"),
    }
    return fig, curves


def build_overview_figure(
    c: ModelConstants = DEFAULT_CONSTANTS,
    nations: list[NationParams] | None = None,
    overlays: list[AnnualSeries] | None = None,
):
    """National recoveries, the evolution envelope, and the life expectancy.

    GDP curves sit on the right axis, life expectancy on the left; overlay
    series are routed to the axis matching their unit tag.  The bar marks the
    lead of the life expectancy over the evolution.
    """
    if nations is None:
        nations = [NATIONS[k] for k in ("usa", "germany", "japan", "korea")]
    years = np.arange(1850, 2151)

    fig, ax_life = plt.subplots(figsize=(7.6, 4.8))
    ax_gdp = ax_life.twinx()

    life = life_expectancy(years, c)
    l_life, = ax_life.plot(years, life, color="#2a7a2a", lw=1.8, label="life expectancy")
    l_life.set_gid("curve-life-expectancy")
    ax_life.set_ylabel("life expectancy (years)", color="#2a7a2a")
    ax_life.set_ylim(0, 130)

    env = evolution(years, c)
    l_env, = ax_gdp.plot(years, env / 1000.0, color="#1f4e79", lw=2.0, label="evolution")
    l_env.set_gid("curve-evolution")
    curves = {
        "life-expectancy": _annual(years, life, "years"),
        "evolution": _annual(years, env, "currency-flow"),
    }
    palette = ("#b04a3a", "#c08a00", "#6a4a90", "#3a8a8a", "#888888")
    for color, n in zip(palette, nations):
        y = national_gdp(years, RecoveryCurve.from_nation(n, c))
        line, = ax_gdp.plot(years, y / 1000.0, color=color, lw=1.3, label=n.name)
        line.set_gid(f"curve-{n.name}")
        curves[n.name] = _annual(years, y, "currency-flow")
    ax_gdp.set_ylabel("GDP (1000 US$ of 1991 p.a. per capita)", color="#1f4e79")

    # lead of the life expectancy over the evolution, between the halftimes
    ax_life.annotate(
        "",
        xy=(c.T_L, c.L0 + (c.L_bar - c.L0) / 2.0),
        xytext=(c.T, c.L0 + (c.L_bar - c.L0) / 2.0),
        arrowprops={"arrowstyle": "<->", "color": "black"},
    )
    ax_life.text(
        (c.T_L + c.T) / 2.0, c.L0 + (c.L_bar - c.L0) / 2.0 + 3,
        f"{c.T - c.T_L:.0f} yr", ha="center", fontsize=9,
    )

    for i, series in enumerate(overlays or []):
        ax = ax_life if series.unit == "years" else ax_gdp
        vals = series.values if series.unit == "years" else series.values / 1000.0
        pts = ax.plot(series.years, vals, "o", ms=3.0, label=f"data {i + 1}")
        pts[0].set_gid(f"data-{i + 1}")

    ax_life.set_xlabel("year")
    ax_life.grid(True, ls=":", alpha=0.5)
    handles1, labels1 = ax_life.get_legend_handles_labels()
    handles2, labels2 = ax_gdp.get_legend_handles_labels()
    ax_gdp.legend(handles1 + handles2, labels1 + labels2, loc="upper left", fontsize=8)
    ax_life.set_title("Recoveries, the industrial evolution, and the life expectancy")
    fig.tight_layout()
    return fig, curves


def build_series_figure(
    series_list: list[AnnualSeries],
    labels: list[str] | None = None,
    c: ModelConstants = DEFAULT_CONSTANTS,
    n: NationParams | None = None,
    with_evolution: bool = False,
):
    """Plot arbitrary ingested series, optionally with reference curves.

    Series tagged ``years`` go to a secondary axis when mixed with currency
    units; a nation adds its recovery curve, with_evolution adds the envelope.
    """
    labels = labels or [f"series {i + 1}" for i in range(len(series_list))]
    units = {s.unit for s in series_list}
    dual = "years" in units and len(units) > 1

    fig, ax = plt.subplots(figsize=(7.2, 4.5))
    ax2 = ax.twinx() if dual else None
    curves: dict[str, AnnualSeries] = {}

    for i, (series, label) in enumerate(zip(series_list, labels)):
        target = ax2 if (dual and series.unit == "years") else ax
        pts = target.plot(series.years, series.values, "o-", ms=3.0, lw=0.8, label=label)
        pts[0].set_gid(f"data-{i + 1}")

    t_lo = min(int(s.years[0]) for s in series_list)
    t_hi = max(int(s.years[-1]) for s in series_list)
    years = np.arange(t_lo, t_hi + 1)
    if with_evolution:
        line, = ax.plot(years, evolution(years, c), color="#1f4e79", lw=1.6, label="evolution")
        line.set_gid("curve-evolution")
        curves["evolution"] = _annual(years, evolution(years, c), "currency-flow")
    if n is not None:
        y = national_gdp(years, RecoveryCurve.from_nation(n, c))
        line, = ax.plot(years, y, color="#b04a3a", lw=1.6, label=n.name)
        line.set_gid(f"curve-{n.name}")
        curves[n.name] = _annual(years, y, "currency-flow")

    primary_units = units - {"years"} if dual else units
    if len(primary_units) == 1:
        ax.set_ylabel(_UNIT_LABEL[next(iter(primary_units))])
    if ax2 is not None:
        ax2.set_ylabel(_UNIT_LABEL["years"])
    ax.set_xlabel("year")
    ax.grid(True, ls=":", alpha=0.5)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig, curves
