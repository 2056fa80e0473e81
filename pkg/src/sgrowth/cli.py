"""Command-line front end.

Subcommands: ``eval`` (sample a curve as CSV), ``fit`` (estimate parameters
from a CSV series), ``shift`` (measure the lag between two series), ``plot``
(render the reference figures to SVG), and ``validate`` (check the
implementation against the reference numbers).

Exit status: 0 success, 1 validation or fit failure, 2 usage error, 3 I/O or
input-format error.  Identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .core import (
    DEFAULT_CONSTANTS,
    AnnualSeries,
    CoverageError,
    DataFormatError,
    DomainError,
    ModelConstants,
    NationParams,
    NATIONS,
    RecoveryCurve,
)
from .dataio import read_csv, write_csv
from .estimate import constants_from_shifts, fit_recovery, fit_scurve, measure_time_shift
from .model import (
    capital,
    evolution,
    life_expectancy,
    national_gdp,
    working_time_curve,
)
from .validate import format_table, run_validation

_CURVE_UNITS = {
    "evolution": "currency-flow",
    "national": "currency-flow",
    "capital": "currency-stock",
    "life": "years",
    "working-time": "dimensionless-fraction",
}


class UsageError(Exception):
    pass


def _parse_constants(pairs: list[str]) -> ModelConstants:
    fields = {f.name for f in dataclasses.fields(ModelConstants)}
    overrides = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or key not in fields:
            raise UsageError(
                f"bad --constants entry {pair!r}; expected <field>=<value> with field "
                f"one of {sorted(fields)}"
            )
        try:
            overrides[key] = float(value)
        except ValueError:
            raise UsageError(f"bad --constants value in {pair!r}") from None
    try:
        return dataclasses.replace(DEFAULT_CONSTANTS, **overrides)
    except DomainError as exc:
        raise UsageError(f"inconsistent constants: {exc}") from None


def _resolve_nation(args, c: ModelConstants) -> NationParams:
    if args.nation:
        try:
            return NATIONS[args.nation.lower()]
        except KeyError:
            raise UsageError(
                f"unknown nation {args.nation!r}; known: {', '.join(sorted(NATIONS))}"
            ) from None
    if args.beta is None or args.tau is None:
        raise UsageError("need --nation, or both --beta and --tau")
    mu_bar = args.mu_bar if args.mu_bar is not None else 0.25
    try:
        mu_e = mu_bar / (1.0 + args.beta * c.G)
        return NationParams("custom", args.tau, mu_bar, mu_e, args.beta)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _emit_rows(args, header: str, rows: list[str]) -> None:
    text = "\n".join([header] + rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_eval(args) -> int:
    c = _parse_constants(args.constants)
    ts = np.arange(args.t_from, args.t_to + args.step / 2.0, args.step)
    if ts.size == 0:
        raise UsageError(f"empty range [{args.t_from}, {args.t_to}] at step {args.step}")
    curve = args.curve
    if curve == "evolution":
        vals = evolution(ts, c)
    elif curve == "life":
        vals = life_expectancy(ts, c)
    elif curve == "national":
        n = _resolve_nation(args, c)
        vals = national_gdp(ts, RecoveryCurve.from_nation(n, c))
    elif curve == "capital":
        n = _resolve_nation(args, c)
        vals = capital(ts, n, c)
    else:  # working-time
        n = None
        if args.nation or (args.beta is not None and args.tau is not None):
            n = _resolve_nation(args, c)
        vals = working_time_curve(ts, c, n)
    rows = [f"{t:g},{float(v)!r}" for t, v in zip(ts, np.atleast_1d(vals))]
    _emit_rows(args, f"year,value,unit={_CURVE_UNITS[curve]}", rows)
    return 0


def _cmd_fit(args) -> int:
    c = _parse_constants(args.constants)
    series = read_csv(args.input)
    if args.mode == "scurve":
        report = fit_scurve(series, growth_param_fixed=args.growth_param, floor=args.floor)
    else:
        report = fit_recovery(series, c)
    for key in sorted(report.params):
        print(f"{key} = {report.params[key]:.10g}")
    print(f"rss = {report.rss:.10g}")
    print(f"n_points = {report.n_points}")
    print(f"iterations = {report.iterations}")
    print(f"converged = {report.converged}")
    if report.message:
        print(f"message = {report.message}")
    if args.curve_out and report.converged:
        years = series.years.astype(int)
        if args.mode == "scurve":
            p = report.params
            vals = p["floor"] + p["amplitude"] / (
                1.0 + np.exp(p["growth_param"] * (p["halftime"] - years))
            )
        else:
            r = RecoveryCurve(c.a_bar, c.T, c.E, report.params["beta"], report.params["tau"])
            vals = national_gdp(years.astype(float), r)
        write_csv(AnnualSeries.from_arrays(years, vals, series.unit), args.curve_out)
    return 0 if report.converged else 1


def _cmd_shift(args) -> int:
    series_a = read_csv(args.input_a)
    series_b = read_csv(args.input_b)
    lag = measure_time_shift(series_a, series_b, max_lag=args.max_lag)
    print(f"shift_years = {lag:.3f}")
    if args.infer_constants:
        if args.beta is None:
            raise UsageError("--infer-constants needs --beta")
        if args.evolution_pair:
            ev_a = read_csv(args.evolution_pair[0])
            ev_b = read_csv(args.evolution_pair[1])
            ev_shift = measure_time_shift(ev_a, ev_b, max_lag=args.max_lag)
        elif args.evolution_shift is not None:
            ev_shift = args.evolution_shift
        else:
            raise UsageError("--infer-constants needs --evolution-shift or --evolution-pair")
        e_est, g_est = constants_from_shifts(ev_shift, lag, args.beta)
        print(f"E_est = {e_est:.3f}")
        print(f"G_est = {g_est:.3f}")
    return 0


def _cmd_validate(args) -> int:
    c = _parse_constants(args.constants)
    checks = run_validation(c)
    print(format_table(checks))
    return 1 if any(ch.status == "FAIL" for ch in checks) else 0


def _cmd_plot(args) -> int:
    # matplotlib import is deferred so the numeric commands stay light
    from . import plots

    c = _parse_constants(args.constants)
    overlays = [read_csv(p) for p in args.data or []]
    nations = None
    if args.nation:
        nations = []
        for name in args.nation:
            if name.lower() not in NATIONS:
                raise UsageError(
                    f"unknown nation {name!r}; known: {', '.join(sorted(NATIONS))}"
                )
            nations.append(NATIONS[name.lower()])

    if args.figure == "fig1":
        t_range = (args.t_from or 1500.0, args.t_to or 2100.0)
        fig, curves = plots.build_working_time_figure(
            c, nations[0] if nations else None, t_range, overlays
        )
    elif args.figure == "fig3":
        fig, curves = plots.build_shift_figure(c, nations[0] if nations else None, overlays)
    elif args.figure == "fig4":
        fig, curves = plots.build_overview_figure(c, nations, overlays)
    else:  # custom
        if not overlays:
            raise UsageError("plot custom needs at least one --data series")
        fig, curves = plots.build_series_figure(
            overlays,
            labels=[p for p in args.data],
            c=c,
            n=nations[0] if nations else None,
            with_evolution=args.evolution,
        )
    plots.save_figure(fig, args.out, curves, args.data_out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgrowth",
        description="S-function growth curves: evaluate, fit, measure lags, plot, validate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_constants(p):
        p.add_argument(
            "--constants",
            action="append",
            metavar="FIELD=VALUE",
            help="override a model constant (repeatable)",
        )

    p_eval = sub.add_parser("eval", help="sample a curve and emit CSV rows")
    p_eval.add_argument(
        "curve", choices=["evolution", "national", "capital", "life", "working-time"]
    )
    p_eval.add_argument("--from", dest="t_from", type=float, default=1800.0)
    p_eval.add_argument("--to", dest="t_to", type=float, default=2100.0)
    p_eval.add_argument("--step", type=float, default=1.0)
    p_eval.add_argument("--nation", help="built-in nation preset")
    p_eval.add_argument("--beta", type=float, help="custom recovery rate (with --tau)")
    p_eval.add_argument("--tau", type=float, help="custom recovery halftime (with --beta)")
    p_eval.add_argument("--mu-bar", dest="mu_bar", type=float, help="capital share for 'capital'")
    p_eval.add_argument("--out", help="output file (default stdout)")
    add_constants(p_eval)

    p_fit = sub.add_parser("fit", help="fit an S-function to a CSV series")
    p_fit.add_argument("input", help="CSV series")
    p_fit.add_argument("--mode", choices=["scurve", "recovery"], default="scurve")
    p_fit.add_argument(
        "--growth-param", dest="growth_param", type=float,
        help="fix the growth parameter instead of fitting it (scurve mode)",
    )
    p_fit.add_argument("--floor", type=float, default=0.0, help="fixed offset (scurve mode)")
    p_fit.add_argument("--curve-out", dest="curve_out", help="write the fitted curve as CSV")
    add_constants(p_fit)

    p_shift = sub.add_parser("shift", help="measure the lag between two series")
    p_shift.add_argument("input_a", help="reference series (GDP); the recovery pair when inferring constants")
    p_shift.add_argument("input_b", help="trailing series (physical capital)")
    p_shift.add_argument("--max-lag", dest="max_lag", type=float)
    p_shift.add_argument(
        "--infer-constants", dest="infer_constants", action="store_true",
        help="invert the lags into the lifetime constants E and G",
    )
    p_shift.add_argument("--beta", type=float, help="recovery rate for the inversion")
    p_shift.add_argument(
        "--evolution-shift", dest="evolution_shift", type=float,
        help="evolution lag in years, if measured elsewhere",
    )
    p_shift.add_argument(
        "--evolution-pair", dest="evolution_pair", nargs=2, metavar=("GDP", "CAPITAL"),
        help="second series pair from which to measure the evolution lag",
    )

    p_val = sub.add_parser("validate", help="check against the reference numbers")
    add_constants(p_val)

    p_plot = sub.add_parser("plot", help="render a figure to SVG")
    p_plot.add_argument("figure", choices=["fig1", "fig3", "fig4", "custom"])
    p_plot.add_argument("--out", required=True, help="output SVG path")
    p_plot.add_argument("--data", action="append", help="overlay CSV series (repeatable)")
    p_plot.add_argument("--nation", action="append", help="nation preset (repeatable)")
    p_plot.add_argument("--evolution", action="store_true", help="add the envelope (custom)")
    p_plot.add_argument("--from", dest="t_from", type=float, help="start year (fig1)")
    p_plot.add_argument("--to", dest="t_to", type=float, help="end year (fig1)")
    p_plot.add_argument(
        "--data-out", dest="data_out",
        help="directory for the plotted curves as CSV files",
    )
    add_constants(p_plot)

    return parser


_HANDLERS = {
    "eval": _cmd_eval,
    "fit": _cmd_fit,
    "shift": _cmd_shift,
    "validate": _cmd_validate,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DataFormatError, CoverageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
