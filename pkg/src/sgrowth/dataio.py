"""Ingestion and normalization of annual national series.

CSV format (the only ingestion format): UTF-8, first line ``year,value``
optionally followed by ``,unit=<tag>``; one record per line with an integer
year and a decimal value; LF or CRLF; no thousands separators.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import AnnualSeries, CoverageError, DataFormatError, DomainError, UNIT_TAGS

__all__ = ["deflate", "five_year_average", "per_capita", "read_csv", "write_csv"]


def read_csv(path) -> AnnualSeries:
    """Read and validate an annual series from a CSV file."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise DataFormatError(f"{path}: empty file")

    header = [part.strip() for part in lines[0].split(",")]
    if len(header) < 2 or header[0].lower() != "year" or header[1].lower() != "value":
        raise DataFormatError(f"{path}: line 1: header must start with 'year,value'")
    unit = "dimensionless-fraction"
    if len(header) >= 3 and header[2]:
        if not header[2].startswith("unit="):
            raise DataFormatError(f"{path}: line 1: third header field must be 'unit=<tag>'")
        unit = header[2][len("unit="):]
        if unit not in UNIT_TAGS:
            raise DataFormatError(
                f"{path}: line 1: unknown unit {unit!r}; expected one of {UNIT_TAGS}"
            )

    points = []
    prev_year = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 2:
            raise DataFormatError(f"{path}: line {lineno}: expected 'year,value'")
        try:
            year = int(fields[0].strip())
        except ValueError:
            raise DataFormatError(
                f"{path}: line {lineno}: year {fields[0].strip()!r} is not an integer"
            ) from None
        try:
            value = float(fields[1].strip())
        except ValueError:
            raise DataFormatError(
                f"{path}: line {lineno}: value {fields[1].strip()!r} is not a number"
            ) from None
        if not np.isfinite(value):
            raise DataFormatError(f"{path}: line {lineno}: non-finite value for year {year}")
        if prev_year is not None:
            if year == prev_year:
                raise DataFormatError(f"{path}: line {lineno}: duplicate year {year}")
            if year < prev_year:
                raise DataFormatError(
                    f"{path}: line {lineno}: year {year} breaks the increasing order"
                )
        points.append((year, value))
        prev_year = year
    if not points:
        raise DataFormatError(f"{path}: no data rows")
    return AnnualSeries(tuple(points), unit)


def write_csv(series: AnnualSeries, path) -> None:
    """Write a series in the ingestion format; read_csv(write_csv(s)) == s."""
    lines = [f"year,value,unit={series.unit}"]
    lines.extend(f"{year},{value!r}" for year, value in series.points)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def five_year_average(series: AnnualSeries) -> AnnualSeries:
    """Centered five-year moving average, emitted only for complete windows.

    The output year is the window center.  Windows spanning a gap in the
    annual record are dropped rather than interpolated, since filled-in years
    would corrupt downstream lag measurements.
    """
    if len(series) < 5:
        raise DomainError(f"need at least 5 consecutive annual points, got {len(series)}")
    by_year = dict(series.points)
    points = []
    for year, _ in series.points:
        window = [by_year.get(year + d) for d in range(-2, 3)]
        if all(v is not None for v in window):
            points.append((year, sum(window) / 5.0))
    if not points:
        raise DomainError("no gap-free five-year window in the series")
    return AnnualSeries(tuple(points), series.unit)


def deflate(series: AnnualSeries, deflator: AnnualSeries, base_year: int) -> AnnualSeries:
    """Rescale values to the price level of base_year.

    value_out(t) = value_in(t) * deflator(base_year)/deflator(t).
    """
    index = dict(deflator.points)
    if base_year not in index:
        raise CoverageError(f"deflator does not cover the base year {base_year}")
    missing = [y for y, _ in series.points if y not in index]
    if missing:
        raise CoverageError(f"deflator does not cover year(s) {missing}")
    if any(v <= 0 for _, v in deflator.points):
        raise DomainError("deflator values must be positive")
    base = index[base_year]
    points = tuple((y, v * base / index[y]) for y, v in series.points)
    return AnnualSeries(points, series.unit)


def per_capita(series: AnnualSeries, population: AnnualSeries) -> AnnualSeries:
    """Divide a national aggregate by the population, pointwise."""
    index = dict(population.points)
    missing = [y for y, _ in series.points if y not in index]
    if missing:
        raise CoverageError(f"population does not cover year(s) {missing}")
    zeros = [y for y, v in population.points if v == 0]
    if zeros:
        raise DomainError(f"population is zero in year(s) {zeros}")
    if any(v < 0 for _, v in population.points):
        raise DomainError("population values must be positive")
    points = tuple((y, v / index[y]) for y, v in series.points)
    return AnnualSeries(points, series.unit)
