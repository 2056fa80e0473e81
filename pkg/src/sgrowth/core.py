"""Domain types and reference constants shared by every other module.

All records are immutable value objects; they validate their invariants on
construction and are safe to share between threads.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

# Display conversion only: the internal working-time unit is the fraction of
# the annual maximum (16 h/day, 6 days/week).
HOURS_PER_WEEK_MAX = 96.0

UNIT_TAGS = ("currency-flow", "currency-stock", "years", "dimensionless-fraction")


class DomainError(ValueError):
    """An argument violates a documented precondition."""


class DataFormatError(ValueError):
    """A series file is malformed; the message carries the offending line."""


class CoverageError(ValueError):
    """A companion series does not cover the year range it must cover."""


@dataclass(frozen=True)
class ModelConstants:
    """Universal constants of the growth framework.

    E and G are the physical lifetimes (years) of human capacity and of
    physical capital; they set the growth parameter and the capital lag of
    every S-curve.  The remaining fields pin the industrial-evolution and
    life-expectancy curves.  Defaults are the reference values.
    """

    E: float = 62.0          # years, lifetime of human capacity
    G: float = 25.0          # years, lifetime of physical capital
    eps_bar: float = 1.0     # maximum annual working time, fixed unit
    y0: float = 900.0        # US$ of 1991 p.a. per capita, agricultural GDP
    a_bar: float = 75000.0   # US$ of 1991 p.a. per capita, asymptotic GDP
    T: float = 2040.0        # calendar year, halftime of the industrial evolution
    L0: float = 30.0         # years, pre-industrial life expectancy
    L_bar: float = 118.0     # years, maximum unisex life expectancy
    T_L: float = 1981.0      # calendar year, halftime of life expectancy

    def __post_init__(self):
        if not (self.E > self.G > 0):
            raise DomainError(f"require E > G > 0, got E={self.E}, G={self.G}")
        if self.eps_bar != 1.0:
            raise DomainError("eps_bar is the unit of working time and is fixed at 1.0")
        if not (self.a_bar > self.y0 > 0):
            raise DomainError(f"require a_bar > y0 > 0, got a_bar={self.a_bar}, y0={self.y0}")
        if not self.T_L < self.T:
            raise DomainError("life-expectancy halftime must precede the evolution halftime")
        if not (self.L_bar > self.L0 > 0):
            raise DomainError("require L_bar > L0 > 0")
        if abs((self.T - self.T_L) - self.L_bar / 2.0) > 0.5:
            raise DomainError(
                "halftime gap T - T_L must equal L_bar/2 within 0.5 yr, "
                f"got {self.T - self.T_L} vs {self.L_bar / 2.0}"
            )


DEFAULT_CONSTANTS = ModelConstants()


def default_constants() -> ModelConstants:
    """Return the reference constants."""
    return DEFAULT_CONSTANTS


def hours_per_week(w) -> float:
    """Convert a working-time fraction to hours per week (display only)."""
    return w * HOURS_PER_WEEK_MAX


@dataclass(frozen=True)
class NationParams:
    """Recovery parameters of one nation.

    beta is the initial growth rate of the recovery; mu_bar and mu_e are the
    saturated and entrance values of the capital function.  nu_bar defaults
    to 4/(eps_bar*E) when unset; mu_w is the employed share of the capital
    coefficient used for demand-side capacity estimates.
    """

    name: str
    tau: float               # calendar year, halftime of recovery
    mu_bar: float            # gross fixed capital share
    mu_e: float              # entrance value of the capital function
    beta: float              # per year, initial growth rate of recovery
    nu_bar: float | None = None
    mu_w: float = 0.15

    def __post_init__(self):
        if not (0 < self.mu_e < self.mu_bar < 1):
            raise DomainError(
                f"require 0 < mu_e < mu_bar < 1, got mu_e={self.mu_e}, mu_bar={self.mu_bar}"
            )
        if not self.beta > 0:
            raise DomainError(f"require beta > 0, got {self.beta}")
        if not (1800 <= self.tau <= 2100):
            raise DomainError(f"halftime tau={self.tau} outside [1800, 2100]")
        if self.nu_bar is not None and self.nu_bar <= 0:
            raise DomainError(f"require nu_bar > 0, got {self.nu_bar}")
        if not (0 < self.mu_w < 1):
            raise DomainError(f"require 0 < mu_w < 1, got {self.mu_w}")

    def nu_bar_or_default(self, c: ModelConstants = DEFAULT_CONSTANTS) -> float:
        return self.nu_bar if self.nu_bar is not None else 4.0 / (c.eps_bar * c.E)


# Reference national parameters (tau, mu_bar, mu_e, beta).
NATIONS: dict[str, NationParams] = {
    n.name: n
    for n in (
        NationParams("usa", 1965, 0.18, 0.08, 0.05),
        NationParams("germany", 1970, 0.25, 0.08, 0.09),
        NationParams("japan", 1971, 0.26, 0.08, 0.09),
        NationParams("korea", 2010, 0.27, 0.09, 0.08),
        NationParams("china", 2040, 0.34, 0.11, 0.10),
    )
}


def nation(name: str) -> NationParams:
    """Look up a built-in nation by (case-insensitive) name."""
    try:
        return NATIONS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown nation {name!r}; known: {', '.join(sorted(NATIONS))}") from None


@dataclass(frozen=True)
class SCurve:
    """Parameters of a simple S-function: floor + amplitude/(1 + exp(g*(halftime - t)))."""

    amplitude: float
    halftime: float          # calendar year
    growth_param: float      # per year
    floor: float = 0.0

    def __post_init__(self):
        if not self.amplitude > 0:
            raise DomainError(f"require amplitude > 0, got {self.amplitude}")
        if not self.growth_param > 0:
            raise DomainError(f"require growth_param > 0, got {self.growth_param}")


@dataclass(frozen=True)
class RecoveryCurve:
    """Parameters of the two-term recovery S-function.

    The (a_bar, T, E) triple fixes the long-term envelope; (beta, tau) are the
    national recovery rate and halftime.  A beta at or below 1/E means the
    recovery is no faster than the envelope itself; that is flagged with a
    warning rather than rejected, since measured national data may produce it.
    """

    a_bar: float
    T: float
    E: float
    beta: float
    tau: float

    def __post_init__(self):
        if not self.a_bar > 0:
            raise DomainError(f"require a_bar > 0, got {self.a_bar}")
        if not self.E > 0:
            raise DomainError(f"require E > 0, got {self.E}")
        if not self.beta > 0:
            raise DomainError(f"require beta > 0, got {self.beta}")
        if self.beta <= 1.0 / self.E:
            warnings.warn(
                f"recovery rate beta={self.beta} is not faster than the envelope "
                f"rate 1/E={1.0 / self.E:.5f}; the curve never converges from below",
                stacklevel=2,
            )

    @classmethod
    def from_nation(cls, n: NationParams, c: ModelConstants = DEFAULT_CONSTANTS) -> "RecoveryCurve":
        return cls(a_bar=c.a_bar, T=c.T, E=c.E, beta=n.beta, tau=n.tau)


@dataclass(frozen=True)
class AnnualSeries:
    """A time-indexed sequence of annual values with a unit tag.

    The single data carrier for ingestion, fitting, and plotting.  Years are
    integers, strictly increasing; values are finite reals.
    """

    points: tuple[tuple[int, float], ...]
    unit: str = "dimensionless-fraction"

    def __post_init__(self):
        if self.unit not in UNIT_TAGS:
            raise DomainError(f"unknown unit tag {self.unit!r}; expected one of {UNIT_TAGS}")
        pts = tuple((int(y), float(v)) for y, v in self.points)
        object.__setattr__(self, "points", pts)
        prev = None
        for y, v in pts:
            if prev is not None and y <= prev:
                raise DomainError(f"years must be strictly increasing; {y} follows {prev}")
            if not math.isfinite(v):
                raise DomainError(f"non-finite value {v} at year {y}")
            prev = y

    @classmethod
    def from_arrays(cls, years, values, unit: str = "dimensionless-fraction") -> "AnnualSeries":
        return cls(tuple(zip((int(y) for y in years), (float(v) for v in values))), unit)

    @property
    def years(self) -> np.ndarray:
        return np.array([y for y, _ in self.points], dtype=float)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points], dtype=float)

    def value_at(self, year: int) -> float:
        for y, v in self.points:
            if y == year:
                return v
        raise KeyError(f"year {year} not in series")

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class FitReport:
    """Result of a parameter-estimation run."""

    params: dict[str, float]
    rss: float
    n_points: int
    converged: bool
    iterations: int
    message: str = ""

    def __post_init__(self):
        if self.rss < 0:
            raise DomainError(f"rss must be non-negative, got {self.rss}")
