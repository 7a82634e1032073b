"""Small worked examples with known answers.

``run_fixture_checks`` evaluates each against its expected value; the CLI
exposes it as ``--paper-fixtures`` and it doubles as a smoke test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .confirmation import ConfusionCounts, c1_star, correct_rate
from .prob import Distribution, ShannonChannel, Universe, bayes_posterior
from .reasoning import implication_bound
from .semantic import (
    Crisp,
    Logistic,
    Tabulated,
    logical_probability,
    semantic_bayes_predict,
)
from .seminfo import semantic_info_point
from .thermo import boltzmann

# head counts of 10,000 people by age 0..99; ages 18..99 hold 7,000 of them
AGE_COUNTS = [167] * 12 + [166] * 6 + [100] * 10 + [84] * 24 + [83] * 48

# raven sample: a and c come from the worked example, b and d are chosen here
RAVEN_COUNTS = ConfusionCounts(a=6, b=2, c=1, d=11)


@dataclass(frozen=True)
class AdultExample:
    universe: Universe
    prior: Distribution
    adult: Crisp
    channel: ShannonChannel


def adult_example() -> AdultExample:
    """Population by age where 1,000 of the 7,000 adults were labeled "adult"."""
    universe = Universe.grid(np.arange(100))
    prior = Distribution.from_counts(universe, AGE_COUNTS)
    adult = Crisp.where(universe, lambda x: x >= 18)
    selected = np.zeros(100)
    selected[18:28] = 1.0  # everyone aged 18..27, exactly 1,000 people
    channel = ShannonChannel(universe, ("adult", "other"), np.vstack([selected, 1.0 - selected]))
    return AdultExample(universe, prior, adult, channel)


def info_example() -> tuple[Tabulated, Distribution]:
    """Three instances; the label is true at x1, mostly true at x2, false at x3."""
    universe = Universe.named(["x1", "x2", "x3"])
    prior = Distribution(universe, [0.15, 0.25, 0.6])
    return Tabulated(universe, [1.0, 0.8, 0.0]), prior


def age_universe(n: int = 100) -> Universe:
    return Universe.grid(np.arange(n))


def age_prior(universe: Universe, scale: float = 40.0) -> Distribution:
    """Population pyramid shrinking with age."""
    return Distribution(universe, np.exp(-universe.coords / scale), renormalize=True)


def elder_sampling(slope: float = 0.5, threshold: float = 65.0):
    """Sampling distribution of "elder" generated from a logistic truth function."""
    universe = age_universe()
    prior = age_prior(universe)
    truth = Logistic(universe, slope, threshold)
    return semantic_bayes_predict(truth, prior), prior, truth


@dataclass(frozen=True)
class FixtureCheck:
    name: str
    expected: float
    actual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        if self.tolerance == 0:
            return self.actual == self.expected
        return abs(self.actual - self.expected) <= self.tolerance


def run_fixture_checks(tolerance: float = 1e-9) -> list[FixtureCheck]:
    ex = adult_example()
    t_adult = logical_probability(ex.adult, ex.prior)
    p_adult = bayes_posterior(ex.prior, ex.channel.row("adult"))[0]
    t, prior = info_example()
    info = semantic_info_point(t, prior, "x2")
    c = c1_star(RAVEN_COUNTS)
    bound = implication_bound(Fraction("0.1"), Fraction("0.02"))
    b = boltzmann([0.0, 1.0], [1, 1], 1.0)
    return [
        FixtureCheck("adult logical probability", 0.7, t_adult, 0.0),
        FixtureCheck("adult statistical probability", 0.1, p_adult, 0.0),
        FixtureCheck("T(theta) of the three-point label", 0.35, logical_probability(t, prior), tolerance),
        FixtureCheck("semantic information at x2 (bits)", math.log2(0.8 / 0.35), info, tolerance),
        FixtureCheck("semantic information at x2 (2 d.p.)", 1.19, round(info, 2), 0.0),
        FixtureCheck("raven c1*", 5 / 6, float(c), tolerance),
        FixtureCheck("raven correct rate", 6 / 7, float(correct_rate(c)), tolerance),
        FixtureCheck("P(q|p)", 0.2, float(bound.conditional), 0.0),
        FixtureCheck("P(p => q)", 0.92, float(bound.implication), 0.0),
        FixtureCheck("two-state Boltzmann ground share", 1 / (1 + math.exp(-1)), b.mass[0], tolerance),
    ]
