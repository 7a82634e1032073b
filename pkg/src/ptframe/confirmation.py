"""Degrees of confirmation from the four counts of a binary test.

Counts follow the usual 2x2 layout with evidence e1/e0 and hypothesis h1/h0::

              h1   h0
        e1     a    c
        e0     b    d

Two families of measures are provided. The channel measure b* rates the rule
e1 -> h1 as a test whose quality is set by the likelihood ratio. The
prediction measure c* rates it as a prediction and depends only on the
positive examples a and the counterexamples c. All measures are computed
exactly with ``fractions.Fraction``; undefined (0/0) cases raise
``UndefinedMeasureError``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

from scipy.optimize import brentq

from .errors import CountError, ParameterError, UndefinedMeasureError


@dataclass(frozen=True)
class ConfusionCounts:
    a: int  # e1, h1
    b: int  # e0, h1
    c: int  # e1, h0
    d: int  # e0, h0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool) or int(v) != v or v < 0:
                raise CountError(f"count {f.name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, f.name, int(v))

    def swapped(self) -> ConfusionCounts:
        """Counts with the consequent h1 <-> h0 exchanged."""
        return ConfusionCounts(self.c, self.d, self.a, self.b)

    def with_(self, **delta: int) -> ConfusionCounts:
        return ConfusionCounts(**{k: getattr(self, k) + delta.get(k, 0) for k in "abcd"})

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @classmethod
    def read_csv(cls, source) -> ConfusionCounts:
        """2x2 CSV with rows (e1, e0) and columns (h1, h0); one header row optional."""
        if isinstance(source, (str, Path)):
            with open(source, newline="") as fh:
                return cls.read_csv(io.StringIO(fh.read()))
        rows = [[c.strip() for c in r] for r in csv.reader(source) if r and any(c.strip() for c in r)]
        numeric = []
        for r in rows:
            cells = [c for c in r if c]
            try:
                numeric.append([int(c) for c in cells[-2:]])
            except ValueError:
                continue
        if len(numeric) != 2 or any(len(r) != 2 for r in numeric):
            raise CountError("counts CSV must hold a 2x2 table: rows e1, e0; columns h1, h0")
        (a, c), (b, d) = numeric
        return cls(a, b, c, d)


def _ratio(num: int, den: int, what: str) -> Fraction:
    if den == 0:
        raise UndefinedMeasureError(f"{what} is undefined (zero denominator)")
    return Fraction(num, den)


def channel_table(k: ConfusionCounts) -> dict[str, Fraction]:
    """P(e|h) for the four cells; each hypothesis needs at least one example."""
    if k.a + k.b == 0 or k.c + k.d == 0:
        raise CountError("each hypothesis row (a+b and c+d) needs at least one example")
    return {
        "P(e1|h1)": Fraction(k.a, k.a + k.b),
        "P(e0|h1)": Fraction(k.b, k.a + k.b),
        "P(e1|h0)": Fraction(k.c, k.c + k.d),
        "P(e0|h0)": Fraction(k.d, k.c + k.d),
    }


def likelihood_ratios(k: ConfusionCounts) -> tuple[float, float]:
    """(LR+, LR-) = (P(e1|h1)/P(e1|h0), P(e0|h0)/P(e0|h1)); ``inf`` for x/0."""
    t = channel_table(k)

    def lr(num, den, name):
        if den == 0:
            if num == 0:
                raise UndefinedMeasureError(f"{name} is 0/0")
            return math.inf
        return float(num / den)

    return lr(t["P(e1|h1)"], t["P(e1|h0)"], "LR+"), lr(t["P(e0|h0)"], t["P(e0|h1)"], "LR-")


def b1_star(k: ConfusionCounts) -> Fraction:
    """(ad - bc) / max(a(c+d), c(a+b)) = (LR+ - 1) / max(LR+, 1)."""
    channel_table(k)
    a, b, c, d = k.astuple()
    return _ratio(a * d - b * c, max(a * (c + d), c * (a + b)), "b1*")


def b0_star(k: ConfusionCounts) -> Fraction:
    """(LR- - 1) / max(LR-, 1) written in counts."""
    channel_table(k)
    a, b, c, d = k.astuple()
    return _ratio(a * d - b * c, max(d * (a + b), b * (c + d)), "b0*")


def b_star(k: ConfusionCounts) -> tuple[Fraction, Fraction]:
    """Channel confirmation (b1*, b0*) of e1 -> h1 and e0 -> h0."""
    return b1_star(k), b0_star(k)


def f_measure(k: ConfusionCounts) -> tuple[Fraction, Fraction]:
    """(F(e1 -> h1), F(h0 -> e0))."""
    a, b, c, d = k.astuple()
    f1 = _ratio(a * d - b * c, a * d + b * c + 2 * a * c, "F(e1->h1)")
    f0 = _ratio(a * d - b * c, a * d + b * c + 2 * d * c, "F(h0->e0)")
    return f1, f0


def c1_star(k: ConfusionCounts) -> Fraction:
    return _ratio(k.a - k.c, max(k.a, k.c), "c1*")


def c0_star(k: ConfusionCounts) -> Fraction:
    return _ratio(k.d - k.b, max(k.d, k.b), "c0*")


def c_star(k: ConfusionCounts) -> tuple[Fraction, Fraction]:
    """Prediction confirmation (c1*, c0*) = ((a-c)/max(a,c), (d-b)/max(d,b))."""
    return c1_star(k), c0_star(k)


def correct_rate(c: Fraction | float) -> Fraction | float:
    """Correct rate 1/(2 - c*) of a rule with nonnegative prediction confirmation.

    A negative c* must first be turned into a positive one for the opposite
    consequent (see ``ptframe.reasoning.syllogism_prediction``).
    """
    if not 0 <= c <= 1:
        raise ParameterError(f"correct rate needs c* in [0, 1], got {c}; flip the consequent first")
    if isinstance(c, Fraction):
        return 1 / (2 - c)
    return 1.0 / (2.0 - float(c))


@dataclass(frozen=True)
class SymmetryReport:
    b_star: Fraction
    b_star_swapped: Fraction
    c_star: Fraction
    c_star_swapped: Fraction

    @property
    def b_residual(self) -> float:
        return float(abs(self.b_star_swapped + self.b_star))

    @property
    def c_residual(self) -> float:
        return float(abs(self.c_star_swapped + self.c_star))


def symmetry_check(k: ConfusionCounts) -> SymmetryReport:
    """Consequence Symmetry: the measures of e1 -> h0 are minus those of e1 -> h1."""
    s = k.swapped()
    return SymmetryReport(b1_star(k), b1_star(s), c1_star(k), c1_star(s))


RAVEN_MEASURES = ("F", "b*", "c*", "LR+")


def _measure(name: str, k: ConfusionCounts) -> Fraction:
    if name == "F":
        return f_measure(k)[0]
    if name == "b*":
        return b1_star(k)
    if name == "c*":
        return c1_star(k)
    if name == "LR+":
        channel_table(k)
        return _ratio(k.a * (k.c + k.d), k.c * (k.a + k.b), "LR+")
    raise ParameterError(f"unknown measure {name!r}; choose from {RAVEN_MEASURES}")


@dataclass(frozen=True)
class Sensitivity:
    measure: str
    delta_a: Fraction
    delta_d: Fraction

    @property
    def a_dominates(self) -> bool:
        """True when one more positive example moves the measure more than one more d."""
        return self.delta_a > self.delta_d


def raven_sensitivity(k: ConfusionCounts, measures=RAVEN_MEASURES) -> list[Sensitivity]:
    """Change of each measure after one more a (black raven) or one more d (non-black non-raven)."""
    out = []
    for name in measures:
        base = _measure(name, k)
        out.append(Sensitivity(name, _measure(name, k.with_(a=1)) - base, _measure(name, k.with_(d=1)) - base))
    return out


def believable_part_from_posterior(p_h1: float, p_h1_given_e1: float) -> float:
    """Solve P(h1) / (P(h1) + b' P(h0)) = P(h1|e1) for the unbelievable part b' in [0, 1].

    Requires P(h1|e1) >= P(h1), i.e. evidence that does not count against h1.
    """
    p_h0 = 1.0 - p_h1
    if not (0 < p_h1 < 1) or not (p_h1 <= p_h1_given_e1 <= 1):
        raise ParameterError("need 0 < P(h1) < 1 and P(h1) <= P(h1|e1) <= 1")
    g = lambda b: p_h1 / (p_h1 + b * p_h0) - p_h1_given_e1
    if g(0.0) == 0.0:
        return 0.0
    if g(1.0) >= 0.0:
        return 1.0
    return brentq(g, 0.0, 1.0, xtol=1e-15, rtol=4 * 2.220446049250313e-16)


@dataclass(frozen=True)
class ConfirmationReport:
    counts: ConfusionCounts
    LR_plus: float | None
    LR_minus: float | None
    F1: float | None
    F0: float | None
    b1_star: float | None
    b0_star: float | None
    c1_star: float | None
    c0_star: float | None
    CR1: float | None
    CR0: float | None
    undefined: tuple[str, ...] = ()

    MEASURES = ("LR_plus", "LR_minus", "F1", "F0", "b1_star", "b0_star", "c1_star", "c0_star", "CR1", "CR0")

    def to_json(self) -> dict:
        out = {"counts": dict(zip("abcd", self.counts.astuple()))}
        for name in self.MEASURES:
            v = getattr(self, name)
            out[name] = "inf" if v == math.inf else v
        out["undefined"] = list(self.undefined)
        return out


def _cr(c: Fraction) -> Fraction:
    # for a negative c* the rule predicts the opposite consequent; its correct rate drops below 1/2
    return correct_rate(c) if c >= 0 else 1 - correct_rate(-c)


def confirmation_report(k: ConfusionCounts, strict: bool = False) -> ConfirmationReport:
    """Every measure that is defined for ``k``; others are ``None`` unless ``strict``."""
    values: dict[str, float | None] = {}
    undefined: list[str] = []

    def attempt(names, fn):
        try:
            results = fn()
        except (UndefinedMeasureError, CountError):
            if strict:
                raise
            for n in names:
                values[n] = None
                undefined.append(n)
            return
        for n, v in zip(names, results):
            values[n] = float(v)

    attempt(("LR_plus", "LR_minus"), lambda: likelihood_ratios(k))
    attempt(("F1",), lambda: (f_measure(k)[0],))
    attempt(("F0",), lambda: (f_measure(k)[1],))
    attempt(("b1_star",), lambda: (b1_star(k),))
    attempt(("b0_star",), lambda: (b0_star(k),))
    attempt(("c1_star", "CR1"), lambda: (c1_star(k), _cr(c1_star(k))))
    attempt(("c0_star", "CR0"), lambda: (c0_star(k), _cr(c0_star(k))))
    return ConfirmationReport(counts=k, undefined=tuple(undefined), **values)
