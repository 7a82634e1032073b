"""Logical probability: truth functions, semantic channels, Bayes I and III.

A truth function T(theta|x) maps every point of a universe to [0, 1]. Its
prior-weighted average is the logical probability T(theta). Unlike the rows
of a Shannon channel, the truth functions of a semantic channel carry no
column constraint: at a single x several labels may all be fully true.
"""

from __future__ import annotations

import math
from collections import namedtuple
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar

import numpy as np
from scipy.special import expit

from .errors import (
    ConditioningError,
    DimensionError,
    EmptyFuzzySetError,
    ParameterError,
    SupportError,
)
from .prob import Distribution, Point, Universe, _frozen, fsum_dot, same_universe

_FORMS: dict[str, type[TruthFunction]] = {}


def _register(cls):
    _FORMS[cls.form] = cls
    return cls


def _mask(universe: Universe, members) -> np.ndarray:
    """Boolean membership mask from a mask array or an iterable of point ids."""
    arr = np.asarray(members) if not isinstance(members, (set, frozenset)) else None
    if arr is not None and arr.dtype == bool:
        if arr.shape != (len(universe),):
            raise DimensionError("membership mask does not match the universe")
        mask = arr.copy()
        mask.setflags(write=False)
        return mask
    mask = np.zeros(len(universe), dtype=bool)
    for x in members:
        mask[universe.index(x)] = True
    mask.setflags(write=False)
    return mask


class TruthFunction:
    """Base class of all truth-function forms.

    Subclasses are frozen dataclasses with a ``universe`` field and implement
    ``_evaluate`` returning the values over the whole universe.
    """

    form: ClassVar[str]
    #: whether the form promises max value 1 on the universe
    longitudinal: ClassVar[bool] = True
    universe: Universe

    @cached_property
    def values(self) -> np.ndarray:
        v = np.asarray(self._evaluate(), dtype=float)
        if v.shape != (len(self.universe),):
            raise DimensionError("truth values do not match the universe")
        if not np.all(np.isfinite(v)) or np.any(v < 0) or np.any(v > 1):
            raise ParameterError(f"{self.form} truth values must lie in [0, 1]")
        return _frozen(v)

    def _evaluate(self) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def __call__(self, x: Point) -> float:
        return float(self.values[self.universe.index(x)])

    def params(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError

    def to_json(self, include_universe: bool = True) -> dict:
        out = {"form": self.form, "params": self.params()}
        if include_universe:
            out["universe"] = self.universe.to_json()
        return out

    def scaled(self, factor: float) -> Tabulated:
        """Tabulated copy multiplied by ``factor`` in (0, 1]."""
        if not 0 < factor <= 1:
            raise ParameterError("scale factor must lie in (0, 1]")
        return Tabulated(self.universe, self.values * factor)


@_register
@dataclass(frozen=True, eq=False)
class Tabulated(TruthFunction):
    universe: Universe
    table: np.ndarray

    form: ClassVar[str] = "tabulated"
    longitudinal: ClassVar[bool] = False

    def __post_init__(self):
        object.__setattr__(self, "table", _frozen(self.table))

    def _evaluate(self):
        return self.table

    def params(self):
        return {"values": [float(v) for v in self.table]}


def _coords_1d_or_vec(universe: Universe) -> np.ndarray:
    if not universe.has_coords:
        raise DimensionError("this truth form needs a universe with numeric coordinates")
    c = universe.coords
    return c if c.ndim == 2 else c[:, None]


@_register
@dataclass(frozen=True, eq=False)
class Gaussian(TruthFunction):
    """exp(-|x - center|^2 / (2 sigma^2)); ``center`` may be a vector."""

    universe: Universe
    center: float | np.ndarray
    sigma: float

    form: ClassVar[str] = "gaussian"

    def __post_init__(self):
        if not self.sigma > 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma!r}")

    def _evaluate(self):
        c = _coords_1d_or_vec(self.universe)
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        if center.shape != (c.shape[1],):
            raise DimensionError("gaussian center does not match the coordinate dimension")
        sq = np.sum((c - center) ** 2, axis=1)
        return np.exp(-sq / (2.0 * self.sigma**2))

    def params(self):
        center = np.asarray(self.center, dtype=float)
        return {
            "center": float(center) if center.ndim == 0 else [float(v) for v in center],
            "sigma": float(self.sigma),
        }


@_register
@dataclass(frozen=True, eq=False)
class MVGaussian(TruthFunction):
    """Product of independent per-axis Gaussian truth functions."""

    universe: Universe
    centers: np.ndarray
    sigmas: np.ndarray

    form: ClassVar[str] = "mvgaussian"

    def __post_init__(self):
        centers = _frozen(np.atleast_1d(self.centers))
        sigmas = _frozen(np.atleast_1d(self.sigmas))
        if centers.shape != sigmas.shape or centers.ndim != 1:
            raise DimensionError("centers and sigmas must be equal-length vectors")
        if np.any(sigmas <= 0):
            raise ParameterError("every sigma must be positive")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "sigmas", sigmas)

    def _evaluate(self):
        c = _coords_1d_or_vec(self.universe)
        if c.shape[1] != self.centers.shape[0]:
            raise DimensionError("mvgaussian centers do not match the coordinate dimension")
        z = (c - self.centers) ** 2 / (2.0 * self.sigmas**2)
        return np.exp(-z.sum(axis=1))

    def params(self):
        return {"centers": [float(v) for v in self.centers], "sigmas": [float(v) for v in self.sigmas]}


@_register
@dataclass(frozen=True, eq=False)
class Logistic(TruthFunction):
    """1 / (1 + exp(-slope (x - threshold))).

    Reaches 1 only asymptotically, so on a finite grid its maximum may fall
    short of 1.
    """

    universe: Universe
    slope: float
    threshold: float

    form: ClassVar[str] = "logistic"
    longitudinal: ClassVar[bool] = False

    def _evaluate(self):
        c = _coords_1d_or_vec(self.universe)
        if c.shape[1] != 1:
            raise DimensionError("logistic truth needs scalar coordinates")
        return expit(self.slope * (c[:, 0] - self.threshold))

    def params(self):
        return {"slope": float(self.slope), "threshold": float(self.threshold)}


@_register
@dataclass(frozen=True, eq=False)
class BelievablePart(TruthFunction):
    """disbelief + (1 - disbelief) * indicator(x in members).

    ``disbelief`` is the proportion of the unbelievable (tautological) part,
    stored directly in [0, 1].
    """

    universe: Universe
    disbelief: float
    members: np.ndarray

    form: ClassVar[str] = "believable"

    def __post_init__(self):
        if not 0 <= self.disbelief <= 1:
            raise ParameterError("disbelief must lie in [0, 1]")
        object.__setattr__(self, "members", _mask(self.universe, self.members))

    def _evaluate(self):
        return self.disbelief + (1.0 - self.disbelief) * self.members

    def params(self):
        return {
            "disbelief": float(self.disbelief),
            "members": [self.universe.ids[i] for i in np.flatnonzero(self.members)],
        }


@_register
@dataclass(frozen=True, eq=False)
class Crisp(TruthFunction):
    """Characteristic function of a crisp subset."""

    universe: Universe
    members: np.ndarray

    form: ClassVar[str] = "crisp"
    longitudinal: ClassVar[bool] = False

    def __post_init__(self):
        object.__setattr__(self, "members", _mask(self.universe, self.members))

    @classmethod
    def where(cls, universe: Universe, predicate) -> Crisp:
        """Crisp set of points whose coordinate satisfies ``predicate``."""
        c = universe.coords
        if c is None:
            raise DimensionError("Crisp.where needs coordinates")
        return cls(universe, np.array([bool(predicate(v)) for v in c]))

    def _evaluate(self):
        return self.members.astype(float)

    def params(self):
        return {"members": [self.universe.ids[i] for i in np.flatnonzero(self.members)]}


def tautology(universe: Universe) -> Tabulated:
    return Tabulated(universe, np.ones(len(universe)))


def truth_from_json(data: Mapping, universe: Universe | None = None) -> TruthFunction:
    """Build a truth function from its JSON object.

    The universe comes from ``data["universe"]`` when present, otherwise from
    the ``universe`` argument (used for ``"universe_ref"`` objects).
    """
    form = data.get("form")
    if form not in _FORMS:
        raise ParameterError(f"unknown truth form {form!r}; expected one of {sorted(_FORMS)}")
    if "universe" in data:
        universe = Universe.from_json(data["universe"])
    if universe is None:
        raise DimensionError("truth function JSON needs a universe (inline or by reference)")
    p = dict(data.get("params", {}))
    try:
        if form == "tabulated":
            t = Tabulated(universe, p["values"])
        elif form == "gaussian":
            t = Gaussian(universe, p["center"], float(p["sigma"]))
        elif form == "mvgaussian":
            t = MVGaussian(universe, p["centers"], p["sigmas"])
        elif form == "logistic":
            t = Logistic(universe, float(p["slope"]), float(p["threshold"]))
        elif form == "believable":
            t = BelievablePart(universe, float(p["disbelief"]), p["members"])
        else:
            t = Crisp(universe, p["members"])
    except KeyError as exc:
        raise ParameterError(f"{form} truth function is missing parameter {exc.args[0]!r}") from None
    _ = t.values  # validate eagerly
    return t


@dataclass(frozen=True, eq=False)
class SemanticChannel:
    """Ordered collection of truth functions over one universe."""

    labels: tuple[str, ...]
    truths: tuple[TruthFunction, ...]

    def __post_init__(self):
        labels = tuple(str(y) for y in self.labels)
        truths = tuple(self.truths)
        if not truths or len(labels) != len(truths):
            raise DimensionError("a semantic channel needs one truth function per label")
        if len(set(labels)) != len(labels):
            raise DimensionError("labels must be distinct")
        for t in truths[1:]:
            same_universe(truths[0].universe, t.universe, "truth functions")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "truths", truths)

    @classmethod
    def from_mapping(cls, truths: Mapping[str, TruthFunction]) -> SemanticChannel:
        return cls(tuple(truths), tuple(truths.values()))

    @property
    def universe(self) -> Universe:
        return self.truths[0].universe

    @property
    def values(self) -> np.ndarray:
        return np.array([t.values for t in self.truths])

    def __len__(self) -> int:
        return len(self.truths)

    def __getitem__(self, label: Point) -> TruthFunction:
        if isinstance(label, (int, np.integer)):
            return self.truths[label]
        try:
            return self.truths[self.labels.index(str(label))]
        except ValueError:
            raise DimensionError(f"unknown label {label!r}") from None

    def to_json(self) -> dict:
        return {
            "universe": self.universe.to_json(),
            "labels": list(self.labels),
            "truths": [t.to_json(include_universe=False) for t in self.truths],
        }

    @classmethod
    def from_json(cls, data: Mapping, universe: Universe | None = None) -> SemanticChannel:
        if "universe" in data:
            universe = Universe.from_json(data["universe"])
        truths = [truth_from_json(t, universe) for t in data["truths"]]
        labels = data.get("labels") or [f"y{j + 1}" for j in range(len(truths))]
        return cls(tuple(labels), tuple(truths))


def eval_truth(t: TruthFunction, x: Point) -> float:
    return t(x)


def logical_probability(t: TruthFunction, prior: Distribution) -> float:
    """T(theta) = sum_i P(x_i) T(theta|x_i)."""
    same_universe(t.universe, prior.universe, "truth function and prior")
    return fsum_dot(prior.mass, t.values)


BayesIResult = namedtuple("BayesIResult", ["tB_given_A", "tA"])


def bayes_theorem_I(tA_given_B: float, tA_given_Bc: float, tB: float) -> BayesIResult:
    """Bayes' theorem between two sets, expressed with logical probabilities."""
    for name, v in (("T(A|B)", tA_given_B), ("T(A|B^c)", tA_given_Bc), ("T(B)", tB)):
        if not 0 <= v <= 1:
            raise ParameterError(f"{name} must lie in [0, 1], got {v!r}")
    tA = tA_given_B * tB + tA_given_Bc * (1 - tB)
    if tA <= 0:
        raise ConditioningError("T(A) = 0: cannot condition on an impossible set")
    return BayesIResult(min(1.0, tA_given_B * tB / tA), tA)


def semantic_bayes_predict(t: TruthFunction, prior: Distribution) -> Distribution:
    """P(x|theta) = P(x) T(theta|x) / T(theta)."""
    tl = logical_probability(t, prior)
    if tl <= 0:
        raise EmptyFuzzySetError("truth function has zero logical probability under the prior")
    return Distribution(prior.universe, prior.mass * t.values / tl, renormalize=True)


def truth_from_likelihood(likelihood: Distribution, prior: Distribution) -> tuple[Tabulated, float]:
    """Invert Bayes III: longitudinally normalized truth function and T(theta).

    Points where both the prior and the likelihood vanish get truth 0 and are
    left out of the maximum.
    """
    same_universe(likelihood.universe, prior.universe, "likelihood and prior")
    L, P = likelihood.mass, prior.mass
    if np.any((P == 0) & (L > 0)):
        raise SupportError("likelihood has mass on a point with zero prior")
    ratio = np.zeros_like(L)
    pos = P > 0
    ratio[pos] = L[pos] / P[pos]
    top = float(ratio.max())
    if not top > 0 or not math.isfinite(top):
        raise SupportError("likelihood-to-prior ratio has no positive finite maximum")
    values = ratio / top
    # guard the peak against 1 + ulp after division
    values = np.minimum(values, 1.0)
    return Tabulated(prior.universe, values), 1.0 / top


def plausibility(label_prior: Distribution, compatible: Iterable[str], target: str) -> float:
    """Sum of the statistical probabilities of labels compatible with ``target``."""
    compatible = [str(y) for y in compatible]
    if str(target) not in compatible:
        raise ParameterError(f"target label {target!r} must be in the compatible set")
    return math.fsum(label_prior[y] for y in dict.fromkeys(compatible))

