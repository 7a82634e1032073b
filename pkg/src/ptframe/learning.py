"""Learning truth functions from samples.

* ``empirical_distributions`` turns a labeled sample into relative frequencies.
* ``match_truth_functions`` / ``truth_from_sampling`` give the nonparametric
  optimum: each truth function is its transition probability function (or its
  likelihood-to-prior ratio) rescaled to peak at 1.
* ``fit_parametric_truth`` finds the logistic or Gaussian truth function that
  maximizes the generalized KL information of a sampling distribution.
* ``classify`` picks the label conveying the most semantic information.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import logsumexp

from .errors import (
    DimensionError,
    ParameterError,
    UnclassifiableError,
    UnusedLabelError,
)
from .prob import Distribution, Point, ShannonChannel, Universe, same_universe
from .semantic import (
    Gaussian,
    Logistic,
    SemanticChannel,
    Tabulated,
    TruthFunction,
    truth_from_likelihood,
)
from .seminfo import semantic_info_point

LN2 = math.log(2.0)


@dataclass(frozen=True)
class LabeledSample:
    """Examples (x, y) with x in ``universe`` and y in ``labels``."""

    universe: Universe
    labels: tuple[str, ...]
    examples: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.examples:
            raise DimensionError("a labeled sample needs at least one example")
        m, n = len(self.universe), len(self.labels)
        for i, j in self.examples:
            if not (0 <= i < m and 0 <= j < n):
                raise DimensionError(f"example ({i}, {j}) is outside the universe or label set")

    @classmethod
    def from_pairs(
        cls,
        universe: Universe,
        pairs: Iterable[tuple[Point, str]],
        labels: Sequence[str] | None = None,
    ) -> LabeledSample:
        pairs = list(pairs)
        if labels is None:
            labels = list(dict.fromkeys(str(y) for _, y in pairs))
        labels = tuple(str(y) for y in labels)
        index = {y: j for j, y in enumerate(labels)}
        try:
            examples = tuple((universe.index(x), index[str(y)]) for x, y in pairs)
        except KeyError as exc:
            raise DimensionError(f"label {exc.args[0]!r} is not in the label set") from None
        return cls(universe, labels, examples)

    @classmethod
    def from_counts(cls, universe: Universe, labels: Sequence[str], counts) -> LabeledSample:
        """Sample with ``counts[j][i]`` copies of example (x_i, y_j)."""
        counts = np.asarray(counts, dtype=int)
        if counts.shape != (len(labels), len(universe)):
            raise DimensionError("counts must have shape (labels, universe)")
        examples = tuple(
            (i, j) for j in range(counts.shape[0]) for i in range(counts.shape[1]) for _ in range(counts[j, i])
        )
        return cls(universe, tuple(labels), examples)

    @classmethod
    def read_csv(cls, source, universe: Universe | None = None) -> LabeledSample:
        """Read ``x_id,label`` rows (header required) from a path or text stream.

        Without an explicit universe, ids that all parse as numbers become a
        numeric grid sorted by value; otherwise ids keep first-seen order.
        """
        if isinstance(source, (str, Path)):
            with open(source, newline="") as fh:
                return cls.read_csv(io.StringIO(fh.read()), universe)
        reader = csv.reader(source)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["x_id", "label"] or len(header) != 2:
            raise DimensionError("sample CSV must start with the header 'x_id,label'")
        pairs = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise DimensionError(f"sample CSV line {lineno}: expected 2 fields, got {len(row)}")
            pairs.append((row[0].strip(), row[1].strip()))
        if not pairs:
            raise DimensionError("sample CSV has no examples")
        if universe is None:
            ids = list(dict.fromkeys(x for x, _ in pairs))
            try:
                values = [float(x) for x in ids]
            except ValueError:
                universe = Universe.named(ids)
            else:
                order = np.argsort(values, kind="stable")
                universe = Universe([ids[k] for k in order], np.array(values)[order])
        return cls.from_pairs(universe, pairs)

    def counts(self) -> np.ndarray:
        c = np.zeros((len(self.labels), len(self.universe)))
        for i, j in self.examples:
            c[j, i] += 1
        return c


@dataclass(frozen=True)
class EmpiricalTables:
    prior: Distribution
    posteriors: dict[str, Distribution]
    label_prior: Distribution
    channel: ShannonChannel


def empirical_distributions(sample: LabeledSample) -> EmpiricalTables:
    """Relative frequencies P(x), P(x|y_j), P(y), and P(y|x).

    No smoothing is applied. The channel is undefined (NaN) on instances that
    never occur in the sample. A label absent from the sample has no posterior.
    """
    c = sample.counts()
    n = c.sum()
    per_x = c.sum(axis=0)
    per_y = c.sum(axis=1)
    prior = Distribution(sample.universe, per_x / n, renormalize=True)
    label_prior = Distribution(Universe.named(sample.labels), per_y / n, renormalize=True)
    posteriors = {
        y: Distribution(sample.universe, c[j] / per_y[j], renormalize=True)
        for j, y in enumerate(sample.labels)
        if per_y[j] > 0
    }
    with np.errstate(invalid="ignore", divide="ignore"):
        rows = np.where(per_x > 0, c / per_x, np.nan)
    return EmpiricalTables(prior, posteriors, label_prior, ShannonChannel(sample.universe, sample.labels, rows))


def match_truth_functions(channel: ShannonChannel, undefined: float = 0.0) -> SemanticChannel:
    """Semantic channel matched to a Shannon channel: T*(theta_j|x) = P(y_j|x) / max P(y_j|x).

    Instances where the channel is undefined get truth value ``undefined``.
    """
    truths = []
    for y, row in zip(channel.labels, channel.rows):
        top = np.nanmax(row) if not np.all(np.isnan(row)) else 0.0
        if not top > 0:
            raise UnusedLabelError(f"label {y!r} has an all-zero transition probability function")
        values = np.where(np.isnan(row), undefined, row / top)
        truths.append(Tabulated(channel.universe, np.minimum(values, 1.0)))
    return SemanticChannel(channel.labels, tuple(truths))


def truth_from_sampling(posterior: Distribution, prior: Distribution) -> Tabulated:
    """Optimized truth function from a sampling distribution P(x|y_j) and P(x)."""
    return truth_from_likelihood(posterior, prior)[0]


# --- parametric fitting -------------------------------------------------------------------------


@dataclass(frozen=True)
class ParametricFamily:
    """A two-parameter truth-function family with box bounds.

    ``form`` is ``"logistic"`` (slope, threshold) or ``"gaussian"``
    (center, sigma).
    """

    form: str
    bounds: tuple[tuple[float, float], tuple[float, float]]
    grid: int = 32

    def __post_init__(self):
        if self.form not in ("logistic", "gaussian"):
            raise ParameterError(f"family must be 'logistic' or 'gaussian', got {self.form!r}")
        b = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if len(b) != 2 or any(not (math.isfinite(lo) and math.isfinite(hi) and lo < hi) for lo, hi in b):
            raise ParameterError("bounds must be two finite (low, high) pairs with low < high")
        if self.form == "gaussian" and b[1][0] <= 0:
            raise ParameterError("gaussian sigma bounds must be positive")
        if self.grid < 2:
            raise ParameterError("grid needs at least 2 points per axis")
        object.__setattr__(self, "bounds", b)

    @property
    def param_names(self) -> tuple[str, str]:
        return ("slope", "threshold") if self.form == "logistic" else ("center", "sigma")

    @classmethod
    def default(cls, form: str, universe: Universe, grid: int = 32) -> ParametricFamily:
        """Bounds derived from the span and spacing of the universe's coordinates."""
        x = _scalar_coords(universe)
        lo, hi = float(x.min()), float(x.max())
        span = hi - lo if hi > lo else 1.0
        if form == "logistic":
            u = 200.0 / span
            return cls(form, ((-u, u), (lo, hi)), grid)
        gaps = np.diff(np.unique(x))
        step = float(gaps.min()) if gaps.size else 1.0
        return cls(form, ((lo, hi), (step / 4.0, span)), grid)

    def make(self, universe: Universe, params: Sequence[float]) -> TruthFunction:
        a, b = (float(p) for p in params)
        if self.form == "logistic":
            return Logistic(universe, a, b)
        return Gaussian(universe, a, b)


def _scalar_coords(universe: Universe) -> np.ndarray:
    if universe.coords is None or universe.coords.ndim != 1:
        raise DimensionError("parametric truth fitting needs scalar numeric coordinates")
    return universe.coords


def _log_truth(form: str, params: np.ndarray, x: np.ndarray) -> np.ndarray:
    """log T(theta|x) for a batch of parameter pairs, shape (K, m)."""
    a = params[:, :1]
    b = params[:, 1:]
    if form == "logistic":
        return -np.logaddexp(0.0, -a * (x - b))
    return -((x - a) ** 2) / (2.0 * b**2)


def _grad_log_truth(form: str, params: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = params[:, :1]
    b = params[:, 1:]
    if form == "logistic":
        one_minus_t = 1.0 / (1.0 + np.exp(a * (x - b)))
        return one_minus_t * (x - b), -one_minus_t * a
    return (x - a) / b**2, (x - a) ** 2 / b**3


def semantic_objective(
    family: ParametricFamily, params, sampling: Distribution, prior: Distribution
) -> np.ndarray | float:
    """Generalized KL information (bits) of the family at ``params``.

    ``params`` is one pair or an array of pairs with shape (K, 2). T(theta) is
    recomputed from the prior for every candidate.
    """
    same_universe(sampling.universe, prior.universe, "sampling and prior")
    x = _scalar_coords(prior.universe)
    p = np.atleast_2d(np.asarray(params, dtype=float))
    logt = _log_truth(family.form, p, x)
    used_prior = prior.mass > 0
    log_tl = logsumexp(logt[:, used_prior] + np.log(prior.mass[used_prior]), axis=1)
    used = sampling.mass > 0
    value = (logt[:, used] @ sampling.mass[used] - log_tl) / LN2
    return float(value[0]) if np.ndim(params) == 1 else value


def semantic_objective_grad(
    family: ParametricFamily, params, sampling: Distribution, prior: Distribution
) -> np.ndarray:
    """Analytic gradient of ``semantic_objective`` with respect to both parameters."""
    x = _scalar_coords(prior.universe)
    p = np.atleast_2d(np.asarray(params, dtype=float))
    logt = _log_truth(family.form, p, x)[0]
    da, db = (g[0] for g in _grad_log_truth(family.form, p, x))
    # weights of the semantic Bayes prediction P(x|theta)
    with np.errstate(divide="ignore"):
        lw = logt + np.log(prior.mass)
    w = np.exp(lw - logsumexp(lw))
    diff = sampling.mass - w
    return np.array([diff @ da, diff @ db]) / LN2


@dataclass(frozen=True)
class FitResult:
    family: str
    params: dict[str, float]
    objective: float
    trace: tuple[float, ...]
    iterations: int
    at_bound: bool = False
    uniform_prior: bool = False
    truth: TruthFunction | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "objective_bits": self.objective,
            "iterations": self.iterations,
            "at_bound": self.at_bound,
            "uniform_prior": self.uniform_prior,
            "trace": list(self.trace),
        }


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def fit_parametric_truth(
    sampling: Distribution,
    prior: Distribution | None,
    family: ParametricFamily,
    *,
    uniform_prior: bool = False,
    method: str = "golden",
    max_cycles: int = 2000,
) -> FitResult:
    """Maximize sum_i P(x_i|y_j) log2[T(theta|x_i) / T(theta)] over the family.

    A ``family.grid`` x ``family.grid`` grid over the bounds picks the start;
    coordinate-wise golden-section search refines it (``method="golden"``),
    or L-BFGS-B with the analytic gradient does (``method="gradient"``).
    With ``uniform_prior`` (or ``prior=None``) the prior is taken as flat,
    for the case where only P(y|x) is known.
    """
    if prior is None or uniform_prior:
        prior = Distribution.uniform(sampling.universe)
        uniform_prior = True
    same_universe(sampling.universe, prior.universe, "sampling and prior")
    (lo0, hi0), (lo1, hi1) = family.bounds
    lows = np.array([lo0, lo1])
    highs = np.array([hi0, hi1])

    g0 = np.linspace(lo0, hi0, family.grid)
    g1 = np.linspace(lo1, hi1, family.grid)
    cand = np.array([(a, b) for a in g0 for b in g1])
    scores = semantic_objective(family, cand, sampling, prior)
    k = int(np.argmax(scores))  # first maximum in grid order
    best = cand[k].copy()
    fbest = float(scores[k])
    trace = [fbest]

    def f(p):
        return float(semantic_objective(family, np.asarray(p), sampling, prior))

    cycles = 0
    if method == "golden":
        width = (highs - lows) / (family.grid - 1)
        floor = 1e-12 * (highs - lows)
        while cycles < max_cycles:
            cycles += 1
            start = fbest
            origin = best.copy()
            for axis in range(2):
                lo = max(lows[axis], best[axis] - width[axis])
                hi = min(highs[axis], best[axis] + width[axis])

                def along(v, axis=axis, base=best):
                    p = base.copy()
                    p[axis] = v
                    return f(p)

                v, fv = _golden_max(along, lo, hi, floor[axis])
                step = abs(v - best[axis])
                if fv > fbest:
                    best[axis], fbest = v, fv
                edge = min(v - lo, hi - v) < 4 * floor[axis]
                boxed = (lo <= lows[axis] and v - lo < 4 * floor[axis]) or (
                    hi >= highs[axis] and hi - v < 4 * floor[axis]
                )
                if edge and not boxed:
                    width[axis] = min(2 * width[axis], highs[axis] - lows[axis])
                else:
                    width[axis] = max(4 * step, width[axis] / 8, floor[axis])
            # pattern move along the net displacement of this cycle, for ridges
            direction = best - origin
            if np.any(direction != 0):
                with np.errstate(divide="ignore", invalid="ignore"):
                    room = np.where(
                        direction > 0, (highs - best) / direction, np.where(direction < 0, (lows - best) / direction, np.inf)
                    )
                t_max = min(8.0, float(room.min()))
                if t_max > 0:
                    t, ft = _golden_max(lambda t, b=best, d=direction: f(b + t * d), 0.0, t_max, 1e-10 * t_max)
                    if ft > fbest:
                        best, fbest = best + t * direction, ft
            trace.append(fbest)
            if fbest - start <= 1e-14 * max(1.0, abs(fbest)) and np.all(width <= 1e-6 * (highs - lows)):
                break
    elif method == "gradient":
        from scipy.optimize import minimize

        res = minimize(
            lambda p: -f(p),
            best,
            jac=lambda p: -semantic_objective_grad(family, p, sampling, prior),
            method="L-BFGS-B",
            bounds=list(zip(lows, highs)),
            options={"maxiter": max_cycles, "ftol": 1e-15, "gtol": 1e-12},
        )
        cycles = int(res.nit)
        if -res.fun > fbest:
            best, fbest = np.asarray(res.x, dtype=float), float(-res.fun)
        trace.append(fbest)
    else:
        raise ParameterError(f"unknown method {method!r}")

    span = highs - lows
    at_bound = bool(np.any((best - lows <= 1e-9 * span) | (highs - best <= 1e-9 * span)))
    if at_bound:
        warnings.warn(
            "fitted parameters sit on the search bounds; the sampling distribution "
            "may be degenerate and the optimum unbounded",
            UserWarning,
            stacklevel=2,
        )
    truth = family.make(prior.universe, best)
    return FitResult(
        family=family.form,
        params=dict(zip(family.param_names, (float(v) for v in best))),
        objective=fbest,
        trace=tuple(trace),
        iterations=cycles,
        at_bound=at_bound,
        uniform_prior=uniform_prior,
        truth=truth,
    )


# --- classification -----------------------------------------------------------------------------


def classify(sc: SemanticChannel, prior: Distribution, x: Point) -> str:
    """Label with the largest log[T(theta_j|x) / T(theta_j)].

    Ties go to the label listed first.
    """
    scores = [semantic_info_point(t, prior, x) for t in sc.truths]
    if all(s == -math.inf for s in scores):
        raise UnclassifiableError(f"no label has positive truth at {x!r}")
    return sc.labels[int(np.argmax(scores))]


def classify_all(sc: SemanticChannel, prior: Distribution) -> list[str]:
    """``classify`` applied to every point of the universe."""
    return [classify(sc, prior, i) for i in range(len(prior))]


def random_set_membership(set_values: Sequence[Iterable[Point]], x: Point) -> float:
    """Falling-shadow membership: fraction of set values that contain ``x``."""
    if not set_values:
        raise DimensionError("need at least one set value")
    key = str(x)
    hits = sum(1 for s in set_values if key in {str(v) for v in s})
    return hits / len(set_values)
