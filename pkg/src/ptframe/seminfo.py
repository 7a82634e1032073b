"""Semantic information measures.

The semantic information a label conveys about an instance is
log[T(theta|x) / T(theta)], which by Bayes III equals log[P(x|theta) / P(x)].
It is minus infinity on instances that falsify the label. Averaging over a
sampling distribution gives the generalized KL information; averaging again
over labels gives semantic mutual information, which never exceeds Shannon's.

Verisimilitude of a prediction "x is about x_j" is ``semantic_info_point``
with a multivariate Gaussian truth function; no separate function is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, EmptyFuzzySetError, FormError
from .prob import (
    Distribution,
    Point,
    ShannonChannel,
    log_in,
    same_universe,
    shannon_mutual_info,
)
from .semantic import (
    Gaussian,
    MVGaussian,
    SemanticChannel,
    TruthFunction,
    logical_probability,
)


def _logical(t: TruthFunction, prior: Distribution) -> float:
    tl = logical_probability(t, prior)
    if tl <= 0:
        raise EmptyFuzzySetError("truth function has zero logical probability under the prior")
    return tl


def _point_info_all(t: TruthFunction, tl: float, units: str) -> np.ndarray:
    v = t.values
    out = np.full(v.shape, -math.inf)
    pos = v > 0
    out[pos] = log_in(v[pos] / tl, units)
    return out


def semantic_info_point(t: TruthFunction, prior: Distribution, x: Point, units: str = "bits") -> float:
    """I(x; theta) = log[T(theta|x) / T(theta)]; ``-inf`` where T(theta|x) = 0."""
    tl = _logical(t, prior)
    tx = t(x)
    if tx == 0:
        return -math.inf
    return float(log_in(tx / tl, units))


def falsifying_points(t: TruthFunction, sampling: Distribution) -> int:
    """Number of sampled instances (positive mass) where the truth value is 0."""
    return int(np.count_nonzero((sampling.mass > 0) & (t.values == 0)))


def avg_semantic_info(
    t: TruthFunction, sampling: Distribution, prior: Distribution, units: str = "bits"
) -> float:
    """Generalized KL information: sampling-weighted average of point information.

    Any sampled counterexample (positive mass where T(theta|x) = 0) makes the
    result ``-inf``; ``falsifying_points`` counts them.
    """
    same_universe(sampling.universe, prior.universe, "sampling and prior")
    tl = _logical(t, prior)
    if falsifying_points(t, sampling):
        return -math.inf
    used = sampling.mass > 0
    return float(np.sum(sampling.mass[used] * log_in(t.values[used] / tl, units)))


@dataclass(frozen=True)
class SemanticInfoReport:
    labels: tuple[str, ...]
    point_ids: tuple[str, ...]
    point_info: np.ndarray
    avg_info: np.ndarray
    mutual_info: float
    shannon_mutual_info: float
    logical_probs: np.ndarray
    label_probs: np.ndarray
    falsified: tuple[int, ...]
    units: str = "bits"

    def to_json(self) -> dict:
        def num(v):
            v = float(v)
            if math.isnan(v):
                return None
            if math.isinf(v):
                return "-inf" if v < 0 else "inf"
            return v

        return {
            "units": self.units,
            "labels": list(self.labels),
            "points": list(self.point_ids),
            "logical_probability": [num(v) for v in self.logical_probs],
            "label_probability": [num(v) for v in self.label_probs],
            "point_info": [[num(v) for v in row] for row in self.point_info],
            "avg_info": [num(v) for v in self.avg_info],
            "falsifying_points": list(self.falsified),
            "mutual_info": num(self.mutual_info),
            "shannon_mutual_info": num(self.shannon_mutual_info),
        }


def semantic_mutual_info(
    sc: SemanticChannel, prior: Distribution, channel: ShannonChannel, units: str = "bits"
) -> SemanticInfoReport:
    """I(X; Theta) of a semantic channel against the sampling channel P(y|x)."""
    if tuple(sc.labels) != tuple(channel.labels):
        raise DimensionError(f"semantic labels {sc.labels} differ from channel labels {channel.labels}")
    same_universe(sc.universe, prior.universe, "semantic channel and prior")
    joint = channel.joint(prior)
    py = joint.sum(axis=1)
    n = len(sc)
    point = np.empty((n, len(prior)))
    avg = np.full(n, math.nan)
    tls = np.empty(n)
    falsified = []
    total = 0.0
    for j, t in enumerate(sc.truths):
        tls[j] = _logical(t, prior)
        point[j] = _point_info_all(t, tls[j], units)
        used = joint[j] > 0
        falsified.append(int(np.count_nonzero(used & (t.values == 0))))
        if py[j] <= 0:
            continue
        if falsified[-1]:
            avg[j] = -math.inf
            total = -math.inf
            continue
        contrib = float(np.sum(joint[j, used] * point[j, used]))
        avg[j] = contrib / py[j]
        total += contrib
    return SemanticInfoReport(
        labels=sc.labels,
        point_ids=prior.universe.ids,
        point_info=point,
        avg_info=avg,
        mutual_info=total,
        shannon_mutual_info=shannon_mutual_info(prior, channel, units),
        logical_probs=tls,
        label_probs=py,
        falsified=tuple(falsified),
        units=units,
    )


@dataclass(frozen=True)
class GaussianDecomposition:
    """Semantic mutual information of Gaussian truths split in two terms (nats).

    mutual_info == entropy_term - squared_error_term up to ``identity_residual``.
    """

    entropy_term: float
    squared_error_term: float
    mutual_info: float
    identity_residual: float
    units: str = "nats"


def _squared_deviation(t: TruthFunction) -> np.ndarray:
    coords = t.universe.coords
    if coords is None:
        raise DimensionError("Gaussian decomposition needs numeric coordinates")
    c = coords if coords.ndim == 2 else coords[:, None]
    if isinstance(t, MVGaussian):
        return np.sum((c - t.centers) ** 2 / (2.0 * t.sigmas**2), axis=1)
    center = np.atleast_1d(np.asarray(t.center, dtype=float))
    return np.sum((c - center) ** 2, axis=1) / (2.0 * t.sigma**2)


def gaussian_decomposition(
    sc: SemanticChannel, prior: Distribution, channel: ShannonChannel
) -> GaussianDecomposition:
    """Generalized entropy minus mean relative squared error, in nats.

    The deviation of instance x_i under label j is measured from the numeric
    center of the j-th Gaussian truth function.
    """
    for label, t in zip(sc.labels, sc.truths):
        if not isinstance(t, (Gaussian, MVGaussian)):
            raise FormError(f"label {label!r} has a {t.form} truth function; Gaussian required")
    joint = channel.joint(prior)
    py = joint.sum(axis=1)
    entropy_term = -math.fsum(
        py[j] * math.log(logical_probability(t, prior)) for j, t in enumerate(sc.truths) if py[j] > 0
    )
    sq_term = math.fsum(float(np.sum(joint[j] * _squared_deviation(t))) for j, t in enumerate(sc.truths))
    mi = semantic_mutual_info(sc, prior, channel, units="nats").mutual_info
    return GaussianDecomposition(
        entropy_term=entropy_term,
        squared_error_term=sq_term,
        mutual_info=mi,
        identity_residual=abs(mi - (entropy_term - sq_term)),
    )


def effective_control_amount(
    ideal: Distribution, actual: Distribution, prior: Distribution, units: str = "bits"
) -> float:
    """I_c = sum_i ideal_i log[actual_i / prior_i].

    Maximal (equal to KL(ideal, prior)) when the actual distribution matches
    the ideal; may be negative. Returns ``-inf`` if the ideal requires an
    outcome the control never produces, ``+inf`` if the ideal and the actual
    distribution both use an outcome the prior rules out.
    """
    same_universe(ideal.universe, actual.universe, "ideal and actual")
    same_universe(ideal.universe, prior.universe, "ideal and prior")
    w, a, p = ideal.mass, actual.mass, prior.mass
    used = w > 0
    if np.any(used & (a == 0)):
        return -math.inf
    if np.any(used & (p == 0)):
        return math.inf
    return float(np.sum(w[used] * log_in(a[used] / p[used], units)))
