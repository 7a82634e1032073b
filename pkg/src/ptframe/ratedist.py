"""Rate-distortion in parametric form and its truth-function reading.

For a slope parameter s <= 0 the minimizing reproduction prior P(y) solves a
fixed point; the channel is P(y_j|x_i) = P(y_j) exp(s d_ij) / lambda_i with
lambda_i = sum_j P(y_j) exp(s d_ij). Reading exp(s d_ij) as a truth function
and lambda_i as its logical probability turns R(D) into a rate-tolerance
value R(Theta); ``r_theta_from_rd`` evaluates that second form.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConvergenceError, DimensionError, ParameterError
from .prob import Distribution, ShannonChannel, Universe, kl_divergence, same_universe
from .semantic import SemanticChannel, logical_probability, semantic_bayes_predict

LN2 = math.log(2.0)
PRUNE_BELOW = 1e-12


@dataclass(frozen=True)
class DistortionMatrix:
    """d[i, j] = loss of reproducing instance i by label j."""

    values: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or 0 in v.shape:
            raise DimensionError("distortion matrix must be a nonempty 2-D array")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ParameterError("distortions must be finite and nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        labels = self.labels
        if labels is None:
            labels = tuple(f"y{j + 1}" for j in range(v.shape[1]))
        labels = tuple(str(y) for y in labels)
        if len(labels) != v.shape[1]:
            raise DimensionError("one label per distortion column is required")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def hamming(cls, n: int) -> DistortionMatrix:
        return cls(1.0 - np.eye(n))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "rows": self.values.tolist()}

    @classmethod
    def from_json(cls, data) -> DistortionMatrix:
        if isinstance(data, Mapping):
            return cls(data["rows"], data.get("labels"))
        return cls(data)

    @classmethod
    def read_csv(cls, source) -> DistortionMatrix:
        """Dense matrix; a first row that is not numeric is taken as labels."""
        if isinstance(source, (str, Path)):
            with open(source, newline="") as fh:
                return cls.read_csv(io.StringIO(fh.read()))
        rows = [r for r in csv.reader(source) if r and any(c.strip() for c in r)]
        labels = None
        try:
            [float(c) for c in rows[0]]
        except ValueError:
            labels, rows = [c.strip() for c in rows[0]], rows[1:]
        except IndexError:
            raise DimensionError("empty distortion CSV") from None
        try:
            values = [[float(c) for c in r] for r in rows]
        except ValueError as exc:
            raise DimensionError(f"non-numeric distortion entry: {exc}") from None
        if len({len(r) for r in values}) != 1:
            raise DimensionError("distortion CSV rows have different lengths")
        return cls(values, labels)


@dataclass(frozen=True)
class RdPoint:
    s: float
    D: float
    R: float
    reproduction_prior: Distribution
    channel: ShannonChannel
    pruned: tuple[str, ...] = ()
    sweeps: int = 0

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "D": self.D,
            "R": self.R,
            "reproduction_prior": self.reproduction_prior.mass.tolist(),
            "pruned": list(self.pruned),
            "sweeps": self.sweeps,
        }


def _check(prior: Distribution, d: DistortionMatrix) -> None:
    if d.shape[0] != len(prior):
        raise DimensionError(f"distortion has {d.shape[0]} rows but the universe has {len(prior)} points")


def rd_point(
    prior: Distribution,
    d: DistortionMatrix,
    s: float,
    *,
    tol: float = 1e-10,
    max_sweeps: int = 100_000,
) -> RdPoint:
    """One point of the R(D) curve at slope ``s`` (R in bits)."""
    _check(prior, d)
    s = float(s)
    if not s <= 0:
        raise ParameterError(f"slope s must be <= 0, got {s}")
    p = prior.mass
    A = np.exp(s * d.values)
    n = d.shape[1]
    q = np.full(n, 1.0 / n)
    residual = math.inf
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        lam = A @ q
        new = q * ((p / lam) @ A)
        new[new < PRUNE_BELOW] = 0.0
        new /= new.sum()
        live = q > 0
        residual = float(np.max(np.abs(new[live] - q[live]) / q[live]))
        q = new
        if residual < tol:
            break
    else:
        raise ConvergenceError("reproduction prior did not converge", residual, sweeps)
    lam = A @ q
    rows = (q[:, None] * A.T) / lam[None, :]
    joint = rows * p[None, :]
    D = math.fsum((joint * d.values.T).ravel())
    used = p > 0
    R = (s * D - math.fsum(p[used] * np.log(lam[used]))) / LN2
    R = max(R, 0.0)
    channel = ShannonChannel(prior.universe, d.labels, rows)
    return RdPoint(
        s=s,
        D=D,
        R=R,
        reproduction_prior=Distribution(Universe.named(d.labels), q, renormalize=True),
        channel=channel,
        pruned=tuple(y for y, v in zip(d.labels, q) if v == 0),
        sweeps=sweeps,
    )


def rd_curve(prior: Distribution, d: DistortionMatrix, s_grid: Sequence[float], **kwargs) -> list[RdPoint]:
    """``rd_point`` over a grid that starts at or below 0 and descends."""
    grid = [float(s) for s in s_grid]
    if not grid:
        raise ParameterError("s grid is empty")
    if any(s > 0 for s in grid) or any(b > a for a, b in itertools.pairwise(grid)):
        raise ParameterError("s grid must be nonpositive and sorted descending")
    return [rd_point(prior, d, s, **kwargs) for s in grid]


def r_theta_from_rd(rd: RdPoint, prior: Distribution, d: DistortionMatrix) -> float:
    """Semantic mutual information with truth functions exp(s d_ij), in bits.

    T(theta_xi | y_j) = exp(s d_ij) and its logical probability under the
    reproduction prior is lambda_i.
    """
    _check(prior, d)
    same_universe(prior.universe, rd.channel.universe, "prior and rate-distortion channel")
    log_t = rd.s * d.values
    lam = np.exp(log_t) @ rd.reproduction_prior.mass
    total = []
    for i in np.flatnonzero(prior.mass > 0):
        q = rd.channel.rows[:, i]
        used = q > 0
        total.append(prior.mass[i] * math.fsum(q[used] * (log_t[i, used] - math.log(lam[i]))))
    return math.fsum(total) / LN2


@dataclass(frozen=True)
class DcfMinimum:
    info: float
    per_label: np.ndarray
    posteriors: tuple[Distribution, ...]


def dcf_minimum_info(dcfs: SemanticChannel, prior: Distribution, label_prior: Distribution) -> DcfMinimum:
    """Minimum information when each label's posterior must respect its DCF.

    The minimizing posterior of label j is the semantic Bayes prediction
    P(x|theta_j). ``per_label`` holds KL(P(x|theta_j) || P(x)) in bits and
    ``info`` their P(y)-weighted sum. For a crisp DCF the per-label value is
    -log2 T(theta_j).
    """
    same_universe(dcfs.universe, prior.universe, "DCFs and prior")
    if len(label_prior) != len(dcfs):
        raise DimensionError("label prior must have one entry per DCF")
    posts = tuple(semantic_bayes_predict(t, prior) for t in dcfs.truths)
    per = np.array([kl_divergence(p, prior) for p in posts])
    used = label_prior.mass > 0
    return DcfMinimum(math.fsum(label_prior.mass[used] * per[used]), per, posts)


def crisp_dcf_info(t, prior: Distribution) -> float:
    """-log2 T(theta) for a crisp constraint."""
    return -math.log2(logical_probability(t, prior))
