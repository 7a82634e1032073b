"""Finite discrete statistical probability.

Distributions over an ordered universe, Shannon channels (one transition
probability function per label), Bayes' theorem in its frequentist form, and
the Shannon information measures built on it.

Conventions used throughout the package:

* ``0 * log 0 == 0``.
* ``log(positive / 0)`` is ``+inf``; the float infinity is the sentinel and it
  propagates through sums.
* Information is reported in bits unless ``units="nats"`` is requested.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import InitVar, dataclass, field

import numpy as np

from .errors import (
    DimensionError,
    NormalizationError,
    SupportError,
    UnreachableLabelError,
)

NORMALIZATION_TOL = 1e-9

Point = int | str


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def log_in(x, units: str = "bits"):
    """Logarithm in the requested units ("bits" or "nats")."""
    if units == "bits":
        return np.log2(x)
    if units == "nats":
        return np.log(x)
    raise ValueError(f"units must be 'bits' or 'nats', got {units!r}")


def fsum_dot(a: np.ndarray, b: np.ndarray) -> float:
    """Dot product summed with ``math.fsum`` (correctly rounded)."""
    return math.fsum(np.asarray(a, dtype=float) * np.asarray(b, dtype=float))


@dataclass(frozen=True, eq=False)
class Universe:
    """Ordered set of distinct points, optionally carrying numeric coordinates.

    ``coords`` has shape ``(m,)`` for scalar coordinates or ``(m, k)`` for
    vectors. Points are addressed either by integer position or by id.
    """

    ids: tuple[str, ...]
    coords: np.ndarray | None = None

    def __post_init__(self):
        ids = tuple(str(i) for i in self.ids)
        if not ids:
            raise DimensionError("universe must be nonempty")
        if len(set(ids)) != len(ids):
            raise DimensionError("universe ids must be distinct")
        object.__setattr__(self, "ids", ids)
        if self.coords is not None:
            c = _frozen(self.coords)
            if c.ndim not in (1, 2) or c.shape[0] != len(ids):
                raise DimensionError(
                    f"coords must have shape ({len(ids)},) or ({len(ids)}, k); got {c.shape}"
                )
            if not np.all(np.isfinite(c)):
                raise DimensionError("coords must be finite")
            object.__setattr__(self, "coords", c)
        object.__setattr__(self, "_index", {k: i for i, k in enumerate(ids)})

    @classmethod
    def grid(cls, values, ids: Sequence[str] | None = None) -> Universe:
        """Universe of numeric points; ids default to the printed values."""
        values = np.asarray(values, dtype=float)
        if ids is None:
            ids = [format(v, "g") for v in values] if values.ndim == 1 else [
                ",".join(format(x, "g") for x in row) for row in values
            ]
        return cls(tuple(ids), values)

    @classmethod
    def named(cls, names: Sequence[str]) -> Universe:
        return cls(tuple(names))

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def size(self) -> int:
        return len(self.ids)

    @property
    def has_coords(self) -> bool:
        return self.coords is not None

    @property
    def dim(self) -> int:
        if self.coords is None:
            return 0
        return 1 if self.coords.ndim == 1 else self.coords.shape[1]

    def index(self, x: Point) -> int:
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            if not 0 <= x < len(self.ids):
                raise DimensionError(f"point index {x} out of range for universe of size {len(self)}")
            return int(x)
        try:
            return self._index[str(x)]
        except KeyError:
            raise DimensionError(f"point {x!r} is not in the universe") from None

    def coord(self, x: Point):
        if self.coords is None:
            raise DimensionError("universe has no coordinates")
        return self.coords[self.index(x)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Universe):
            return NotImplemented
        if self is other:
            return True
        if self.ids != other.ids:
            return False
        if (self.coords is None) != (other.coords is None):
            return False
        return self.coords is None or np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash(self.ids)

    def to_json(self) -> list[dict]:
        out = []
        for i, pid in enumerate(self.ids):
            entry: dict = {"id": pid}
            if self.coords is not None:
                c = self.coords[i]
                entry["coord"] = float(c) if np.ndim(c) == 0 else [float(v) for v in c]
            out.append(entry)
        return out

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> Universe:
        if not isinstance(data, Sequence) or not data:
            raise DimensionError("universe must be a nonempty list of points")
        ids = []
        coords = []
        for k, entry in enumerate(data):
            if not isinstance(entry, Mapping) or "id" not in entry:
                raise DimensionError(f"universe[{k}] needs an 'id' field")
            ids.append(str(entry["id"]))
            coords.append(entry.get("coord"))
        present = [c is not None for c in coords]
        if any(present) and not all(present):
            raise DimensionError("universe: either every point has a 'coord' or none does")
        if not any(present):
            return cls(tuple(ids))
        dims = {np.ndim(c) for c in coords}
        lens = {len(c) for c in coords if np.ndim(c) == 1}
        if len(dims) != 1 or len(lens) > 1:
            raise DimensionError("universe: coordinates must all have the same dimension")
        return cls(tuple(ids), np.array(coords, dtype=float))


def same_universe(a: Universe, b: Universe, what: str = "arguments") -> None:
    if a != b:
        raise DimensionError(f"{what} are defined on different universes")


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability mass over a universe.

    Construction checks that the mass is nonnegative and sums to one within
    ``NORMALIZATION_TOL``. Pass ``renormalize=True`` to rescale a positive
    mass vector instead.
    """

    universe: Universe
    mass: np.ndarray
    renormalize: InitVar[bool] = False

    def __post_init__(self, renormalize: bool):
        m = np.array(self.mass, dtype=float)
        if m.shape != (len(self.universe),):
            raise DimensionError(
                f"mass has shape {m.shape}, universe has {len(self.universe)} points"
            )
        if not np.all(np.isfinite(m)) or np.any(m < 0):
            raise NormalizationError("mass must be finite and nonnegative")
        total = math.fsum(m)
        if renormalize:
            if total <= 0:
                raise NormalizationError("cannot renormalize a zero mass vector")
            m = m / total
        elif abs(total - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(f"mass sums to {total!r}, not 1")
        object.__setattr__(self, "mass", _frozen(m))

    @classmethod
    def uniform(cls, universe: Universe) -> Distribution:
        return cls(universe, np.full(len(universe), 1.0 / len(universe)))

    @classmethod
    def point_mass(cls, universe: Universe, x: Point) -> Distribution:
        m = np.zeros(len(universe))
        m[universe.index(x)] = 1.0
        return cls(universe, m)

    @classmethod
    def from_counts(cls, universe: Universe, counts) -> Distribution:
        return cls(universe, np.asarray(counts, dtype=float), renormalize=True)

    @classmethod
    def over(cls, names: Sequence[str], mass, renormalize: bool = False) -> Distribution:
        """Distribution over a coordinate-free universe of names."""
        return cls(Universe.named(names), mass, renormalize=renormalize)

    def __len__(self) -> int:
        return len(self.mass)

    def __getitem__(self, x: Point) -> float:
        return float(self.mass[self.universe.index(x)])

    @property
    def support(self) -> np.ndarray:
        return self.mass > 0

    def expectation(self, values) -> float:
        return fsum_dot(self.mass, values)

    def allclose(self, other: Distribution, atol: float = 1e-12) -> bool:
        return self.universe == other.universe and np.allclose(self.mass, other.mass, rtol=0, atol=atol)

    def to_json(self) -> dict:
        return {"universe": self.universe.to_json(), "mass": [float(v) for v in self.mass]}

    @classmethod
    def from_json(cls, data: Mapping, universe: Universe | None = None) -> Distribution:
        if "mass" not in data:
            raise DimensionError("distribution JSON needs a 'mass' field")
        if universe is None:
            if "universe" not in data:
                raise DimensionError("distribution JSON needs a 'universe' field")
            universe = Universe.from_json(data["universe"])
        return cls(universe, data["mass"], renormalize=bool(data.get("renormalize", False)))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{k}: {v:.6g}" for k, v in zip(self.universe.ids, self.mass))
        return f"Distribution({{{pairs}}})"


@dataclass(frozen=True, eq=False)
class ShannonChannel:
    """Transition probability functions P(y_j|x), one row per label.

    ``rows[j, i] = P(y_j | x_i)``. A column may be entirely NaN, which marks an
    instance where the channel is undefined (for example P(x) = 0 after
    inverting Bayes' theorem). Every defined column sums to one.
    """

    universe: Universe
    labels: tuple[str, ...]
    rows: np.ndarray
    tol: float = field(default=NORMALIZATION_TOL, repr=False)

    def __post_init__(self):
        labels = tuple(str(y) for y in self.labels)
        if not labels or len(set(labels)) != len(labels):
            raise DimensionError("channel labels must be nonempty and distinct")
        object.__setattr__(self, "labels", labels)
        r = np.array(self.rows, dtype=float)
        if r.shape != (len(labels), len(self.universe)):
            raise DimensionError(
                f"rows have shape {r.shape}, expected ({len(labels)}, {len(self.universe)})"
            )
        nan = np.isnan(r)
        partial = nan.any(axis=0) & ~nan.all(axis=0)
        if partial.any():
            raise DimensionError("a channel column must be fully defined or fully undefined")
        vals = r[~nan]
        if np.any(vals < 0) or np.any(vals > 1):
            raise NormalizationError("channel values must lie in [0, 1]")
        defined = ~nan.all(axis=0)
        sums = r[:, defined].sum(axis=0)
        if np.any(np.abs(sums - 1.0) > self.tol):
            bad = int(np.argmax(np.abs(sums - 1.0)))
            raise NormalizationError(f"channel column sums to {sums[bad]!r}, not 1")
        object.__setattr__(self, "rows", _frozen(r))

    @property
    def defined(self) -> np.ndarray:
        """Boolean mask over the universe of instances where the channel is defined."""
        return ~np.isnan(self.rows).all(axis=0)

    @property
    def label_universe(self) -> Universe:
        return Universe.named(self.labels)

    def label_index(self, label: Point) -> int:
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
            if not 0 <= label < len(self.labels):
                raise DimensionError(f"label index {label} out of range")
            return int(label)
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise DimensionError(f"unknown label {label!r}") from None

    def row(self, label: Point) -> np.ndarray:
        return self.rows[self.label_index(label)]

    def joint(self, prior: Distribution) -> np.ndarray:
        """Joint table P(x_i, y_j) with shape (labels, instances)."""
        same_universe(self.universe, prior.universe, "channel and prior")
        used = prior.mass > 0
        if np.any(used & ~self.defined):
            raise SupportError("prior puts mass on instances where the channel is undefined")
        rows = np.where(np.isnan(self.rows), 0.0, self.rows)
        return rows * prior.mass

    def label_prior(self, prior: Distribution) -> Distribution:
        j = self.joint(prior)
        return Distribution(self.label_universe, [math.fsum(r) for r in j], renormalize=True)

    def posterior(self, prior: Distribution, label: Point) -> Distribution:
        rows = np.where(np.isnan(self.rows), 0.0, self.rows)
        return bayes_posterior(prior, rows[self.label_index(label)])[1]

    def merge_labels(self, keep: Point, drop: Point, name: str | None = None) -> ShannonChannel:
        """Channel with label ``drop`` folded into ``keep``."""
        k, d = self.label_index(keep), self.label_index(drop)
        if k == d:
            raise DimensionError("cannot merge a label with itself")
        rows = [r for i, r in enumerate(self.rows) if i != d]
        labels = [y for i, y in enumerate(self.labels) if i != d]
        kk = k if k < d else k - 1
        rows[kk] = self.rows[k] + self.rows[d]
        if name is not None:
            labels[kk] = name
        return ShannonChannel(self.universe, tuple(labels), np.array(rows))

    def to_json(self) -> dict:
        return {
            "universe": self.universe.to_json(),
            "labels": list(self.labels),
            "rows": [[None if np.isnan(v) else float(v) for v in r] for r in self.rows],
        }

    @classmethod
    def from_json(cls, data: Mapping, universe: Universe | None = None) -> ShannonChannel:
        for key in ("labels", "rows"):
            if key not in data:
                raise DimensionError(f"channel JSON needs a '{key}' field")
        if universe is None:
            if "universe" not in data:
                raise DimensionError("channel JSON needs a 'universe' field")
            universe = Universe.from_json(data["universe"])
        rows = [[np.nan if v is None else v for v in r] for r in data["rows"]]
        return cls(universe, tuple(data["labels"]), np.array(rows, dtype=float))


def bayes_posterior(prior: Distribution, tpf_row) -> tuple[float, Distribution]:
    """Bayes' theorem in frequentist form for a single label.

    Returns ``(P(y_j), P(x|y_j))`` from the prior P(x) and the transition
    probability function ``tpf_row[i] = P(y_j|x_i)``.
    """
    row = np.asarray(tpf_row, dtype=float)
    if row.shape != prior.mass.shape:
        raise DimensionError(f"tpf_row has shape {row.shape}, prior has {prior.mass.shape}")
    if np.any(row < 0) or np.any(row > 1) or not np.all(np.isfinite(row)):
        raise NormalizationError("transition probabilities must lie in [0, 1]")
    joint = row * prior.mass
    label_prob = math.fsum(joint)
    if label_prob <= 0:
        raise UnreachableLabelError("label has zero probability under the prior")
    return label_prob, Distribution(prior.universe, joint / label_prob, renormalize=True)


def bayes_inverse(
    posteriors: Sequence[Distribution] | Mapping[str, Distribution],
    label_prior: Distribution,
) -> tuple[ShannonChannel, Distribution]:
    """Recover the channel P(y|x) and the source P(x) from per-label posteriors.

    Where the mixture P(x) is zero the channel is undefined; those columns are
    stored as NaN.
    """
    labels = label_prior.universe.ids
    if isinstance(posteriors, Mapping):
        try:
            posts = [posteriors[y] for y in labels]
        except KeyError as exc:
            raise DimensionError(f"no posterior for label {exc.args[0]!r}") from None
    else:
        posts = list(posteriors)
    if len(posts) != len(labels):
        raise DimensionError(f"{len(posts)} posteriors for {len(labels)} labels")
    universe = posts[0].universe
    for p in posts[1:]:
        same_universe(universe, p.universe, "posteriors")
    weighted = np.array([p.mass * w for p, w in zip(posts, label_prior.mass)])
    px = weighted.sum(axis=0)
    mixture = Distribution(universe, px, renormalize=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        rows = np.where(px > 0, weighted / px, np.nan)
    # Clean rounding so every defined column sums to one exactly enough.
    defined = px > 0
    rows[:, defined] = rows[:, defined] / rows[:, defined].sum(axis=0)
    return ShannonChannel(universe, labels, rows), mixture


def entropy(dist: Distribution, units: str = "bits") -> float:
    p = dist.mass[dist.mass > 0]
    return float(-np.sum(p * log_in(p, units)))


def kl_divergence(posterior: Distribution, prior: Distribution, units: str = "bits") -> float:
    """Kullback-Leibler divergence of ``posterior`` from ``prior``.

    Returns ``inf`` when the posterior puts mass where the prior has none.
    """
    same_universe(posterior.universe, prior.universe, "posterior and prior")
    p, q = posterior.mass, prior.mass
    used = p > 0
    if np.any(used & (q == 0)):
        return math.inf
    return float(np.sum(p[used] * log_in(p[used] / q[used], units)))


def shannon_mutual_info(prior: Distribution, channel: ShannonChannel, units: str = "bits") -> float:
    """I(X;Y) for source ``prior`` and channel ``channel``."""
    joint = channel.joint(prior)
    py = joint.sum(axis=1)
    total = 0.0
    for j in range(joint.shape[0]):
        if py[j] <= 0:
            continue
        used = joint[j] > 0
        # P(x|y_j) / P(x) == P(y_j|x) / P(y_j); avoids underflow of P(x) P(y_j)
        ratio = channel.rows[j, used] / py[j]
        total += float(np.sum(joint[j, used] * log_in(ratio, units)))
    return total
