"""Toy statistical mechanics read through the semantic Bayes formula.

The Boltzmann distribution is the semantic Bayes prediction with truth
function exp(-e_i / kT) over the multiplicity prior G_i / G; its logical
probability is Z / G. For a system in local equilibrium (areas j at
temperature T_j holding N_j particles) the rate-tolerance value R(Theta)
equals ln G - S / (kN). Everything here is in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .prob import Distribution, Universe
from .semantic import Tabulated, semantic_bayes_predict
from .seminfo import avg_semantic_info


def _states(n: int) -> Universe:
    return Universe.named([f"x{i + 1}" for i in range(n)])


def _arrays(energies, multiplicities) -> tuple[np.ndarray, np.ndarray]:
    e = np.asarray(energies, dtype=float)
    g = np.asarray(multiplicities, dtype=float)
    if e.ndim != 1 or e.shape != g.shape or e.size == 0:
        raise DimensionError("energies and multiplicities must be 1-D arrays of equal length")
    if not np.all(np.isfinite(e)) or not np.all(np.isfinite(g)) or np.any(g < 0) or g.sum() <= 0:
        raise ParameterError("energies must be finite, multiplicities nonnegative with positive total")
    return e, g


def boltzmann(energies, multiplicities, kT: float, universe: Universe | None = None) -> Distribution:
    """P(x_i|T) = P(x_i) exp(-e_i/kT) / Z' with P(x_i) = G_i / G."""
    e, g = _arrays(energies, multiplicities)
    if not kT > 0:
        raise ParameterError(f"kT must be positive, got {kT}")
    universe = universe or _states(e.size)
    # shift by the ground energy so that the exponent never underflows everywhere
    w = g * np.exp(-(e - e[g > 0].min()) / kT)
    return Distribution(universe, w / math.fsum(w), renormalize=True)


def boltzmann_semantic(energies, multiplicities, kT: float, universe: Universe | None = None) -> Distribution:
    """Same distribution computed through ``semantic_bayes_predict``."""
    e, g = _arrays(energies, multiplicities)
    if not kT > 0:
        raise ParameterError(f"kT must be positive, got {kT}")
    universe = universe or _states(e.size)
    prior = Distribution(universe, g / g.sum(), renormalize=True)
    # truth values must stay in [0, 1]; the ground-state shift cancels in the normalization
    return semantic_bayes_predict(Tabulated(universe, np.exp(-(e - e.min()) / kT)), prior)


@dataclass(frozen=True)
class ThermoSystem:
    """States with energies e_i and multiplicities G_i; areas of (T_j, N_j)."""

    energies: np.ndarray
    multiplicities: np.ndarray
    areas: tuple[tuple[float, float], ...]
    k: float = 1.0

    def __post_init__(self):
        e, g = _arrays(self.energies, self.multiplicities)
        e.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "multiplicities", g)
        areas = tuple((float(t), float(n)) for t, n in self.areas)
        if not areas:
            raise DimensionError("a system needs at least one area")
        if any(not (t > 0 and n > 0) for t, n in areas):
            raise ParameterError("area temperatures and particle counts must be positive")
        if not self.k > 0:
            raise ParameterError("Boltzmann constant must be positive")
        object.__setattr__(self, "areas", areas)

    @property
    def G(self) -> float:
        return float(self.multiplicities.sum())

    @property
    def N(self) -> float:
        return math.fsum(n for _, n in self.areas)

    def partition(self, T: float) -> float:
        return float(np.sum(self.multiplicities * np.exp(-self.energies / (self.k * T))))

    def entropy(self) -> float:
        """S = sum_j (E_j / T_j + k N_j ln Z_j)."""
        terms = []
        for T, n in self.areas:
            p = boltzmann(self.energies, self.multiplicities, self.k * T)
            E = n * float(p.mass @ self.energies)
            terms.append(E / T + self.k * n * math.log(self.partition(T)))
        return math.fsum(terms)

    def to_json(self) -> dict:
        return {
            "energies": self.energies.tolist(),
            "multiplicities": self.multiplicities.tolist(),
            "areas": [{"temperature": t, "particles": n} for t, n in self.areas],
            "k": self.k,
        }

    @classmethod
    def from_json(cls, data) -> ThermoSystem:
        try:
            areas = [(a["temperature"], a["particles"]) for a in data["areas"]]
            return cls(data["energies"], data["multiplicities"], tuple(areas), data.get("k", 1.0))
        except (KeyError, TypeError) as exc:
            raise DimensionError(f"malformed thermo system: {exc}") from None


@dataclass(frozen=True)
class ThermoRelation:
    r_theta: float
    ln_g_minus_s_over_kn: float
    residual: float
    entropy: float

    def to_json(self) -> dict:
        return {
            "r_theta_nats": self.r_theta,
            "r_theta_bits": self.r_theta / math.log(2.0),
            "ln_G_minus_S_over_kN": self.ln_g_minus_s_over_kn,
            "entropy": self.entropy,
            "residual": self.residual,
        }


def rate_tolerance(sys: ThermoSystem) -> float:
    """R(Theta) in nats as particle-weighted generalized KL information per area."""
    universe = _states(sys.energies.size)
    prior = Distribution(universe, sys.multiplicities / sys.G, renormalize=True)
    terms = []
    for T, n in sys.areas:
        t = Tabulated(universe, np.exp(-(sys.energies - sys.energies.min()) / (sys.k * T)))
        sampling = semantic_bayes_predict(t, prior)
        terms.append(n / sys.N * avg_semantic_info(t, sampling, prior, units="nats"))
    return math.fsum(terms)


def entropy_info_relation(sys: ThermoSystem) -> ThermoRelation:
    """Compare R(Theta) with ln G - S/(kN); both in nats."""
    r = rate_tolerance(sys)
    S = sys.entropy()
    other = math.log(sys.G) - S / (sys.k * sys.N)
    return ThermoRelation(r, other, abs(r - other), S)
