"""Bayesian reasoning forms, fuzzy syllogisms, and the implication bound.

Hypothesis distributions are ordered (h1, h0). A negative degree of
confirmation for e1 -> h1 is read as a positive degree for e1 -> h0, so the
consequence always stays a probability distribution.
"""

from __future__ import annotations

from collections import namedtuple
from collections.abc import Callable

from .errors import InconsistentInputError, ParameterError
from .learning import match_truth_functions
from .prob import Distribution, Universe, bayes_posterior
from .semantic import (
    bayes_theorem_I,
    logical_probability,
    semantic_bayes_predict,
    truth_from_likelihood,
)

HYPOTHESES = Universe.named(["h1", "h0"])


def _degree(v, name: str):
    if not -1 <= v <= 1:
        raise ParameterError(f"{name} must lie in [-1, 1], got {v}")
    return v


def hypothesis_prior(p_h1) -> Distribution:
    return Distribution(HYPOTHESES, [p_h1, 1 - p_h1])


def syllogism_channel(b1_star, prior: Distribution) -> Distribution:
    """Consequence of a major premise with channel confirmation b1*.

    P(h1|theta_e1) = P(h1) / (P(h1) + (1 - b1*) P(h0)) for b1* >= 0. A negative degree
    gives the same formula toward h0 with degree -b1*.
    """
    b = _degree(b1_star, "b1*")
    if len(prior) != 2:
        raise ParameterError("channel syllogism needs a prior over (h1, h0)")
    p1, p0 = prior.mass
    if b >= 0:
        q1 = min(1.0, p1 / (p1 + (1 - b) * p0)) if p1 > 0 else 0.0
        return Distribution(HYPOTHESES, [q1, 1 - q1], renormalize=True)
    q0 = min(1.0, p0 / (p0 + (1 + b) * p1)) if p0 > 0 else 0.0
    return Distribution(HYPOTHESES, [1 - q0, q0], renormalize=True)


def syllogism_prediction(c1_star) -> Distribution:
    """Consequence of a major premise with prediction confirmation c1*.

    (1/(2 - c), (1 - c)/(2 - c)) for c >= 0, mirrored toward h0 for c < 0.
    """
    c = _degree(c1_star, "c1*")
    if c >= 0:
        mass = [1 / (2 - c), (1 - c) / (2 - c)]
    else:
        mass = [(1 + c) / (2 + c), 1 / (2 + c)]
    return Distribution(HYPOTHESES, [float(m) for m in mass], renormalize=True)


ImplicationBound = namedtuple("ImplicationBound", ["conditional", "implication", "holds"])


def implication_bound(p_p, p_pq) -> ImplicationBound:
    """P(q|p) = P(pq)/P(p) against P(p => q) = 1 - P(p) + P(pq).

    Works with floats or ``fractions.Fraction`` (exact).
    """
    if not 0 < p_p <= 1:
        raise ParameterError(f"P(p) must lie in (0, 1], got {p_p}")
    if p_pq < 0:
        raise ParameterError(f"P(pq) must be nonnegative, got {p_pq}")
    if p_pq > p_p:
        raise InconsistentInputError(f"P(pq) = {p_pq} exceeds P(p) = {p_p}")
    conditional = p_pq / p_p
    implication = 1 - p_p + p_pq
    return ImplicationBound(conditional, implication, conditional <= implication)


# --- reasoning table ----------------------------------------------------------------------------

REASONING_ROWS: dict[str, Callable] = {
    # statistical: P(y_j|x) and P(x) -> P(x|y_j)
    "bayes_II": lambda prior, tpf_row: bayes_posterior(prior, tpf_row)[1],
    # between sets: T(A|B), T(A|not B), T(B) -> T(B|A)
    "bayes_I": lambda tA_given_B, tA_given_Bc, tB: bayes_theorem_I(tA_given_B, tA_given_Bc, tB).tB_given_A,
    # truth value at a point, or the logical probability when no point is given
    "truth_value": lambda truth, prior=None, x=None: truth(x) if x is not None else logical_probability(truth, prior),
    # truth function and prior -> P(x|theta)
    "semantic_bayes": lambda truth, prior: semantic_bayes_predict(truth, prior),
    # sampling distribution and prior -> truth function
    "bayes_III_inference": lambda likelihood, prior: truth_from_likelihood(likelihood, prior)[0],
    # Shannon channel -> matched semantic channel
    "logical_bayesian_inference": lambda channel: match_truth_functions(channel),
    "channel_confirmation": lambda b1_star, prior: syllogism_channel(b1_star, prior),
    "prediction_confirmation": lambda c1_star: syllogism_prediction(c1_star),
}


def reason(row: str, **inputs):
    """Consequence of one reasoning form; see ``REASONING_ROWS`` for names and inputs."""
    try:
        fn = REASONING_ROWS[row]
    except KeyError:
        raise ParameterError(f"unknown reasoning row {row!r}; choose from {sorted(REASONING_ROWS)}") from None
    try:
        return fn(**inputs)
    except TypeError as exc:
        raise ParameterError(f"row {row!r}: {exc}") from None
