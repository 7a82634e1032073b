"""Fuzzy connectives with an explicit correlation mode, and compound labels.

The mode states how the two predicates are correlated across the universe:

=============  =====================  =====================
mode           AND                    OR
=============  =====================  =====================
positive       min(a, b)              max(a, b)
independent    a * b                  a + b - a * b
negative       max(0, a + b - 1)      min(1, a + b)
=============  =====================  =====================

NOT is 1 - a in every mode. Positive mode is Zadeh's logic. The mode is never
guessed from the data.

Compound-label expression grammar (keywords are case-insensitive)::

    expr   := term   ( OR[:mode]  term )*
    term   := factor ( AND[:mode] factor )*
    factor := NOT factor | "(" expr ")" | NAME
    mode   := pos | positive | zadeh | ind | independent | neg | negative

Connectives without a suffix use the default mode (positive unless the
caller chooses otherwise). NAME is an identifier such as ``u`` or ``adult``.
"""

from __future__ import annotations

import math
import re
from collections.abc import Mapping
from enum import Enum

import numpy as np

from .errors import ExpressionError, ParameterError
from .prob import Distribution, same_universe
from .semantic import Tabulated, TruthFunction


class CorrelationMode(str, Enum):
    POSITIVE = "positive"
    INDEPENDENT = "independent"
    NEGATIVE = "negative"

    @classmethod
    def parse(cls, name: str | CorrelationMode) -> CorrelationMode:
        if isinstance(name, CorrelationMode):
            return name
        key = str(name).strip().lower()
        try:
            return _MODE_ALIASES[key]
        except KeyError:
            raise ParameterError(f"unknown correlation mode {name!r}") from None


_MODE_ALIASES = {
    "positive": CorrelationMode.POSITIVE,
    "pos": CorrelationMode.POSITIVE,
    "zadeh": CorrelationMode.POSITIVE,
    "independent": CorrelationMode.INDEPENDENT,
    "ind": CorrelationMode.INDEPENDENT,
    "negative": CorrelationMode.NEGATIVE,
    "neg": CorrelationMode.NEGATIVE,
}


def _check(v):
    arr = np.asarray(v, dtype=float)
    if np.any((arr < 0) | (arr > 1)) or np.any(np.isnan(arr)):
        raise ParameterError("fuzzy truth values must lie in [0, 1]")
    return arr


def _out(result, *inputs):
    return float(result) if all(np.ndim(x) == 0 for x in inputs) else result


def fuzzy_and(a, b, mode="positive"):
    mode = CorrelationMode.parse(mode)
    x, y = _check(a), _check(b)
    if mode is CorrelationMode.POSITIVE:
        r = np.minimum(x, y)
    elif mode is CorrelationMode.INDEPENDENT:
        r = x * y
    else:
        r = np.maximum(0.0, x + y - 1.0)
    return _out(r, a, b)


def fuzzy_or(a, b, mode="positive"):
    mode = CorrelationMode.parse(mode)
    x, y = _check(a), _check(b)
    if mode is CorrelationMode.POSITIVE:
        r = np.maximum(x, y)
    elif mode is CorrelationMode.INDEPENDENT:
        r = x + y - x * y
    else:
        r = np.minimum(1.0, x + y)
    return _out(r, a, b)


def fuzzy_not(a):
    return _out(1.0 - _check(a), a)


# --- expressions --------------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<lp>\()|(?P<rp>\))|(?P<word>[A-Za-z_][A-Za-z0-9_.]*)(?::(?P<mode>[A-Za-z]+))?)")


def _tokenize(text: str) -> list[tuple[str, str | None]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"unexpected character {text[pos:].strip()[:1]!r} at position {pos}")
        pos = m.end()
        if m.group("lp"):
            tokens.append(("(", None))
        elif m.group("rp"):
            tokens.append((")", None))
        else:
            word = m.group("word")
            kw = word.upper()
            if kw in ("AND", "OR", "NOT"):
                if kw == "NOT" and m.group("mode"):
                    raise ExpressionError("NOT takes no mode suffix")
                tokens.append((kw, m.group("mode")))
            else:
                if m.group("mode"):
                    raise ExpressionError(f"atom {word!r} cannot carry a mode suffix")
                tokens.append(("NAME", word))
    return tokens


class _Parser:
    def __init__(self, text: str, atoms: Mapping[str, np.ndarray], default: CorrelationMode):
        self.tokens = _tokenize(text)
        self.i = 0
        self.atoms = atoms
        self.default = default

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def mode(self, suffix):
        return self.default if suffix is None else CorrelationMode.parse(suffix)

    def parse(self):
        if not self.tokens:
            raise ExpressionError("empty expression")
        value = self.expr()
        if self.i != len(self.tokens):
            raise ExpressionError(f"unexpected token {self.tokens[self.i][0]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() == "OR":
            _, suffix = self.take()
            value = fuzzy_or(value, self.term(), self.mode(suffix))
        return value

    def term(self):
        value = self.factor()
        while self.peek() == "AND":
            _, suffix = self.take()
            value = fuzzy_and(value, self.factor(), self.mode(suffix))
        return value

    def factor(self):
        kind = self.peek()
        if kind is None:
            raise ExpressionError("expression ends unexpectedly")
        if kind == "NOT":
            self.take()
            return fuzzy_not(self.factor())
        if kind == "(":
            self.take()
            value = self.expr()
            if self.peek() != ")":
                raise ExpressionError("missing closing parenthesis")
            self.take()
            return value
        if kind == "NAME":
            name = self.take()[1]
            if name not in self.atoms:
                raise ExpressionError(f"unknown atom {name!r}; known: {sorted(self.atoms)}")
            return self.atoms[name]
        raise ExpressionError(f"unexpected token {kind!r}")


def evaluate_expression(expression: str, atoms: Mapping[str, np.ndarray], default_mode="positive") -> np.ndarray:
    """Evaluate a compound expression over arrays of truth values."""
    arrays = {k: np.asarray(v, dtype=float) for k, v in atoms.items()}
    return np.asarray(_Parser(expression, arrays, CorrelationMode.parse(default_mode)).parse(), dtype=float)


COMPOUND_LABELS = {
    "child": "NOT (u OR a)",
    "youth-not-adult": "u AND:neg NOT a",
    "middle-age": "a AND:neg NOT (u OR e)",
}
"""Age labels built from u (youth), a (adult), and e (elder)."""


def compound_label_truth(
    atomics: Mapping[str, TruthFunction], label: str, default_mode="positive"
) -> Tabulated:
    """Truth function of a compound label (a preset name or an expression)."""
    if not atomics:
        raise ExpressionError("no atomic truth functions given")
    truths = list(atomics.values())
    for t in truths[1:]:
        same_universe(truths[0].universe, t.universe, "atomic truth functions")
    expression = COMPOUND_LABELS.get(label, label)
    values = evaluate_expression(expression, {k: t.values for k, t in atomics.items()}, default_mode)
    values = np.broadcast_to(values, truths[0].values.shape)
    return Tabulated(truths[0].universe, np.clip(values, 0.0, 1.0))


def compound_logical_probability(
    tA: TruthFunction, tB: TruthFunction, prior: Distribution, mode="positive"
) -> tuple[float, float]:
    """(T(A and B), T(A or B)) as prior-weighted averages of the pointwise connectives."""
    same_universe(tA.universe, tB.universe, "truth functions")
    same_universe(tA.universe, prior.universe, "truth functions and prior")
    t_and = math.fsum(prior.mass * fuzzy_and(tA.values, tB.values, mode))
    t_or = math.fsum(prior.mass * fuzzy_or(tA.values, tB.values, mode))
    return t_and, t_or
