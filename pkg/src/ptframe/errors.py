"""Exception hierarchy shared by every module of the package."""


class PTError(Exception):
    """Base class for all errors raised by ptframe."""


class DimensionError(PTError, ValueError):
    """Shapes, universes, or label sets do not line up."""


class NormalizationError(PTError, ValueError):
    """A mass vector or a channel column does not sum to one."""


class ParameterError(PTError, ValueError):
    """A model parameter is outside its admissible range."""


class UnreachableLabelError(PTError, ValueError):
    """A label has zero statistical probability under the given prior."""


class EmptyFuzzySetError(PTError, ValueError):
    """A truth function has zero logical probability under the given prior."""


class SupportError(PTError, ValueError):
    """A distribution puts mass where its reference distribution has none."""


class ConditioningError(PTError, ValueError):
    """Conditioning on an event of logical probability zero."""


class UnusedLabelError(PTError, ValueError):
    """A channel row is identically zero, so the label is never used."""


class UnclassifiableError(PTError, ValueError):
    """Every label scores minus infinity at the instance."""


class CountError(PTError, ValueError):
    """Confusion counts are negative or leave a row of the table empty."""


class UndefinedMeasureError(PTError, ArithmeticError):
    """A confirmation measure is 0/0 for the given counts."""


class InconsistentInputError(PTError, ValueError):
    """Inputs violate a probability constraint such as P(pq) <= P(p)."""


class ExpressionError(PTError, ValueError):
    """A compound-label expression cannot be parsed or names an unknown atom."""


class ConvergenceError(PTError, RuntimeError):
    """An iterative solver hit its sweep limit.

    The last residual is kept on the exception so callers can report it.
    """

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual {residual:.3e} after {iterations} sweeps)")
        self.residual = residual
        self.iterations = iterations


class FormError(ParameterError):
    """An operation received a truth function of the wrong form."""
