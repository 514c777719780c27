"""Exception hierarchy shared across the package."""

from __future__ import annotations


class EffhamError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(EffhamError):
    """Operands act on spaces of different dimension."""


class DimensionCapError(EffhamError):
    """A constructed matrix would exceed the configured dimension cap."""


class OperatorValueError(EffhamError):
    """Operator entries are invalid (non-square layout, NaN or Inf)."""


class PowerCapError(EffhamError):
    """A tone-polynomial power would exceed the configured maximum order."""


class TermBudgetError(EffhamError):
    """A series operation would exceed the monomial budget.

    The budget defaults to 2_000_000 monomials and can be overridden with
    the ``EFFHAM_MAX_TERMS`` environment variable.
    """


class FrequencyConditionError(EffhamError):
    """A builder's frequency precondition (distinctness, no ambiguous
    three-frequency sums) is violated."""


class QuadratureError(EffhamError):
    """Quadrature refinement budget exhausted before reaching tolerance.

    Carries the best available estimate in ``best``.
    """

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class ModelError(EffhamError):
    """Base class for model-file diagnostics; carries a source location."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col if col is not None else 0}: {message}"
        super().__init__(message)


class ModelSyntaxError(ModelError):
    """Tokenization or grammar failure in a model file."""


class ModelValidationError(ModelError):
    """The file parsed but violates a static rule (duplicate name,
    unknown identifier, non-positive frequency)."""


class ModelCompileError(ModelError):
    """Expression evaluation failed while building matrices (dimension
    mismatch, non-square literal, dimension cap)."""
