"""Exception hierarchy for the workbench."""


class Error(Exception):
    """Base class for all workbench errors."""


class InvalidDenominatorError(Error, ValueError):
    """Circle element constructed with a non-positive denominator."""


class InvalidLevelError(Error, ValueError):
    """Arc, window, or neighborhood level outside its allowed range."""


class MalformedSequenceError(Error, ValueError):
    """Ratio source produced a ratio smaller than 2."""


class SequenceExhaustedError(Error, LookupError):
    """A finite ratio list was asked for terms past its end."""


class InvalidExpansionError(Error, ValueError):
    """Digit list violates the expansion invariants."""


class InvalidIndicesError(Error, ValueError):
    """Subsequence indices are negative or not strictly increasing."""


class IncompatibleBaseError(Error, ValueError):
    """Operands built over different base sequences."""


class NotASubsequenceError(Error, ValueError):
    """Sequence used in a uniform-convergence neighborhood is not drawn from the base."""


class PreconditionError(Error, ValueError):
    """Declared hypotheses required by an operation are missing or contradicted."""


class HorizonError(Error, RuntimeError):
    """Bounded search ended without a hit; the input may violate the hypotheses."""


class SpecParseError(Error, ValueError):
    """Sequence spec string does not match the grammar."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
