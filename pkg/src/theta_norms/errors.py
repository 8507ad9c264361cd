"""Exception types shared across the package."""


class ThetaNormsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(ThetaNormsError):
    """Input vector or matrix is malformed (non-finite entries, bad shape)."""


class InvalidParamsError(ThetaNormsError):
    """Norm parameters are inconsistent with the problem dimension."""


class InfeasibleBudgetError(InvalidParamsError):
    """Budget c falls outside the attainable range [d*a, d*b]."""


class TestScaleExceededError(ThetaNormsError):
    """A brute-force oracle was called beyond its intended test scale."""


class DataError(ThetaNormsError):
    """Problem with an external data file or observation set."""


class ParseError(DataError):
    """Malformed line or row in a data file."""


class DuplicateEntryError(DataError):
    """The same (row, col) cell appears more than once."""


class UndefinedMetricError(ThetaNormsError):
    """Metric is undefined for the given inputs (e.g. empty scope)."""


class DivergenceError(ThetaNormsError):
    """Solver objective blew up; try a smaller step size."""


class NumericalError(ThetaNormsError):
    """A numerical routine (e.g. SVD) failed to converge."""
