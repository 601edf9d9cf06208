"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
error classes to process exit codes without a lookup table of its own.
"""


class PilotCapError(Exception):
    """Base class for all errors raised by pilotcap."""

    exit_code = 5


class ParseError(PilotCapError, ValueError):
    """A matrix file could not be tokenized."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class InvalidMatrix(PilotCapError, ValueError):
    exit_code = 3


class NotSquare(InvalidMatrix):
    pass


class AsymmetryTooLarge(InvalidMatrix):
    pass


class NotPsd(InvalidMatrix):
    def __init__(self, min_eigenvalue, tolerance):
        self.min_eigenvalue = min_eigenvalue
        self.tolerance = tolerance
        super().__init__(
            f"matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.6g} "
            f"< -{tolerance:.3g}"
        )


class InvalidConfig(PilotCapError, ValueError):
    exit_code = 4


class InvalidPlan(InvalidConfig):
    """Training length outside the range an operation accepts."""


class InvalidObservation(InvalidConfig):
    pass


class DimensionMismatch(PilotCapError, ValueError):
    exit_code = 4


class NumericFailure(PilotCapError, ArithmeticError):
    exit_code = 5


class NotPositiveDefinite(NumericFailure):
    def __init__(self, pivot_index, pivot=None):
        self.pivot_index = pivot_index
        self.pivot = pivot
        msg = f"matrix is not positive definite: pivot {pivot_index} failed"
        if pivot is not None:
            msg += f" (value {pivot:.6g})"
        super().__init__(msg)


class ConvergenceFailure(NumericFailure):
    def __init__(self, iterations):
        self.iterations = iterations
        super().__init__(f"Jacobi eigensolver did not converge after {iterations} sweeps")
