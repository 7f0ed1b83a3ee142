class CompalgError(Exception):
    pass


class DimensionMismatch(CompalgError, ValueError):
    pass


class ContainmentError(CompalgError):
    """The denominator of a subquotient is not inside the numerator.

    For cohomology this means a coboundary failed to be a cocycle, i.e. the
    differential does not square to zero.
    """


class InvalidStructure(CompalgError, ValueError):
    """An input violates an algebraic axiom required by the operation."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotACocycle(CompalgError, ValueError):
    pass
