"""Exception types shared across the engine."""


class MCDeformError(Exception):
    """Base class for engine errors."""


class ShapeMismatch(MCDeformError):
    pass


class DegreeOverflow(MCDeformError):
    """A polynomial form would exceed the configured degree bound."""


class PreconditionFailed(MCDeformError):
    pass


class NotMC(MCDeformError):
    """A twist fails the Maurer-Cartan equation; carries the curvature."""

    def __init__(self, message, curvature=None):
        super().__init__(message)
        self.curvature = curvature


class NotInvertible(MCDeformError):
    pass


class ParseError(MCDeformError):
    def __init__(self, message, line=0, column=0):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self):
        base = super().__str__()
        if self.line:
            return f"{base} (line {self.line}, column {self.column})"
        return base
