"""Exception types raised by the geometry, measure and solver routines."""


class LogMinkError(Exception):
    """Base class; ``code`` is the name reported by the command line."""

    @property
    def code(self):
        return type(self).__name__


class DimensionMismatch(LogMinkError, ValueError):
    pass


class SingularMap(LogMinkError, ValueError):
    pass


class UnboundedShape(LogMinkError, ValueError):
    """Support directions do not positively span the ambient space."""


class DegenerateShape(LogMinkError, ValueError):
    """The constructed body has (numerically) zero volume."""


class AsymmetricInput(LogMinkError, ValueError):
    """Input is not symmetric about the origin."""


class InvalidP(LogMinkError, ValueError):
    pass


class NonpositiveSupport(LogMinkError, ValueError):
    pass


class SubspaceNotComplementary(LogMinkError, ValueError):
    pass


class NoDescent(LogMinkError, RuntimeError):
    """Line search stalled; ``partial`` holds the last iterate's result."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
