"""Exception hierarchy shared by all tracekit components."""


class TracekitError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(TracekitError):
    """Domain/codomain objects do not line up for the requested operation."""


class ValidationError(TracekitError):
    """A value violates its structural invariants (bad table, bad order, ...)."""


class WorkspaceError(ValidationError):
    """A workspace document or morphism payload failed to load."""


class DivergenceError(TracekitError):
    """An iterative computation failed to converge within its budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularityError(TracekitError):
    """A linear solve hit a singular system."""


class SamplingError(TracekitError):
    """A random generator could not produce a value of the requested shape."""


class ParseError(TracekitError):
    """Syntax error in the diagram term language, with source position."""

    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col
