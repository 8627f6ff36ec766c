"""Exception hierarchy shared by the library and the command line."""


class LinkageError(ValueError):
    """Base class for all domain errors raised by linkbetti."""


class DomainError(LinkageError):
    """A parameter lies outside the domain where the quantity is defined."""


class RangeError(LinkageError):
    """A parameter lies outside the admissible interval of a model."""


class IncompatibleRadicandError(LinkageError):
    """Two quadratic scalars live in different extensions Q(sqrt s)."""


class EngineLimitError(LinkageError):
    """The requested counting engine cannot handle this input size or type."""


class InconclusiveError(LinkageError):
    """A numerical oracle could not reach a stable verdict."""
