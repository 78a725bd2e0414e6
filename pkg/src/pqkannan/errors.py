"""Exception hierarchy.

Everything raised on purpose by the package derives from :class:`PQKError`,
so callers (the CLI in particular) can separate bad input from bugs.
"""


class PQKError(Exception):
    pass


class DomainError(PQKError, ValueError):
    """A point lies outside the universe of a space."""


class SpaceParseError(PQKError, ValueError):
    """A finite-space or mapping document is malformed."""


class UnknownNameError(PQKError, LookupError):
    def __init__(self, kind, name, available):
        self.name = name
        self.available = tuple(available)
        super().__init__(
            f"unknown {kind} {name!r}; available: {', '.join(self.available)}"
        )

    def __str__(self):
        return self.args[0]


class StrategyError(PQKError, ValueError):
    """A check strategy is invalid or unusable for the given space."""


class KannanConstantError(PQKError, ValueError):
    pass


class MappingError(PQKError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionError(PQKError):
    """An operation was called on inputs that fail its documented precondition.

    ``report`` carries the failing verification report when there is one.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NonConvergenceError(PQKError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class ConstructionError(PQKError, ValueError):
    pass


class SizeError(PQKError, ValueError):
    pass


class DependencyError(PreconditionError):
    """A prerequisite check (e.g. the p-Kannan condition) failed."""
