"""Exception hierarchy shared by all modules."""


class ShellrecError(Exception):
    """Base class for domain errors raised by this package."""


class MalformedTriangle(ShellrecError, ValueError):
    pass


class DuplicateTriangle(ShellrecError, ValueError):
    pass


class UnknownVertex(ShellrecError, KeyError):
    pass


class LinkNotCycle(ShellrecError):
    """The star of a vertex cannot be ordered into a fan."""


class SizeMismatch(ShellrecError, ValueError):
    pass


class NotIntersectionPreserving(ShellrecError, ValueError):
    pass


class InvalidShell(ShellrecError, ValueError):
    pass


class Unclassifiable(ShellrecError):
    pass


class NotClosedSurface(ShellrecError, ValueError):
    pass


class NotRealizable(ShellrecError):
    pass


class InternalContradiction(ShellrecError, AssertionError):
    """Neither the disk branch nor a Moebius branch validated.

    Unreachable for closed surfaces; hitting it means a bug (or a
    counterexample).
    """


class UnknownName(ShellrecError, KeyError):
    pass


class MalformedMatrix(ShellrecError, ValueError):
    pass
