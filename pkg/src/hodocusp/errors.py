"""Exception hierarchy.

UsageError (and its subclass DegeneracyError) mean the caller violated a
precondition or supplied degenerate data; the CLI maps them to exit code 2.
DomainError means a numerical domain violation at evaluation time (outside a
validity disc, wrong side of a curve family, probe at a pole); exit code 3.
"""


class HodocuspError(Exception):
    """Base class for all package errors."""


class UsageError(HodocuspError):
    """Precondition or configuration violation."""


class DegeneracyError(UsageError):
    """Input data degenerate for the requested construction (e.g. b03 = 0)."""


class DomainError(HodocuspError):
    """Numerical evaluation outside the trusted domain."""
