"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes (usage 1, validation 2, resource 3),
so library code should raise the most specific class that applies.
"""


class NcmatchError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(NcmatchError):
    """An argument breaks a documented precondition."""


class ValidationError(NcmatchError):
    """A graph, instance file or config fails its structural invariants."""


class ResourceLimitError(NcmatchError):
    """A guard cap (edge count, DP size, brute-force size) was exceeded."""
