"""Exception hierarchy shared by every module.

The command line maps each class to its own exit status, so callers that
want to distinguish a bad request from an exhausted budget catch these
rather than the builtins.
"""


class DomainError(ValueError):
    """An argument violates a documented precondition."""


class ConstructionError(DomainError):
    """An explicit construction is empty or ill-defined at this size."""


class CapacityError(RuntimeError):
    """A configured budget (memory, nodes, ranks) would be exceeded."""


class PropertyViolation(AssertionError):
    """A property that must hold unconditionally was observed to fail."""
