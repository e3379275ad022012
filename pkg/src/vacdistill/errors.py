"""Exception hierarchy shared by all modules."""


class VacDistillError(Exception):
    """Base class for all package errors."""


class ConfigurationError(VacDistillError, ValueError):
    """Inconsistent sizes, indices or parameters."""


class ValidationError(VacDistillError, ValueError):
    """An operator failed a structural check (unitarity, hermiticity)."""


class NumericalError(VacDistillError, ArithmeticError):
    """An iterative numerical routine failed to converge."""


class DegenerateProtocolError(VacDistillError):
    """The distillation protocol reached a state it cannot continue from."""
