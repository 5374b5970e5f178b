"""Exception types raised across the package."""


class CSQuantError(Exception):
    """Base class for all package errors."""


class DomainError(CSQuantError, ValueError):
    """An argument lies outside the domain of a function."""


class QuadratureError(CSQuantError, ArithmeticError):
    """A numerical integration did not converge to the requested tolerance."""


class TruncationError(CSQuantError, ArithmeticError):
    """A Fock truncation is too small for the requested evaluation."""


class ConvergenceError(CSQuantError, ArithmeticError):
    """An iterative algorithm (eigensolver, series, extrapolation) failed."""


class SupportError(CSQuantError, ValueError):
    """An operator has matrix elements outside its declared support block."""
