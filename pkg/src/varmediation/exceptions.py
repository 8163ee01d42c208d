"""Exception types raised across the package."""


class VarMediationError(ValueError):
    """Base class for all package errors."""


class DataError(VarMediationError):
    """Malformed or inconsistent input data."""


class InsufficientDataError(VarMediationError):
    """Too few observations for the requested lag order or horizon."""


class SingularDesignError(VarMediationError):
    """Least-squares regressor matrix is rank deficient."""


class UnstableModelError(VarMediationError):
    """Operation requires a stationary VAR but the companion matrix has a unit or explosive root."""


class AdditivityError(VarMediationError):
    """Per-variable contributions do not sum to the impulse response."""


class DegenerateWindowError(VarMediationError):
    """Impulse response window is numerically zero, so the mediation index is undefined."""

    def __init__(self, message: str, n: int | None = None):
        super().__init__(message)
        self.n = n
