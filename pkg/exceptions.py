"""Custom exceptions for the ptcoupler-hom simulator"""


class PtCouplerException(Exception):
    """Base exception for all simulator errors"""

    pass


class ConfigurationError(PtCouplerException):
    """Raised when configuration is invalid or missing"""

    pass


class ValidationError(PtCouplerException):
    """Raised when a value type is constructed with invalid fields"""

    pass


class DomainError(PtCouplerException):
    """Raised when an input lies outside the mathematical domain of an operation"""

    pass


class UnphysicalTransformError(DomainError):
    """Raised when a mode transformation amplifies light (sigma_max > 1)"""

    pass


class DegenerateNormalizationError(DomainError):
    """Raised when the distinguishable coincidence rate used for normalization is zero"""

    pass


class OutputError(PtCouplerException):
    """Raised when writing or reading a result table fails"""

    pass
