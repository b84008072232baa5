"""Exception types raised across the package."""


class HGFTError(Exception):
    """Base class for all library errors."""


class InvalidInputError(HGFTError, ValueError):
    pass


class DomainError(HGFTError, ValueError):
    pass


class NormalizationError(HGFTError, ValueError):
    """A mapping violates f(0) = 0, f_z(0) = 1 (or b_1 = 0 when H0 is required)."""


class NoRootError(HGFTError, ArithmeticError):
    pass


class NotCoveredError(HGFTError, ValueError):
    """No known radius result applies to the requested section shape."""


class DegenerateSectionError(HGFTError, ArithmeticError):
    pass


class ConsistencyError(HGFTError, ArithmeticError):
    """A closed form and its independent series oracle disagree."""
