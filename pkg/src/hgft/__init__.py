"""Numerical toolkit for harmonic mappings with bounded weighted derivatives."""
from .errors import (
    ConsistencyError,
    DegenerateSectionError,
    DomainError,
    HGFTError,
    InvalidInputError,
    NoRootError,
    NormalizationError,
    NotCoveredError,
)
from .harmonic import ClassParams, HarmonicMapping, generate_member
from .series import PowerSeries

__all__ = [
    "ClassParams", "HarmonicMapping", "PowerSeries", "generate_member",
    "HGFTError", "InvalidInputError", "DomainError", "NormalizationError", "NoRootError",
    "NotCoveredError", "DegenerateSectionError", "ConsistencyError",
]
__version__ = "0.1.0"
