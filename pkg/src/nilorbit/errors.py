"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`NilorbitError`
so the CLI can turn it into a structured report instead of a traceback.
"""

from __future__ import annotations

from typing import Any


class NilorbitError(Exception):
    """Base class; ``detail`` carries machine-readable context."""

    def __init__(self, message: str = "", **detail: Any) -> None:
        super().__init__(message)
        self.detail = detail

    def to_dict(self) -> dict:
        return {"type": type(self).__name__, "message": str(self), "detail": self.detail}


# parsing / input
class ParseError(NilorbitError):
    pass


class DimensionMismatch(NilorbitError):
    pass


class AlgebraMismatch(NilorbitError):
    pass


# polynomials
class MissingVariable(NilorbitError):
    pass


class NotAffine(NilorbitError):
    pass


class DegenerateCoefficient(NilorbitError):
    pass


# algebras
class JacobiViolation(NilorbitError):
    pass


class NotNilpotent(NilorbitError):
    pass


class NotAnIdeal(NilorbitError):
    pass


class NotBracketPreserving(NilorbitError):
    pass


class FlagMismatch(NilorbitError):
    pass


class LatticeError(NilorbitError):
    """Lattice generators dependent or not central."""


class ClassTooHigh(NilorbitError):
    pass


# orbit method
class CertificateFailure(NilorbitError):
    pass


class PolarizationInvalid(NilorbitError):
    pass


class NotIntegral(NilorbitError):
    pass


class NotInSubalgebra(NilorbitError):
    pass


class NotSurjective(NilorbitError):
    pass


class SanityFailure(NilorbitError):
    pass


class LatticeImageMismatch(NilorbitError):
    pass


# pro-Lie structures
class LevelOutOfRange(NilorbitError):
    pass


class BadIndex(NilorbitError):
    pass


class InfiniteSupport(NilorbitError):
    pass


class InconsistentLevels(NilorbitError):
    pass
