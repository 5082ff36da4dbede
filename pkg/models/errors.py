"""
Error hierarchy for CausalLab.
Every failure a check or operation can raise derives from CausalLabError.
"""

from typing import Any, Dict, Optional


class CausalLabError(Exception):
    """Base class for all CausalLab errors."""


# Continuum models

class OutOfWindowError(CausalLabError):
    """An event lies outside the working coordinate window."""


class InExcisedShadowError(CausalLabError):
    """An event lies in J(p) of an excised model."""


class ToleranceUnachievableError(CausalLabError):
    """The grid is too coarse for the requested deformation tolerance."""


class NotAchronalError(CausalLabError):
    """A surface violates the Lipschitz-1 bound on some grid pair."""


class PreconditionNestingError(CausalLabError):
    """A chain of spatial bases is not strictly nested."""


class NoRoomError(CausalLabError):
    """Nesting slack between two cones is below grid resolution."""


class ShadowOverlapError(CausalLabError):
    """A cone meets J(p) where it must be causally disjoint from p."""


# Causal sets

class TooDenseError(CausalLabError):
    """Expected sprinkling size exceeds the configured maximum."""


class CycleDetectedError(CausalLabError):
    """A raw relation is not acyclic."""


class NotAntichainError(CausalLabError):
    """A slice contains two comparable points."""


class NotMaximalError(CausalLabError):
    """An antichain is not maximal."""


class PreconditionFailureError(CausalLabError):
    """A documented precondition of an operation does not hold."""

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness or {}


class NoInterpolantError(CausalLabError):
    """No member of the shared family sits between inner and outer."""

    def __init__(self, message: str, witness: Dict[str, Any]):
        super().__init__(message)
        self.witness = witness


# Duality

class DimensionMismatchError(CausalLabError):
    """Two algebras live on different site counts."""


class PreconditionShadowError(CausalLabError):
    """The region meets J(p)."""


class NoContainingDiamondError(CausalLabError):
    """No family member contains the marked point."""


class NoSupersetError(CausalLabError):
    """No family member contains the buffer of the region."""


# Scenarios

class ScenarioParseError(CausalLabError):
    """A scenario file is not valid JSON."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message)
        self.line = line


class ScenarioValidationError(CausalLabError):
    """A scenario parses but does not validate."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field
