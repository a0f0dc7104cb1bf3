from typing import Any, Optional, Sequence


class LatfreeError(Exception):
    """Base class for every error raised by latfree."""


class ScalarError(LatfreeError, ValueError):
    pass


class DimensionError(LatfreeError, ValueError):
    pass


class EmptyPolyhedronError(LatfreeError):
    pass


class UnboundedError(LatfreeError):
    pass


class NotFullDimensionalError(LatfreeError):
    pass


class NonPrimitiveError(LatfreeError):
    """The given vectors are not a basis of lin(vectors) ∩ Z^d."""

    def __init__(self, message: str, witness: Sequence[int]):
        super().__init__(message)
        self.witness = tuple(witness)


class NotSplittableError(LatfreeError):
    pass


class PreconditionError(LatfreeError):
    def __init__(self, message: str, detail: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.detail = detail or {}


class SearchExhaustedError(LatfreeError):
    pass


class UndecidedError(LatfreeError):
    """Lattice-freeness could not be decided within the search cap."""


class LemmaHypothesisError(LatfreeError):
    def __init__(self, message: str, witness: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.witness = tuple(witness) if witness is not None else None


class BoxTooSmallError(LatfreeError):
    pass


class InvariantViolation(LatfreeError):
    """An internal consistency check failed; signals an arithmetic bug."""
