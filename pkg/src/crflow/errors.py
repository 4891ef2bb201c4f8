"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class CRFlowError(Exception):
    """Base class for all package errors."""


class NoPhysicalRoot(CRFlowError):
    pass


class UnsupportedCutoff(CRFlowError):
    pass


class NotConverged(CRFlowError):
    pass


class OrderUnsupported(CRFlowError):
    pass


class OutOfRange(CRFlowError):
    pass


class FitFailed(CRFlowError):
    pass


class LabelAmbiguity(CRFlowError):
    pass


class LabelCrossing(CRFlowError):
    pass


class MismatchClosedForm(CRFlowError):
    pass


class BranchAmbiguity(CRFlowError):
    pass


class NonUnitaryInput(CRFlowError):
    pass


class ZeroZX(CRFlowError):
    pass


class SchemaError(CRFlowError):
    pass


class UnitError(SchemaError):
    pass


@dataclass
class PoleEntry:
    """One matrix entry responsible for a vanishing denominator."""

    row: int
    col: int
    value: complex
    photons: int | None = None
    row_levels: tuple[int, ...] | None = None
    col_levels: tuple[int, ...] | None = None


class ResonancePole(CRFlowError):
    """Raised when a non-block-diagonal term sits at (near) zero frequency.

    ``frequency`` is the offending frequency in MHz. ``entries`` lists the matrix
    entries that drive it; the engine fills in level labels and photon numbers so
    the pole can be matched against the collision catalogue.
    """

    def __init__(self, frequency: float, entries: list[PoleEntry] | None = None,
                 order: int | None = None, message: str | None = None):
        self.frequency = float(frequency)
        self.entries = list(entries or [])
        self.order = order
        text = message or f"resonance pole at {self.frequency:.3e} MHz"
        if order is not None:
            text += f" (generator order {order})"
        super().__init__(text)
