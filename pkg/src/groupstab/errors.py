"""Exception types shared across the toolkit."""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all groupstab errors."""


class AxiomViolation(ToolkitError):
    """A Cayley table failed one of the group axioms.

    Carries the name of the failing axiom and a witness tuple of element
    indices that exhibits the failure.
    """

    def __init__(self, axiom: str, witness: tuple[int, ...], detail: str = ""):
        self.axiom = axiom
        self.witness = witness
        msg = f"group axiom {axiom!r} fails at witness {witness}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class CrossGroupElement(ToolkitError):
    """An element of one group was used in an operation of another."""


class BudgetExceeded(ToolkitError):
    """A work budget was exhausted before the operation could finish."""

    def __init__(self, required: int, budget: int, what: str = "work units"):
        self.required = required
        self.budget = budget
        super().__init__(f"operation needs {required} {what}, budget is {budget}")


class PairOutsideCarrier(ToolkitError):
    """A relation pair falls outside the declared carrier sets."""


class CarrierMismatch(ToolkitError):
    """Two relations with different carriers were combined."""


class ArityMismatch(ToolkitError):
    """A shift or carrier has the wrong arity for the requested operation."""


class ArityUnsupported(ToolkitError):
    """The census is only defined for lower-arity carriers."""


class NonAbelianGroup(ToolkitError):
    """The operation requires an abelian group."""


class EmptyCarrier(ToolkitError):
    """Carrier normalization was requested over an empty carrier product."""


class IndexOutOfRange(ToolkitError):
    """A coset or element index is out of range."""
