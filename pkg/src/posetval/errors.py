"""Exception types shared across the package."""

from __future__ import annotations


class PosetvalError(Exception):
    """Base class for all library errors."""


class CycleDetected(PosetvalError):
    """The declared cover relation is not acyclic."""

    def __init__(self, cycle: list[str]):
        self.cycle = list(cycle)
        super().__init__("cover relation contains a cycle: " + " -> ".join(self.cycle))


class UnknownElement(PosetvalError):
    """An element identifier does not belong to the poset."""


class EmptyPoset(PosetvalError):
    """The operation needs at least one element."""


class NotBounded(PosetvalError):
    """The operation needs both a bottom and a top element."""


class ParseError(PosetvalError):
    """Malformed input file."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class NonMonotone(PosetvalError):
    """The function is neither isotone nor antitone."""


class PreconditionUnmet(PosetvalError):
    """A checker's structural precondition does not hold."""


class WeightPosetMismatch(PosetvalError):
    """A per-element mapping is not total over the poset's elements."""


class ZeroScale(PosetvalError):
    """Affine scale factor must be nonzero."""


class NonPositiveValue(PosetvalError):
    """Logarithm requested of a value that is not strictly positive."""


class RowMismatch(PosetvalError):
    """The valuation fits no distance-formula row."""


class DomainConditionFailed(PosetvalError):
    """A row's ideal/filter nonemptiness condition fails."""


class NotNormalized(PosetvalError):
    """Weights were expected to sum to one."""


class EmptyFilterIntersection(PosetvalError):
    """Two elements share no upper bound."""


class UnknownTarget(PosetvalError):
    """Unrecognized counterexample-search target."""


class UnknownName(PosetvalError):
    """Unrecognized fixture or group name."""


class OrderCapExceeded(PosetvalError):
    """Group order exceeds the enumeration cap."""


class InvalidGroup(PosetvalError):
    """Multiplication table does not define a group."""
