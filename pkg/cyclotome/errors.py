"""Exception hierarchy for cyclotome.

Every error is a ``ValueError`` so callers that only guard against bad
values keep working; the subclasses carry the structured context that the
command-line reports print.
"""

from typing import Any, Dict, List, Optional


class CyclotomeError(ValueError):
    """Base class for all cyclotome errors."""


# arithmetic


class NotCoprime(CyclotomeError):
    """Raised when an order or index is requested for a non-unit."""

    def __init__(self, a: int, n: int):
        super().__init__(f"gcd({a}, {n}) != 1")
        self.a = a
        self.n = n


class NotSquarefree(CyclotomeError):
    """Raised when a class number is requested for a non-squarefree radicand."""


class NoSolution(CyclotomeError):
    """Raised when the norm equation has no solution."""


class PCongruenceFails(CyclotomeError):
    """Raised when every norm-equation solution has b or c divisible by p."""


class OutOfRange(CyclotomeError):
    """Raised for an element or index outside its table."""


# fields


class SizeExceeded(CyclotomeError):
    """Raised when a field is too large to materialize."""

    def __init__(self, q: int, limit: int):
        super().__init__(f"q = {q} exceeds the materialization limit {limit}")
        self.q = q
        self.limit = limit


class NotPrimitive(CyclotomeError):
    """Raised when the chosen modulus does not generate the full multiplicative group."""


# constructions


class ConditionViolation(CyclotomeError):
    """Raised when an operation needs hypotheses that do not hold."""

    def __init__(self, message: str, failed: Optional[List[str]] = None):
        super().__init__(message)
        self.failed = failed or []


class NonIntegral(CyclotomeError):
    """Raised when a closed-form eigenvalue is not an integer."""


class SetupMismatch(CyclotomeError):
    """Raised when a cyclotomic setup does not match the construction parameters."""


class SizeInvariantViolation(CyclotomeError):
    """Raised when a connection set has the wrong size."""


class PartitionViolation(CyclotomeError):
    """Raised when relations built for a scheme do not partition the nonzero elements."""


# verification


class NotSymmetric(CyclotomeError):
    """Raised when a connection set is not closed under negation."""


class NotTwoValued(CyclotomeError):
    """Raised when a restricted spectrum does not have exactly two values."""

    def __init__(self, values: List[str]):
        super().__init__(f"expected 2 restricted eigenvalues, found {len(values)}: {values}")
        self.values = values


class NotSrg(CyclotomeError):
    """Raised by the brute-force checker with a violating pair."""

    def __init__(self, message: str, pair: Optional[tuple] = None):
        super().__init__(message)
        self.pair = pair


class SkewSplitFails(CyclotomeError):
    """Raised when D, -D and {0} do not partition the field."""


class DifferenceCensusFails(CyclotomeError):
    """Raised when some nonzero element has the wrong number of difference representations."""

    def __init__(self, element: int, count: int, expected: int):
        super().__init__(f"element {element} represented {count} times, expected {expected}")
        self.element = element
        self.count = count
        self.expected = expected


class SpectrumMismatch(CyclotomeError):
    """Raised when exact character values disagree with the predicted ones."""


class SymmetryFails(CyclotomeError):
    """Raised when a Paley-type candidate is not symmetric or has the wrong size."""


class NotPartition(CyclotomeError):
    """Raised when scheme relations do not partition the nonzero elements."""


class AxiomFails(CyclotomeError):
    """Raised when an intersection number p_ij^k is not well defined."""

    def __init__(self, i: int, j: int, k: int):
        super().__init__(f"intersection number p_{i}{j}^{k} is not constant")
        self.i = i
        self.j = j
        self.k = k


class GaussMismatch(CyclotomeError):
    """Raised when no global sign of c reconciles predicted and computed Gauss sums."""

    def __init__(self, message: str, report: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.report = report or {}


# export


class TooLargeForFormat(CyclotomeError):
    """Raised when a graph is too large for the requested export format."""
