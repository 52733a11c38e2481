"""Exception types shared across the verification pipeline."""


class AmortError(Exception):
    """Base class for all verification-layer errors."""


class NonCommutativeTensor(AmortError):
    """Combining costs of parallel states needs a commutative cost monoid."""


class BadWeights(AmortError):
    """Distribution weights must be positive exact rationals summing to 1."""


class ArityMismatch(AmortError):
    """Number of input states does not match the method signature."""


class UnknownMethod(AmortError):
    """Method name absent from a coalgebra's signature table."""


class OrderUnavailable(AmortError):
    """Colax (inequality) checking needs an ordered cost monoid."""


class UnsupportedArity(AmortError):
    """Operation restricted to 1-in/1-out methods (traces, pairing)."""


class StepBudgetExceeded(AmortError):
    """A translation program exceeded its substrate-call budget."""


class StateInvariantViolation(AmortError):
    """A seed or explored successor state broke the carrier invariant."""


class TraceParseError(AmortError):
    """Malformed trace file; carries a line/column diagnostic."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
