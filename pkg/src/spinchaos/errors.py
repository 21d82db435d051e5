"""Exception types shared across the package."""


class SpinChaosError(Exception):
    """Base class for package errors."""


class DimensionMismatch(SpinChaosError):
    """Operands describe systems of different size N."""


class MemoryBudget(SpinChaosError):
    """A requested allocation exceeds the configured entry budget."""


class BudgetExceeded(SpinChaosError):
    """Every available strategy for an operation exceeds its work cap."""


class InsufficientReplicas(SpinChaosError):
    """Sampled data holds fewer replicas than the functional needs."""


class InvalidWitness(SpinChaosError):
    """A candidate dense index subset is not contained in the index set."""
