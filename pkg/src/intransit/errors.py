"""Exception hierarchy shared across the toolkit."""


class IntransitError(Exception):
    """Base class for all toolkit errors."""


class InstanceError(IntransitError):
    """Instance data violates a structural invariant."""


class SchemaError(InstanceError):
    """An input file does not conform to its expected schema."""


class ModelError(IntransitError):
    """Model assembly failed or was handed an invalid instance."""


class SolverError(IntransitError):
    """Numerical breakdown inside a solver; never raised silently."""


class InfeasibleInstanceError(IntransitError):
    """The instance admits no feasible schedule."""
