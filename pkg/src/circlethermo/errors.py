"""Exception types shared across the toolkit."""


class InvalidMapError(ValueError):
    """The map data does not describe a circle local diffeomorphism."""


class BranchSolverError(RuntimeError):
    """Inverse-branch solve left a residual above tolerance (malformed map)."""


class ConvergenceError(RuntimeError):
    """Iterative eigensolver exhausted its budget (gap ratio near 1)."""


class PerronStructureError(RuntimeError):
    """Leading eigenvalue is not real/simple/positive, or the eigenfunction
    is not strictly positive."""


class NoSignStructureError(RuntimeError):
    """Pressure has no zero on the search interval (no transition bracket)."""


class BudgetError(ValueError):
    """Requested orbit enumeration exceeds the itinerary budget."""


class ConfigError(ValueError):
    """CLI configuration document is malformed or fails validation."""
