"""Exception types shared across the package."""


class RefusalError(RuntimeError):
    """An estimator declined to run because its preconditions do not hold."""


class BudgetExceededError(RefusalError):
    """Exact enumeration would need more evaluations than the budget allows."""

    def __init__(self, required: int, budget: int):
        self.required = int(required)
        self.budget = int(budget)
        super().__init__(f"exact enumeration needs {self.required} evaluations, "
                         f"budget is {self.budget}")


class CorrelatedNoiseError(RefusalError):
    """Exact enumeration cannot integrate this correlated observation model."""


class QuadratureToleranceError(RuntimeError):
    """Adaptive integration stopped short of the requested tolerance."""

    def __init__(self, achieved: float, requested: float):
        self.achieved = float(achieved)
        self.requested = float(requested)
        super().__init__(f"quadrature reached {self.achieved:.3e}, "
                         f"requested {self.requested:.3e}")


class GridMismatchError(ValueError):
    """Two result sets (or a resume target) do not describe the same grid."""
