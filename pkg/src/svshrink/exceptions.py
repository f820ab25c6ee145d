class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class CrossingError(RuntimeError):
    """No loss crossing could be located for a supplied loss family."""


class SVDConvergenceError(RuntimeError):
    """The singular value decomposition did not converge."""


class MinimizerError(RuntimeError):
    """A one-dimensional minimization left its admissible interval."""
