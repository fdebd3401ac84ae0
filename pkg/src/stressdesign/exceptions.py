"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class DegenerateConfigurationError(ValueError):
    """The augmented configuration matrix is rank deficient."""


class InvalidHyperparametersError(ValueError):
    """The (alpha, beta, gamma) triple cannot define a feasible design problem."""
