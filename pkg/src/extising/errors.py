"""Exception hierarchy shared by all modules."""


class ExtIsingError(Exception):
    """Base class for every error raised by this package."""


class InvalidChainError(ExtIsingError, ValueError):
    pass


class DomainError(ExtIsingError, ValueError):
    pass


class DegenerateModeError(ExtIsingError, ArithmeticError):
    """A quantity divides by a vanishing single-fermion energy."""

    def __init__(self, k, message=None):
        self.k = k
        super().__init__(message or f"Lambda_k vanishes at k={k}")


class UnsupportedRegimeError(ExtIsingError, ValueError):
    pass


class ConstraintViolationError(ExtIsingError, ValueError):
    pass


class CapacityError(ExtIsingError, ValueError):
    pass


class UnsupportedInteractionError(ExtIsingError, ValueError):
    pass


class SolverError(ExtIsingError, RuntimeError):
    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class InsufficientClausesError(ExtIsingError, ValueError):
    pass


class ConfigError(ExtIsingError, ValueError):
    pass
