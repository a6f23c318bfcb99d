"""Exception types raised across the package."""


class ParameterError(ValueError):
    """A parameter lies outside the domain an operation accepts."""


class ContinuityError(ParameterError):
    """Requested derivative order exceeds what the cascade supports (n > K - 2)."""


class DomainError(ValueError):
    """A closed-form map is evaluated outside the region where it exists."""


class StateError(ValueError):
    """Recursive filter state does not match the cascade it is used with."""


class JetError(KeyError):
    """A feature needs a partial derivative that the jet does not hold."""


class WarmupError(RuntimeError):
    """Not enough temporal history has been buffered yet."""


class NumericError(ArithmeticError):
    """A numerical procedure failed to produce a trustworthy result."""
