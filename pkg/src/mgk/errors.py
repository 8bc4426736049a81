"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain where the requested formula is valid."""


class PoleError(DomainError):
    """Argument sits on (or numerically too close to) a pole or zero."""


class ParameterError(ValueError):
    """A truncation or order parameter is incompatible with the method."""


class NonDecayingIntegrandError(ArithmeticError):
    """An improper integral over [a, inf) shows no decay across panels."""
