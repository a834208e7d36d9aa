"""Exception and warning types raised across the package."""


class PDMError(Exception):
    """Base class for all domain errors."""


class ConstraintViolation(PDMError, ValueError):
    def __init__(self, index, constraint, value=None):
        self.index = index
        self.constraint = constraint
        self.value = value
        where = "ordering" if index is None else f"term {index}"
        msg = f"{where}: {constraint} violated"
        if value is not None:
            msg += f" (got {value!r})"
        super().__init__(msg)


class UnknownScheme(PDMError, KeyError):
    def __str__(self):
        return f"unknown ordering scheme: {self.args[0]!r}"


class SingularPoint(PDMError, ValueError):
    pass


class ImaginaryMu(PDMError, ValueError):
    def __init__(self, radicand):
        self.radicand = radicand
        super().__init__(f"imaginary mu: radicand = {radicand:.12g}")


class WrongRegime(PDMError, ValueError):
    pass


class InvalidAmplitude(PDMError, ValueError):
    pass


class SingularOrdering(PDMError, ValueError):
    pass


class MuOutOfRange(PDMError, ValueError):
    pass


class NoBoundStates(PDMError, ValueError):
    pass


class PoleAtNonPositiveInteger(PDMError, ValueError):
    pass


class BadParameters(PDMError, ValueError):
    pass


class NoConvergence(PDMError, ArithmeticError):
    pass


class IntegrationFailure(PDMError, ArithmeticError):
    pass


class SingularCoefficient(IntegrationFailure):
    pass


class NonFiniteSample(PDMError, ArithmeticError):
    pass


class DimensionMismatch(PDMError, ValueError):
    pass


class TailWarning(UserWarning):
    """Truncated-domain eigenfunction tail has not decayed far enough."""
