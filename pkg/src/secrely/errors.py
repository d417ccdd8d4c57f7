"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class SecrelyError(Exception):
    """Base class for all library errors."""


class RangeError(SecrelyError, ValueError):
    """A configuration field lies outside its admissible range."""

    def __init__(self, field, message=None):
        self.field = field
        super().__init__(message or field)


class DomainError(SecrelyError, ValueError):
    """A special-function or conversion argument is outside its domain."""


class CancellationError(SecrelyError, ArithmeticError):
    """An alternating binomial sum lost too much precision to be trusted."""


class NonFiniteError(SecrelyError, ArithmeticError):
    """A closed-form evaluation produced a non-finite intermediate."""


class ConvergenceError(SecrelyError, ArithmeticError):
    """Adaptive quadrature exhausted its subdivision budget.

    The best available estimate is kept on the exception so callers can
    decide whether it is still usable.
    """

    def __init__(self, message, value, est_error):
        self.value = value
        self.est_error = est_error
        super().__init__(f"{message} (value={value!r}, est_error={est_error:.3e})")
