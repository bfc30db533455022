"""Exception hierarchy shared by all modules."""


class EntropicError(Exception):
    """Base class for errors raised by this package."""


class NotSquareError(EntropicError, ValueError):
    pass


class NotHermitianError(EntropicError, ValueError):
    def __init__(self, residual, tol):
        self.residual = float(residual)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not Hermitian: residual {self.residual:.3e} exceeds {self.tol:.3e}"
        )


class DomainError(EntropicError, ValueError):
    """An eigenvalue falls outside the domain of a matrix function."""

    def __init__(self, value, name="f"):
        self.value = float(value)
        super().__init__(f"eigenvalue {self.value!r} outside the domain of {name}")


class InvalidStateError(EntropicError, ValueError):
    pass


class InvalidPairError(EntropicError, ValueError):
    pass


class DimensionMismatchError(EntropicError, ValueError):
    pass


class UnsupportedMeasureError(EntropicError, ValueError):
    pass


class NumericalError(EntropicError, ArithmeticError):
    pass


class SpecSyntaxError(EntropicError, ValueError):
    """A state or pair spec string could not be parsed."""
