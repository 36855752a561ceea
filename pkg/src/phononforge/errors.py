"""Exception hierarchy.

Validation problems subclass ``ValueError`` so they behave like ordinary bad
arguments; numerical failures share ``NumericalError`` so the CLI can map them
to a single exit code.
"""


class PhononForgeError(Exception):
    pass


class InvalidDimensionError(PhononForgeError, ValueError):
    pass


class InvalidParameterError(PhononForgeError, ValueError):
    pass


class NumericalError(PhononForgeError, ArithmeticError):
    pass


class TruncationError(NumericalError):
    """Raised when a state has too much weight near the top of the Fock cutoff."""

    def __init__(self, message, required_dim=None):
        super().__init__(message)
        self.required_dim = required_dim


class HeraldingImpossibleError(NumericalError):
    pass


class UnsolvableError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, message, iterations=None, max_correction=None):
        super().__init__(message)
        self.iterations = iterations
        self.max_correction = max_correction


class NumericalIntegrityError(NumericalError):
    pass
