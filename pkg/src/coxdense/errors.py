"""Exception types shared by the library and the CLI."""


class CoxeterError(Exception):
    """Base class for every error raised by coxdense."""


class DiagramSyntaxError(CoxeterError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidCoxeterMatrix(CoxeterError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid Coxeter matrix: " + "; ".join(self.violations))


class SubsetError(CoxeterError, ValueError):
    """A generator subset refers to bits or labels outside the system."""


class PreconditionError(CoxeterError, ValueError):
    """An operation was called outside its domain."""


class NumericalAmbiguity(CoxeterError, ArithmeticError):
    """A root vector could not be certified positive or negative."""


class ResourceLimit(CoxeterError):
    """A Cayley ball would exceed the configured element cap."""
