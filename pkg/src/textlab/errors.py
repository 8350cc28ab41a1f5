"""Exception types shared across the package.

The CLI maps these onto stable exit codes: ConfigError -> 2,
DataError -> 3, NumericError -> 4.
"""


class ConfigError(ValueError):
    """Invalid, unknown, or ill-typed configuration."""


class DataError(ValueError):
    """Malformed dataset input.

    ``line`` is the 1-based line number of the offending record when the
    error originates from a file, otherwise None.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericError(ArithmeticError):
    """A non-finite value appeared where a finite one is required."""


class ShapeError(ValueError):
    """Operand shapes are incompatible for the requested operation."""
