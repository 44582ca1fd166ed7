"""Exception taxonomy shared across the package."""


class EvoforgeError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(EvoforgeError):
    """A function references a variable index outside the ambient dimension."""


class EnumerationBudgetError(EvoforgeError):
    """Exact enumeration was requested for a dimension too large to enumerate."""


class KMismatchError(EvoforgeError):
    """Two DNFs that must share a clause count do not."""


class ContractError(EvoforgeError):
    """A representation class violated a structural contract mid-run."""


class ParameterError(EvoforgeError):
    """An evolution or experiment parameter is outside its legal range."""


class ConfigError(EvoforgeError):
    """Configuration text failed to parse or validate.

    `line` is the 1-based line number when the failure is tied to one.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
