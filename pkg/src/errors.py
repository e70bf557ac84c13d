"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class Su11Error(Exception):
    """Base class for every error raised by the interferometer engine."""

    exit_code: int = 1


class ConfigValidationError(Su11Error):
    """One or more configuration invariants are violated."""

    exit_code = 2

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid configuration: " + "; ".join(self.violations))

    def __reduce__(self) -> tuple[type, tuple[list[str]]]:
        return type(self), (self.violations,)


class DomainError(Su11Error, ValueError):
    """An argument lies outside the domain of an operation."""

    exit_code = 2


class AnalyticDomainError(DomainError):
    """Closed-form expressions are not trusted for this input."""


class WrongOperationError(DomainError):
    """Lossless operation given a lossy configuration, or the reverse."""


class StationaryPointError(Su11Error, ArithmeticError):
    """The phase derivative of the observable vanishes."""

    exit_code = 2

    def __init__(self, message: str = "stationary point: sensitivity undefined"):
        super().__init__(message)


class DegenerateStatisticsError(Su11Error, ArithmeticError):
    """Number statistics give a vanishing Fisher-information denominator."""

    exit_code = 2


class OptimumError(Su11Error):
    """The phase landscape has no usable minimum."""

    exit_code = 2


class TruncationError(Su11Error):
    """The truncated Fock space cannot hold the state within budget."""

    exit_code = 3

    def __init__(self, message: str, suggested_n_max: int | None = None):
        self.suggested_n_max = suggested_n_max
        self.detail = message
        if suggested_n_max is not None:
            message = f"{message} (suggested n_max >= {suggested_n_max})"
        super().__init__(f"truncation budget exceeded: {message}")

    def __reduce__(self) -> tuple[type, tuple[str, int | None]]:
        # Rebuilt in worker-pool parents from the undecorated message.
        return type(self), (self.detail, self.suggested_n_max)


class OutputError(Su11Error):
    """Writing a result file failed."""

    exit_code = 4
