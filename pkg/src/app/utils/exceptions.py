class CaError(Exception):
    """Base class for all errors raised by the library."""


class GraphFormatError(CaError, ValueError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ProbabilityModelError(CaError, ValueError):
    pass


class OracleCapExceeded(CaError, ValueError):
    pass


class MemoryBudgetExceeded(CaError, MemoryError):
    def __init__(self, estimate_bytes, budget_bytes):
        super().__init__(
            f"RR index needs about {estimate_bytes} bytes, budget is {budget_bytes} bytes"
        )
        self.estimate_bytes = estimate_bytes
        self.budget_bytes = budget_bytes


class InfeasibleError(CaError):
    """SM-CA requirement cannot be met; carries what was achieved."""

    def __init__(self, message, achieved=0, report=None):
        super().__init__(message)
        self.achieved = achieved
        self.report = report


class ConvergenceError(CaError):
    pass


class ConfigError(CaError, ValueError):
    pass


class SnapshotError(CaError, ValueError):
    pass


class IndexMismatchError(CaError, ValueError):
    """A prebuilt RR index was sampled for another target set or theta."""
