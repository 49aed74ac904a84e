from typing import Optional

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3


class PCombineError(Exception):
    """Base class for every error raised by pcombine."""


class DomainError(PCombineError, ValueError):
    """An input lies outside the domain of the formula being evaluated."""


class ConfigurationError(PCombineError, ValueError):
    """An invalid combination of method, kind, mode or experiment settings."""


class UnsupportedMethodError(ConfigurationError):
    def __init__(self, method: str, kind: str, supported: list[str]):
        self.method = method
        self.kind = kind
        self.supported = supported
        super().__init__(
            f"{kind} threshold not implemented for this method ({method}); "
            f"supported: {', '.join(supported)}"
        )


class RootFindingError(PCombineError, ArithmeticError):
    def __init__(self, message: str, lo: float, hi: float):
        self.lo = lo
        self.hi = hi
        super().__init__(f"{message} (scanned interval [{lo:.6g}, {hi:.6g}])")


class IntegrationError(PCombineError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class IngestionError(PCombineError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None, value: str = ""):
        self.line = line
        self.value = value
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
