class InvalidInput(ValueError):
    """Malformed or out-of-domain user input (CLI exit code 1)."""


class NumericalDomainError(ArithmeticError):
    """A numerical or physical consistency check failed (CLI exit code 2)."""


class KrausConventionError(NumericalDomainError):
    """An analytic Kraus convention produced an invalid or inequivalent set."""

    def __init__(self, message: str, t: float, convention: str, residual: float | None = None):
        super().__init__(f"{message} (t={t}, convention={convention})")
        self.t = t
        self.convention = convention
        self.residual = residual
