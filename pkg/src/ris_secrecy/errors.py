"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid input value. ``field`` names the offending parameter."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class AssumptionViolation(ValueError):
    """A model assumption required by an analytical result does not hold."""


class DegenerateCascadeError(ArithmeticError):
    """The effective RIS cascade toward Bob vanishes, so MRT is undefined."""
