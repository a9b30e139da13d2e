"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's preconditions."""


class InvalidSpecError(InvalidInputError):
    """Raised for structurally invalid configurations (e.g. even branch count)."""


class NumericFailure(RuntimeError):
    """A pipeline stage produced non-finite values.

    ``stage`` names the step that failed so the CLI can report it.
    """

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
