"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when arguments violate a documented precondition."""


class UnsupportedInputError(ValueError):
    """Raised when an input is valid but outside what the engine can evaluate."""


class ParseError(InvalidInputError):
    """Syntax error in a form, field or scenario expression."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
