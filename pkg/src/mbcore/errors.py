"""Exception hierarchy.

Errors fall into two families that the CLI maps to distinct exit codes:
``InputError`` (malformed or invalid input, exit 1) and ``RefusedError``
(well-formed input for which a computation is declined, exit 2).
"""


class MBCoreError(Exception):
    pass


class InputError(MBCoreError, ValueError):
    """Invalid input. ``field`` names the offending location when known."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class FieldMismatchError(MBCoreError, ArithmeticError):
    pass


class UnsupportedFieldError(InputError):
    pass


class OrientationError(InputError):
    pass


class RefusedError(MBCoreError):
    pass
