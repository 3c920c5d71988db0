"""Shared error types.

InputError covers malformed or out-of-contract user input (CLI exit code 2,
carrying the offending field path when known). InternalInvariantError marks a
broken internal invariant: a bug, never a user mistake (CLI exit code 3).
"""


class InputError(ValueError):
    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class InternalInvariantError(RuntimeError):
    pass
