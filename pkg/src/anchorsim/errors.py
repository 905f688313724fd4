"""Exception types shared across the package.

Two families matter to callers: ``SchemaError`` for malformed input
documents (CLI exit code 2) and ``ModelError`` for violated physical or
contract preconditions (CLI exit code 1).
"""


class AnchorsimError(Exception):
    """Base class for all anchorsim errors."""


class ModelError(AnchorsimError, ValueError):
    """A model precondition or contract was violated (bad depth, mode, range)."""


class SchemaError(AnchorsimError, ValueError):
    """An input document failed to parse or validate.

    Carries enough context to point the user at the offending location.
    """

    def __init__(self, message, *, source=None, line=None, field=None):
        self.source = source
        self.line = line
        self.field = field
        parts = []
        if source is not None:
            parts.append(str(source))
        if line is not None:
            parts.append(f"line {line}")
        if field is not None:
            parts.append(f"field '{field}'")
        prefix = ": ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)
