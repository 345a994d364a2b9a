"""Exception types shared across the pipeline.

Everything a user can cause (bad files, bad flags, bad data) derives from
:class:`InputError` and maps to CLI exit code 1. :class:`InvariantError`
signals a bug in this package and maps to exit code 2.
"""


class InputError(ValueError):
    """Invalid user-supplied data or arguments."""


class DecodeError(InputError):
    """An image file could not be decoded."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class FormatError(InputError):
    """A CSV or config file does not follow its schema."""

    def __init__(self, message, line=None, path=None):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{':'.join(where)}: {message}"
        super().__init__(message)
        self.line = line


class IngestionError(InputError):
    """A dataset directory could not be turned into a manifest."""


class InvariantError(RuntimeError):
    """An internal consistency check failed."""


class ImageReadError(InputError, OSError):
    """An image path could not be opened or its format is unsupported."""
