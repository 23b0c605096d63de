"""Exception types shared across the package."""


class UsageError(ValueError):
    """Invalid parameters or inputs supplied by the caller (CLI exit code 2)."""


class CsvParseError(UsageError):
    """Malformed input file; carries the 0-based data line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"{message} (data line {line})"
        super().__init__(message)
