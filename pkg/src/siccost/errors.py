"""Exception hierarchy shared by the library and the CLI."""


class SiccostError(Exception):
    """Base class for all errors raised by siccost."""


class DomainError(SiccostError, ValueError):
    """A computation was asked for outside its mathematical domain."""


class ValidationError(DomainError):
    """A value object violates one of its invariants.

    ``path`` is the dotted field path of the offending value, e.g.
    ``die.die_area`` or ``losses.mifare.exploited_fraction``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")

    def prefixed(self, prefix: str) -> "ValidationError":
        return ValidationError(f"{prefix}.{self.path}", str(self).split(": ", 1)[1])


class ParseError(SiccostError):
    """A scenario file could not be read into the expected tree shape."""

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(path)
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class UsageError(SiccostError):
    """The CLI was invoked with an unknown subcommand or missing inputs."""
