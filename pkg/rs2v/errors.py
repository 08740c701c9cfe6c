class Rs2vError(Exception):
    """Base class for every error raised by rs2v."""


class ConfigError(Rs2vError, ValueError):
    pass


class NotARotation(Rs2vError, ValueError):
    pass


class DegenerateOrigin(Rs2vError, ValueError):
    pass


class DegenerateGeometry(Rs2vError, ValueError):
    pass


class TruncatedRecord(Rs2vError, ValueError):
    pass


class WrongFrame(Rs2vError, ValueError):
    pass


class UnknownTarget(Rs2vError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class DuplicateTarget(Rs2vError, ValueError):
    pass


class LabelLengthMismatch(Rs2vError, ValueError):
    pass


class EmptyInput(Rs2vError, ValueError):
    pass


class ParseError(Rs2vError, ValueError):
    def __init__(self, message: str, line: int = None, path: str = None):
        self.line = line
        self.path = path
        where = f"{path}:" if path else ""
        prefix = f"{where}line {line}: " if line is not None else where
        super().__init__(f"{prefix}{message}")
