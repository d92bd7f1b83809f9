"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`EprCertError`; each subclass carries the process exit code the CLI
uses when it escapes a subcommand.
"""


class EprCertError(Exception):
    exit_code = 1


class ParseError(EprCertError):
    exit_code = 3

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ShapeError(EprCertError):
    exit_code = 4


class EmptyHistogram(EprCertError):
    exit_code = 5


class NormalizationError(EprCertError):
    exit_code = 6


class KindMismatch(EprCertError):
    exit_code = 7


class DomainError(EprCertError, ValueError):
    exit_code = 8


class DirectionMismatch(EprCertError):
    exit_code = 9


class EmptyInput(EprCertError):
    exit_code = 10


class TruncationError(EprCertError):
    exit_code = 11


class NumericalError(EprCertError):
    exit_code = 12
