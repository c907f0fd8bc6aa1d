"""Exception hierarchy.

Two families matter for the CLI exit-code contract: input errors
(bad files, bad schemas) exit with code 2, computation errors
(degenerate groups, invalid arguments) with code 3.
"""


class FairdistError(Exception):
    """Base class for all library errors."""


class DataInputError(FairdistError):
    """A problem with an input file or its declared schema (CLI exit 2)."""


class SchemaMismatch(DataInputError):
    pass


class ParseError(DataInputError):
    def __init__(self, line: int, column: str, message: str):
        super().__init__(f"line {line}, column {column!r}: {message}")
        self.line = line
        self.column = column


class MissingValue(DataInputError):
    def __init__(self, line: int, column: str):
        super().__init__(f"line {line}, column {column!r}: missing value")
        self.line = line
        self.column = column


class IoError(DataInputError):
    pass


class ComputationError(FairdistError):
    """A computation could not be carried out (CLI exit 3)."""


class InvalidArgument(ComputationError):
    pass


class DimensionError(ComputationError):
    pass


class UnsupportedAttributeArity(ComputationError):
    pass


class EmptyGroup(ComputationError):
    pass


class MissingPredictions(ComputationError):
    pass


class UndefinedRate(ComputationError):
    pass


class UndefinedCorrelation(ComputationError):
    pass
