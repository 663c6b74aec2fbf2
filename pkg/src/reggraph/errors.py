"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GraphError(Exception):
    """Base class for domain errors; the CLI maps these to exit code 1."""

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        super().__init__(message)

    @property
    def kind(self) -> str:
        return type(self).__name__

    def __str__(self) -> str:
        msg = super().__str__()
        if self.line is not None:
            where = f"line {self.line}" if self.column is None else f"line {self.line}, column {self.column}"
            return f"{msg} ({where})"
        return msg


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class EdgeTypeViolation(GraphError):
    pass


class CycleViolation(GraphError):
    pass


class UnknownLabel(GraphError):
    pass


class InvalidLabel(GraphError):
    pass


class GraphSyntaxError(GraphError):
    pass


class NotIncident(GraphError):
    pass


class MissingEdge(GraphError):
    pass


class NotAPath(GraphError):
    pass


class BadSets(GraphError):
    pass


class NodeSetMismatch(GraphError):
    pass


class NotOrientable(GraphError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class InternalInvariantViolation(GraphError):
    pass


class TooLarge(GraphError):
    pass


class NumericalFailure(GraphError):
    pass


class SingularConditioningBlock(GraphError):
    pass
