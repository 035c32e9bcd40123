"""
Error hierarchy for the min-diameter toolkit.

Library code raises these; only src/main.py turns them into exit codes.
"""

from typing import Optional


class MinDiamError(Exception):
    """Root of every error raised by this package."""


class UsageError(MinDiamError):
    """Bad command-line usage or invalid settings."""


class GraphError(MinDiamError, ValueError):
    """Invalid graph input."""


class DuplicateEdge(GraphError):
    def __init__(self, u: int, v: int):
        super().__init__(f"duplicate edge ({u}, {v})")
        self.u = u
        self.v = v


class SelfLoop(GraphError):
    def __init__(self, v: int):
        super().__init__(f"self-loop on vertex {v}")
        self.v = v


class VertexOutOfRange(GraphError):
    def __init__(self, v: int, n: int):
        super().__init__(f"vertex {v} outside [0, {n})")
        self.v = v
        self.n = n


class NotADag(GraphError):
    def __init__(self, message: str = "graph contains a directed cycle"):
        super().__init__(message)


class WeightedInput(GraphError):
    def __init__(self, message: str = "operation requires an unweighted graph"):
        super().__init__(message)


class InfeasibleParams(GraphError):
    """Generator parameters that cannot be satisfied."""


class BadDimension(GraphError):
    """OV vector dimension too small for the requested instance."""


class CoverMismatch(MinDiamError):
    def __init__(self, expected: tuple, actual: tuple):
        super().__init__(
            f"neighborhood cover thresholds {actual} do not match the tester's {expected}"
        )
        self.expected = expected
        self.actual = actual


class MissingColor(MinDiamError):
    def __init__(self, message: str = "both red and blue vertices are required"):
        super().__init__(message)


class OracleTooLarge(MinDiamError):
    def __init__(self, n: int, cap: int):
        super().__init__(f"oracle refuses n={n} (cap {cap})")
        self.n = n
        self.cap = cap


class GraphFileError(MinDiamError, ValueError):
    """Malformed graph or OV text file."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.line = line
        self.column = column


class GraphSyntaxError(GraphFileError):
    pass


class InconsistentHeader(GraphFileError):
    pass


class UnknownColor(GraphFileError):
    pass
