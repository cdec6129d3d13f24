# app/errors.py
from __future__ import annotations

from typing import Any, Sequence


class WorkbenchError(Exception):
    """Root of every error the workbench raises on purpose. `exit_code` is what the CLI returns."""

    exit_code = 1


class ScalarParseError(WorkbenchError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at column {position + 1} in {text!r}")


class DimensionMismatch(WorkbenchError):
    pass


class SingularTransform(WorkbenchError):
    exit_code = 2


class NonAssociativeError(WorkbenchError):
    """A component failed the associativity check; `report` holds the nonzero associators."""

    exit_code = 2

    def __init__(self, name: str, report: Any):
        self.name = name
        self.report = report
        first = report.entries[0]
        super().__init__(
            f"{name} is not associative: defect at (e{first.i + 1}, e{first.j + 1}, e{first.k + 1})"
        )


class SpecializationObstruction(WorkbenchError):
    """Elimination needed a pivot that is a nonconstant polynomial in the algebra parameters."""

    exit_code = 2

    def __init__(self, pivots: Sequence[Any]):
        self.pivots = tuple(pivots)
        shown = ", ".join(str(p) for p in self.pivots)
        super().__init__(f"rank depends on parameter values; symbolic pivots: {shown}")


class UnknownAlgebra(WorkbenchError):
    pass


class UnsupportedDimension(WorkbenchError):
    pass


class UnknownInvariant(WorkbenchError):
    pass


class LimitExceeded(WorkbenchError):
    pass


class DocumentError(WorkbenchError):
    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class SoundnessError(WorkbenchError):
    """An internal re-check disagreed with a computed answer."""

    exit_code = 3


class InvalidArgument(WorkbenchError):
    pass
