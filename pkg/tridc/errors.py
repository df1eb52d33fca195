from typing import Optional


class TridcError(Exception):
    """Base class of every error raised by tridc."""


class DecoupledMatrixError(TridcError, ValueError):
    """A proposed cut sits on an off-diagonal entry that is exactly zero."""

    def __init__(self, index: int):
        super().__init__(
            f"off-diagonal entry {index} is zero, the matrix decouples at this cut"
        )
        self.index = index


class ParseError(TridcError, ValueError):
    def __init__(self, message: str, path: Optional[str] = None, lineno: Optional[int] = None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)
        self.path = path
        self.lineno = lineno


class ValidationError(TridcError, ValueError):
    pass


class PoleError(TridcError, ValueError):
    """The secular function was evaluated on one of its poles."""


class SolverError(TridcError, RuntimeError):
    pass


class ConvergenceError(SolverError):
    pass


class ClassificationError(SolverError):
    pass


class RootExtractionError(SolverError):
    pass


class DegenerateSystemError(SolverError):
    pass


class InternalConsistencyError(SolverError):
    pass
