"""
Exception hierarchy shared by all services

The CLI maps DomainError to exit code 1, CapExceededError to 2 and
TheoremViolationError to 3.
"""
from typing import Any, Optional, Sequence


class EngineError(Exception):
    """Base class for every error raised by the engine"""
    exit_code: int = 1


class DomainError(EngineError):
    """Invalid input: bad spec, non-root, non-Hurwitz tuple, broken log"""
    exit_code = 1


class InvalidSpecError(DomainError):
    pass


class NotARootError(DomainError):
    pass


class DimensionMismatchError(DomainError):
    pass


class NotHurwitzError(DomainError):
    pass


class MoveIndexError(DomainError):
    pass


class PreconditionError(DomainError):
    pass


class ReplayMismatchError(DomainError):
    pass


class NotGeneratingError(DomainError):
    """Entries generate a proper reflection subgroup"""

    def __init__(self, message: str, base: Sequence[Sequence[int]], subsystem: Optional[str] = None):
        super().__init__(message)
        self.base = [list(axis) for axis in base]
        self.subsystem = subsystem


class CapExceededError(EngineError):
    """A search or closure grew past its configured cap"""
    exit_code = 2

    def __init__(self, cap_name: str, cap: int, what: str):
        super().__init__(f"{what} exceeded {cap_name}={cap}; result would be truncated")
        self.cap_name = cap_name
        self.cap = cap
        self.what = what


class TheoremViolationError(EngineError):
    """A checked theorem failed; indicates an implementation bug"""
    exit_code = 3

    def __init__(self, message: str, details: Any = None):
        super().__init__(message)
        self.details = details
