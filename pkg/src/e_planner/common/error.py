from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from e_planner.core import Diagnostic
    from e_planner.parse import SourceSpan


class EPlannerError(Exception):
    """Base exception for all e-planner errors.

    If raised directly, more than likely, something on our side went wrong.
    """


class ValidationError(EPlannerError):
    """Input validation errors."""


class DslParseError(ValidationError):
    """Syntax or well-formedness error in a domain file or query."""

    def __init__(self, msg: str, span: SourceSpan, diagnostics: tuple[Diagnostic, ...] = ()) -> None:
        super().__init__(f"{span.line}:{span.column}: {msg}")
        self.reason = msg
        self.span = span
        self.diagnostics = diagnostics


class CapExceededError(EPlannerError):
    """An enumeration or search limit was exceeded."""

    def __init__(self, limit: str, value: int) -> None:
        super().__init__(f"{limit} exceeded (limit: {value})")
        self.limit = limit
        self.value = value


class NoPlanError(EPlannerError):
    """No (weak or safe) plan exists within the horizon."""


class EngineMismatchError(EPlannerError):
    """Two independent engines disagree (a defect, never reconciled)."""
