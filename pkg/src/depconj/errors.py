"""Shared error types for syntax-level checking and elaboration."""
from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .syntax.nodes import Span


class Diagnostic(Exception):
    """A well-formedness failure, pinned to the offending construct."""

    code = "Diagnostic"

    def __init__(self, message: str, subject=None, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.subject = subject
        self.span = span if span is not None else getattr(subject, "span", None)

    def __str__(self) -> str:
        loc = f" at {self.span}" if self.span is not None else ""
        return f"{self.code}{loc}: {self.message}"


class UnboundVar(Diagnostic):
    code = "UnboundVar"


class UnboundWarrantor(Diagnostic):
    code = "UnboundWarrantor"


class SchemaMismatch(Diagnostic):
    code = "SchemaMismatch"


class TypeMismatch(Diagnostic):
    code = "TypeMismatch"


class DuplicateName(Diagnostic):
    code = "DuplicateName"


class IllFormedEntry(Diagnostic):
    code = "IllFormedEntry"


class ContainsDescription(Diagnostic):
    code = "ContainsDescription"


class HostUnresolvable(Diagnostic):
    code = "HostUnresolvable"


class NoWarrantorInScope(UnboundWarrantor):
    """A warrant slot stayed open: nothing in scope warrants the schema."""

    code = "UnboundWarrantor"


class UnsupportedJudgment(Diagnostic):
    code = "UnsupportedJudgment"
