"""Contexts: ordered declarations and assumptions over a signature.

An entry either declares a variable at a type, declares a variable as a
member of a set expression (high level), or assumes a statement under a
warrantor name. Names are never bound twice in one context.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DuplicateName
from .nodes import Span, Statement, Term, Type
from .signature import Signature, EMPTY_SIGNATURE

_SPAN = dict(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TypeDecl:
    name: str
    ty: Type
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class SetDecl:
    """High-level declaration: name ranges over a set expression."""
    name: str
    host: Term
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class Assume:
    name: str
    stmt: Statement
    span: Span | None = field(**_SPAN)


ContextEntry = TypeDecl | SetDecl | Assume


@dataclass(frozen=True)
class Context:
    sig: Signature = EMPTY_SIGNATURE
    entries: tuple[ContextEntry, ...] = ()

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def lookup(self, name: str) -> ContextEntry | None:
        for e in reversed(self.entries):
            if e.name == name:
                return e
        return None

    def assumption(self, name: str) -> Assume | None:
        e = self.lookup(name)
        return e if isinstance(e, Assume) else None

    def prefix_before(self, name: str) -> "Context":
        """The context strictly preceding the named entry."""
        for i, e in enumerate(self.entries):
            if e.name == name:
                return Context(self.sig, self.entries[:i])
        raise KeyError(name)

    def snoc(self, entry: ContextEntry) -> "Context":
        return Context(self.sig, self.entries + (entry,))

    def pop(self) -> tuple["Context", ContextEntry]:
        if not self.entries:
            raise IndexError("empty context")
        return Context(self.sig, self.entries[:-1]), self.entries[-1]

    def is_low_level(self) -> bool:
        from .nodes import is_low_level
        return all(
            not isinstance(e, SetDecl)
            and (not isinstance(e, Assume) or is_low_level(e.stmt))
            for e in self.entries
        )

    def __len__(self) -> int:
        return len(self.entries)


def extend_context(ctx: Context, entry: ContextEntry) -> Context:
    """Append an entry, validating it against the context.

    The payload is checked meaningful in the existing context and the
    name checked fresh.
    """
    from .wellformed import check_entry
    if entry.name in ctx.names():
        raise DuplicateName(f"{entry.name} is already bound", subject=entry)
    if entry.name in ctx.sig.symbol_names():
        raise DuplicateName(
            f"{entry.name} clashes with a declared symbol", subject=entry
        )
    check_entry(ctx, entry)
    return ctx.snoc(entry)
