"""Signatures: base types, function symbols, predicate symbols.

Function symbols take ordinary term parameters and warrant parameters. A
warrant parameter carries a statement schema over the preceding
parameters; call sites must supply a reference to an in-scope assumption
whose statement matches the instantiated schema.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .nodes import Statement, Type


@dataclass(frozen=True)
class TermParam:
    name: str
    ty: Type


@dataclass(frozen=True)
class WarrantParam:
    name: str
    schema: Statement


Param = TermParam | WarrantParam


@dataclass(frozen=True)
class FunDecl:
    name: str
    params: tuple[Param, ...]
    result: Type

    @property
    def term_params(self) -> tuple[TermParam, ...]:
        return tuple(p for p in self.params if isinstance(p, TermParam))


@dataclass(frozen=True)
class PredDecl:
    name: str
    arg_types: tuple[Type, ...]


@dataclass(frozen=True)
class Signature:
    base_types: tuple[str, ...] = ()
    funs: tuple[FunDecl, ...] = ()
    preds: tuple[PredDecl, ...] = ()
    _fun_index: dict = field(
        default_factory=dict, init=False, compare=False, repr=False
    )
    _pred_index: dict = field(
        default_factory=dict, init=False, compare=False, repr=False
    )

    def __post_init__(self):
        self._fun_index.update({f.name: f for f in self.funs})
        self._pred_index.update({p.name: p for p in self.preds})

    def fun(self, name: str) -> FunDecl | None:
        return self._fun_index.get(name)

    def pred(self, name: str) -> PredDecl | None:
        return self._pred_index.get(name)

    def has_base(self, name: str) -> bool:
        return name in self.base_types

    def symbol_names(self) -> frozenset[str]:
        return frozenset(self.base_types) | set(self._fun_index) | set(self._pred_index)

    def with_fun(self, decl: FunDecl) -> "Signature":
        return Signature(self.base_types, self.funs + (decl,), self.preds)

    def with_pred(self, decl: PredDecl) -> "Signature":
        return Signature(self.base_types, self.funs, self.preds + (decl,))

    def with_base(self, name: str) -> "Signature":
        return Signature(self.base_types + (name,), self.funs, self.preds)


EMPTY_SIGNATURE = Signature()
