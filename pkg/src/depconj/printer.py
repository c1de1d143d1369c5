"""Canonical rendering of types, terms, statements, and contexts.

Two modes. Explicit mode prints every node: dependent binders always
appear as assumption brackets and every warrant argument is written
(unresolved slots as '@?'). Vernacular mode suppresses warrant
machinery: warrant arguments are omitted, and a dependent binder is
shown as a plain connective when every use of the binder can be
recovered from argument positions, as an anonymous bracket when the
binder is unused, and with its name only when the name must survive
(a definite-description reference).

Both modes reparse to the same tree: explicit output literally, and
vernacular output after the unresolved slots are refilled.
"""
from __future__ import annotations

from .syntax.context import Assume, Context, ContextEntry, SetDecl, TypeDecl
from .syntax.nodes import (
    And, App, BaseType, Compr, ComprSet, DepAnd, DepImp, Desc, Eq, ExistsS,
    ExistsT, ExistsUniqueT, ForallS, ForallT, Imp, Mem, Or, Pred, SetType,
    Statement, Term, Top, Type, Var, WarrantRef, desc_referenced,
    free_warrantors,
)
from .syntax.signature import FunDecl, PredDecl, Signature, TermParam, WarrantParam

_PREC_IMP = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_ATOM = 4


def format_type(ty: Type) -> str:
    match ty:
        case BaseType(name):
            return name
        case SetType(elem):
            return f"Set({format_type(elem)})"
    raise TypeError(f"not a type: {ty!r}")


def format_term(t: Term | WarrantRef, explicit: bool = True) -> str:
    match t:
        case Var(name):
            return name
        case WarrantRef(None):
            return "@?"
        case WarrantRef(name):
            return f"@{name}"
        case App(sym, args):
            if explicit:
                shown = [format_term(a, explicit) for a in args]
            else:
                shown = [format_term(a, explicit) for a in args
                         if not isinstance(a, WarrantRef)]
            if not shown:
                return sym
            return f"{sym}({', '.join(shown)})"
        case Desc(ref):
            return f"desc({ref.name})"
        case Compr(var, ty, body):
            b = format_statement(body, explicit)
            return f"{{ {var} : {format_type(ty)} | {b} }}"
        case ComprSet(var, host, body):
            b = format_statement(body, explicit)
            return f"{{ {var} in {format_term(host, explicit)} | {b} }}"
    raise TypeError(f"not a term: {t!r}")


def format_statement(s: Statement, explicit: bool = True) -> str:
    return _stmt(s, _PREC_IMP, True, explicit)


def _wrap(text: str, parens: bool) -> str:
    return f"({text})" if parens else text


def _stmt(s: Statement, need: int, tail: bool, explicit: bool) -> str:
    match s:
        case Top():
            return "top"
        case Pred(sym, args):
            if not args:
                return sym
            inner = ", ".join(format_term(a, explicit) for a in args)
            return f"{sym}({inner})"
        case Eq(left, right):
            return f"{format_term(left, explicit)} = {format_term(right, explicit)}"
        case Mem(elem, container):
            return f"{format_term(elem, explicit)} in {format_term(container, explicit)}"
        case And(left, right):
            parens = need > _PREC_AND
            l = _stmt(left, _PREC_AND, False, explicit)
            r = _stmt(right, _PREC_ATOM, tail or parens, explicit)
            return _wrap(f"{l} /\\ {r}", parens)
        case Or(left, right):
            parens = need > _PREC_OR
            l = _stmt(left, _PREC_OR, False, explicit)
            r = _stmt(right, _PREC_AND, tail or parens, explicit)
            return _wrap(f"{l} \\/ {r}", parens)
        case Imp(left, right):
            parens = need > _PREC_IMP
            l = _stmt(left, _PREC_OR, False, explicit)
            r = _stmt(right, _PREC_IMP, tail or parens, explicit)
            return _wrap(f"{l} => {r}", parens)
        case DepAnd(binder, left, right):
            return _dep(s, binder, left, right, "/\\", _PREC_AND,
                        need, tail, explicit)
        case DepImp(binder, left, right):
            return _dep(s, binder, left, right, "=>", _PREC_IMP,
                        need, tail, explicit)
        case ForallT(var, ty, body):
            head = f"forall {var} : {format_type(ty)}"
            return _binder(head, body, need, tail, explicit)
        case ExistsT(var, ty, body):
            head = f"exists {var} : {format_type(ty)}"
            return _binder(head, body, need, tail, explicit)
        case ExistsUniqueT(var, ty, body):
            head = f"exists! {var} : {format_type(ty)}"
            return _binder(head, body, need, tail, explicit)
        case ForallS(var, host, body):
            head = f"forall {var} in {format_term(host, explicit)}"
            return _binder(head, body, need, tail, explicit)
        case ExistsS(var, host, body):
            head = f"exists {var} in {format_term(host, explicit)}"
            return _binder(head, body, need, tail, explicit)
    raise TypeError(f"not a statement: {s!r}")


def _binder(head: str, body: Statement, need: int, tail: bool,
            explicit: bool) -> str:
    text = f"{head} . {_stmt(body, _PREC_IMP, True, explicit)}"
    return _wrap(text, not tail)


def _dep(node: Statement, binder: str, left: Statement, right: Statement,
         op: str, plain_prec: int, need: int, tail: bool,
         explicit: bool) -> str:
    if not explicit:
        refs = free_warrantors(right)
        if binder in desc_referenced(right):
            mode = "named"
        elif binder in refs:
            mode = "plain"
        else:
            mode = "anon"
    else:
        mode = "named"

    if mode == "plain":
        parens = need > plain_prec
        l = _stmt(left, _PREC_AND if op == "/\\" else _PREC_OR, False,
                  explicit)
        if op == "/\\":
            r = _stmt(right, _PREC_ATOM, tail or parens, explicit)
        else:
            r = _stmt(right, _PREC_IMP, tail or parens, explicit)
        return _wrap(f"{l} {op} {r}", parens)

    l = _stmt(left, _PREC_IMP, True, explicit)
    head = f"[{l}]" if mode == "anon" else f"[{binder} |- {l}]"
    r = _stmt(right, _PREC_IMP, True, explicit)
    return _wrap(f"{head} {op} {r}", not tail)


# ------------------------------------------------------------ contexts

def format_entry(e: ContextEntry, explicit: bool = True) -> str:
    match e:
        case TypeDecl(name, ty):
            return f"{name} : {format_type(ty)}"
        case SetDecl(name, host):
            return f"{name} in {format_term(host, explicit)}"
        case Assume(name, stmt):
            return f"{name} |- {format_statement(stmt, explicit)}"
    raise TypeError(f"not a context entry: {e!r}")


def format_context(ctx: Context, explicit: bool = True) -> str:
    if not ctx.entries:
        return "[]"
    return " ".join(f"[{format_entry(e, explicit)}]" for e in ctx.entries)


def format_judgment(ctx: Context, kind: str, lhs, rhs,
                    explicit: bool = True) -> str:
    if kind == "subset":
        body = f"{format_term(lhs, explicit)} subset {format_term(rhs, explicit)}"
    else:
        body = (f"{format_statement(lhs, explicit)} <= "
                f"{format_statement(rhs, explicit)}")
    return f"{format_context(ctx, explicit)} |- {body}"


# ----------------------------------------------------------- signature

def format_pred_decl(decl) -> str:
    if decl.arg_types:
        tys = ", ".join(format_type(t) for t in decl.arg_types)
        return f"pred {decl.name}({tys});"
    return f"pred {decl.name};"


def format_fun_decl(decl) -> str:
    parts = []
    for p in decl.params:
        match p:
            case TermParam(pname, ty):
                parts.append(f"{pname} : {format_type(ty)}")
            case WarrantParam(pname, schema):
                parts.append(
                    f"{pname} : warrant({format_statement(schema)})"
                )
    return f"fun {decl.name}({', '.join(parts)}) : {format_type(decl.result)};"


def format_signature(sig: Signature) -> list[str]:
    lines: list[str] = []
    for name in sig.base_types:
        lines.append(f"type {name};")
    for decl in sig.preds:
        lines.append(format_pred_decl(decl))
    for decl in sig.funs:
        lines.append(format_fun_decl(decl))
    return lines
