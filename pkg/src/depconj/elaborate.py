"""High-to-low elaboration and warrantor resolution.

Set-bounded binders compile into typed binders guarded by a membership
assumption: forall x in X . E becomes forall x : T . [w_x |- x in X] => E,
and similarly for exists and comprehensions. Set declarations in contexts
become a typed declaration plus a named membership assumption. Introduced
names follow the w_<var> scheme, primed on clashes, so output is
deterministic.

Resolution goes the other way: a statement whose function applications
omit warrant arguments gets each empty slot filled with the nearest
enclosing assumption whose statement matches the declared schema. A plain
conjunction or implication whose left operand is the needed statement is
promoted to its dependent form on the spot; that is what gives the
vernacular `nonempty(A) /\\ inf(A) = 0` its dependent reading.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import Diagnostic, HostUnresolvable, NoWarrantorInScope
from .printer import format_statement, format_term
from .syntax.context import Assume, Context, ContextEntry, SetDecl, TypeDecl
from .syntax.equality import struct_eq
from .syntax.nodes import (
    And, App, Compr, ComprSet, DepAnd, DepImp, Desc, Eq, ExistsS, ExistsT,
    ExistsUniqueT, ForallS, ForallT, Imp, Mem, Or, Pred, SetType, Span,
    Statement, Term, Top, Type, Var, WarrantRef, bound_names, free_names,
    fresh_name,
)
from .syntax.signature import Signature, TermParam, WarrantParam
from .syntax.subst import instantiate_schema


@dataclass(frozen=True)
class ElabResult:
    lowered: Statement | Context
    warrantor_table: dict[str, tuple[Statement, Span | None]]


# ----------------------------------------------------- type synthesis

class _Scope:
    """Just enough typing state to find host types during lowering."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.types: dict[str, Type] = {}
        self.warrants: dict[str, Statement] = {}

    def child(self) -> "_Scope":
        c = _Scope(self.sig)
        c.types = dict(self.types)
        c.warrants = dict(self.warrants)
        return c

    def bind_var(self, name: str, ty: Type) -> None:
        self.types[name] = ty
        self.warrants.pop(name, None)

    def bind_warrant(self, name: str, stmt: Statement) -> None:
        self.warrants[name] = stmt
        self.types.pop(name, None)

    def synth(self, t: Term) -> Type:
        match t:
            case Var(name):
                ty = self.types.get(name)
                if ty is None:
                    raise HostUnresolvable(
                        f"cannot type variable {name}", span=t.span
                    )
                return ty
            case App(sym, _):
                decl = self.sig.fun(sym)
                if decl is None:
                    raise HostUnresolvable(
                        f"unknown function symbol {sym}", span=t.span
                    )
                return decl.result
            case Compr(_, ty, _):
                return SetType(ty)
            case ComprSet(_, host, _):
                return self.synth(host)
            case Desc(ref):
                s = self.warrants.get(ref.name) if ref.name else None
                if not isinstance(s, ExistsUniqueT):
                    raise HostUnresolvable(
                        "description does not refer to a unique existence",
                        span=t.span,
                    )
                return s.ty
        raise HostUnresolvable(f"cannot type {t!r}", span=getattr(t, "span", None))

    def host_of(self, set_term: Term) -> Type:
        ty = self.synth(set_term)
        if not isinstance(ty, SetType):
            raise HostUnresolvable(
                f"{format_term(set_term)} is not a set expression",
                span=getattr(set_term, "span", None),
            )
        return ty.elem


def _scope_from(ctx: Context) -> _Scope:
    sc = _Scope(ctx.sig)
    for e in ctx.entries:
        match e:
            case TypeDecl(name, ty):
                sc.bind_var(name, ty)
            case SetDecl(name, host):
                sc.bind_var(name, sc.host_of(host))
            case Assume(name, stmt):
                sc.bind_warrant(name, stmt)
    return sc


# --------------------------------------------------------- elaboration

class _Lowerer:
    def __init__(self, sig: Signature, avoid: set[str]):
        self.sig = sig
        self.avoid = avoid
        self.table: dict[str, tuple[Statement, Span | None]] = {}

    def intro(self, var: str, mem: Statement, span: Span | None) -> str:
        name = fresh_name(f"w_{var}", self.avoid)
        self.avoid.add(name)
        self.table[name] = (mem, span)
        return name

    def stmt(self, s: Statement, sc: _Scope) -> Statement:
        match s:
            case Top() | Pred() | Eq() | Mem():
                return self._leaf(s, sc)
            case And(l, r):
                return And(self.stmt(l, sc), self.stmt(r, sc), span=s.span)
            case Or(l, r):
                return Or(self.stmt(l, sc), self.stmt(r, sc), span=s.span)
            case Imp(l, r):
                return Imp(self.stmt(l, sc), self.stmt(r, sc), span=s.span)
            case DepAnd(z, l, r):
                return self._dep(DepAnd, z, l, r, sc, s.span)
            case DepImp(z, l, r):
                return self._dep(DepImp, z, l, r, sc, s.span)
            case ForallT(x, ty, body):
                return ForallT(x, ty, self._under(x, ty, body, sc), span=s.span)
            case ExistsT(x, ty, body):
                return ExistsT(x, ty, self._under(x, ty, body, sc), span=s.span)
            case ExistsUniqueT(x, ty, body):
                return ExistsUniqueT(
                    x, ty, self._under(x, ty, body, sc), span=s.span
                )
            case ForallS(x, host, body):
                x_, ty, mem, guarded = self._bounded(x, host, body, sc, s.span)
                return ForallT(x_, ty, DepImp(*guarded), span=s.span)
            case ExistsS(x, host, body):
                x_, ty, mem, guarded = self._bounded(x, host, body, sc, s.span)
                return ExistsT(x_, ty, DepAnd(*guarded), span=s.span)
        raise TypeError(f"not a statement: {s!r}")

    def _leaf(self, s: Statement, sc: _Scope) -> Statement:
        match s:
            case Top():
                return s
            case Pred(sym, args):
                return Pred(sym, tuple(self.term(a, sc) for a in args),
                            span=s.span)
            case Eq(l, r):
                return Eq(self.term(l, sc), self.term(r, sc), span=s.span)
            case Mem(el, ct):
                return Mem(self.term(el, sc), self.term(ct, sc), span=s.span)
        raise TypeError(s)

    def _dep(self, cls, z: str, l: Statement, r: Statement, sc: _Scope,
             span) -> Statement:
        l2 = self.stmt(l, sc)
        inner = sc.child()
        inner.bind_warrant(z, l2)
        return cls(z, l2, self.stmt(r, inner), span=span)

    def _under(self, x: str, ty: Type, body: Statement, sc: _Scope) -> Statement:
        inner = sc.child()
        inner.bind_var(x, ty)
        return self.stmt(body, inner)

    def _bounded(self, x: str, host: Term, body: Statement, sc: _Scope, span):
        host2 = self.term(host, sc)
        ty = sc.host_of(host2)
        mem = Mem(Var(x), host2)
        w = self.intro(x, mem, span)
        inner = sc.child()
        inner.bind_var(x, ty)
        inner.bind_warrant(w, mem)
        return x, ty, mem, (w, mem, self.stmt(body, inner))

    def term(self, t: Term | WarrantRef, sc: _Scope):
        match t:
            case Var() | WarrantRef() | Desc():
                return t
            case App(sym, args):
                return App(sym, tuple(self.term(a, sc) for a in args),
                           span=t.span)
            case Compr(x, ty, body):
                return Compr(x, ty, self._under(x, ty, body, sc), span=t.span)
            case ComprSet(x, host, body):
                host2 = self.term(host, sc)
                ty = sc.host_of(host2)
                mem = Mem(Var(x), host2)
                w = self.intro(x, mem, t.span)
                inner = sc.child()
                inner.bind_var(x, ty)
                inner.bind_warrant(w, mem)
                return Compr(
                    x, ty, DepAnd(w, mem, self.stmt(body, inner)), span=t.span
                )
        raise TypeError(f"not a term: {t!r}")


def _avoid_for(ctx: Context, *nodes) -> set[str]:
    avoid = set(ctx.names()) | set(ctx.sig.symbol_names())
    for n in nodes:
        avoid |= free_names(n) | bound_names(n)
    return avoid


def elaborate_statement(ctx: Context, s: Statement) -> ElabResult:
    low = _Lowerer(ctx.sig, _avoid_for(ctx, s))
    lowered = low.stmt(s, _scope_from(ctx))
    return ElabResult(lowered, low.table)


def elaborate_term(ctx: Context, t: Term) -> ElabResult:
    low = _Lowerer(ctx.sig, _avoid_for(ctx, t))
    lowered = low.term(t, _scope_from(ctx))
    return ElabResult(lowered, low.table)


def elaborate_context(ctx: Context) -> ElabResult:
    sc = _Scope(ctx.sig)
    entries: list[ContextEntry] = []
    payloads = [
        e.stmt if isinstance(e, Assume) else e.host
        for e in ctx.entries
        if not isinstance(e, TypeDecl)
    ]
    low = _Lowerer(ctx.sig, _avoid_for(ctx, *payloads))
    for e in ctx.entries:
        match e:
            case TypeDecl(name, ty):
                entries.append(e)
                sc.bind_var(name, ty)
            case Assume(name, stmt):
                lowered = low.stmt(stmt, sc)
                entries.append(Assume(name, lowered, span=e.span))
                sc.bind_warrant(name, lowered)
            case SetDecl(name, host):
                host2 = low.term(host, sc)
                ty = sc.host_of(host2)
                mem = Mem(Var(name), host2)
                w = low.intro(name, mem, e.span)
                entries.append(TypeDecl(name, ty, span=e.span))
                entries.append(Assume(w, mem, span=e.span))
                sc.bind_var(name, ty)
                sc.bind_warrant(w, mem)
    return ElabResult(Context(ctx.sig, tuple(entries)), low.table)


# ---------------------------------------------------------- resolution

class _Cand:
    """One in-scope warrantor candidate during resolution."""

    __slots__ = ("name", "stmt", "deps", "used")

    def __init__(self, name: str | None, stmt: Statement):
        self.name = name  # None until an anonymous candidate is used
        self.stmt = stmt
        self.deps = free_names(stmt)
        self.used = False


class _Resolver:
    def __init__(self, ctx: Context):
        self.sig = ctx.sig
        self.taken = set(ctx.names()) | set(ctx.sig.symbol_names())

    def fresh(self, extra: set[str]) -> str:
        name = fresh_name("w", self.taken | extra)
        self.taken.add(name)
        return name

    def stmt(self, s: Statement, scope: tuple[_Cand, ...]) -> Statement:
        match s:
            case Top():
                return s
            case Pred(sym, args):
                return Pred(
                    sym, tuple(self.term(a, scope) for a in args), span=s.span
                )
            case Eq(l, r):
                return Eq(self.term(l, scope), self.term(r, scope), span=s.span)
            case Mem(el, ct):
                return Mem(self.term(el, scope), self.term(ct, scope),
                           span=s.span)
            case And(l, r):
                return self._maybe_promote(And, DepAnd, l, r, scope, s.span)
            case Imp(l, r):
                return self._maybe_promote(Imp, DepImp, l, r, scope, s.span)
            case Or(l, r):
                return Or(self.stmt(l, scope), self.stmt(r, scope), span=s.span)
            case DepAnd(z, l, r):
                l2 = self.stmt(l, scope)
                inner = self._shadow(scope, z) + (_Cand(z, l2),)
                return DepAnd(z, l2, self.stmt(r, inner), span=s.span)
            case DepImp(z, l, r):
                l2 = self.stmt(l, scope)
                inner = self._shadow(scope, z) + (_Cand(z, l2),)
                return DepImp(z, l2, self.stmt(r, inner), span=s.span)
            case ForallT(x, ty, b):
                return ForallT(x, ty, self.stmt(b, self._shadow(scope, x)),
                               span=s.span)
            case ExistsT(x, ty, b):
                return ExistsT(x, ty, self.stmt(b, self._shadow(scope, x)),
                               span=s.span)
            case ExistsUniqueT(x, ty, b):
                return ExistsUniqueT(
                    x, ty, self.stmt(b, self._shadow(scope, x)), span=s.span
                )
            case ForallS(x, host, b):
                return ForallS(x, self.term(host, scope),
                               self.stmt(b, self._shadow(scope, x)),
                               span=s.span)
            case ExistsS(x, host, b):
                return ExistsS(x, self.term(host, scope),
                               self.stmt(b, self._shadow(scope, x)),
                               span=s.span)
        raise TypeError(f"not a statement: {s!r}")

    def _shadow(self, scope: tuple[_Cand, ...], name: str) -> tuple[_Cand, ...]:
        return tuple(
            c for c in scope if c.name != name and name not in c.deps
        )

    def _maybe_promote(self, plain, dep, l, r, scope, span):
        l2 = self.stmt(l, scope)
        anon = _Cand(None, l2)
        r2 = self.stmt(r, scope + (anon,))
        if anon.used:
            return dep(anon.name, l2, r2, span=span)
        return plain(l2, r2, span=span)

    def term(self, t: Term | WarrantRef, scope: tuple[_Cand, ...]):
        match t:
            case Var() | Desc():
                return t
            case WarrantRef():
                return t
            case Compr(x, ty, b):
                return Compr(x, ty, self.stmt(b, self._shadow(scope, x)),
                             span=t.span)
            case ComprSet(x, host, b):
                return ComprSet(x, self.term(host, scope),
                                self.stmt(b, self._shadow(scope, x)),
                                span=t.span)
            case App(sym, args):
                return self._app(t, sym, args, scope)
        raise TypeError(f"not a term: {t!r}")

    def _app(self, t: App, sym: str, args, scope: tuple[_Cand, ...]) -> App:
        decl = self.sig.fun(sym)
        resolved = [
            a if isinstance(a, WarrantRef) else self.term(a, scope)
            for a in args
        ]
        if decl is None or len(decl.params) != len(resolved):
            # malformed application; leave for the meaningfulness check
            return App(sym, tuple(resolved), span=t.span)
        for i, (p, a) in enumerate(zip(decl.params, resolved)):
            if not (isinstance(p, WarrantParam) and isinstance(a, WarrantRef)
                    and a.name is None):
                continue
            want = instantiate_schema(p.schema, decl.params, tuple(resolved))
            resolved[i] = WarrantRef(self._find(want, scope, t), span=t.span)
        return App(sym, tuple(resolved), span=t.span)

    def _find(self, want: Statement, scope: tuple[_Cand, ...], site: App) -> str:
        for c in reversed(scope):
            if not struct_eq(want, c.stmt):
                continue
            if c.name is None:
                c.name = self.fresh(free_names(c.stmt) | free_names(want))
            c.used = True
            return c.name
        raise NoWarrantorInScope(
            f"{format_term(site, explicit=False)} needs a warrantor for "
            f"{format_statement(want, explicit=False)!r} and none is in scope",
            span=site.span,
        )


def _ctx_scope(ctx: Context) -> tuple[_Cand, ...]:
    return tuple(
        _Cand(e.name, e.stmt)
        for e in ctx.entries
        if isinstance(e, Assume)
    )


def resolve_warrantors(ctx: Context, s: Statement) -> Statement:
    res = _Resolver(ctx)
    # promoted binder names must dodge every binder in the statement,
    # or an inner binder could capture the new reference
    res.taken |= free_names(s) | bound_names(s)
    return res.stmt(s, _ctx_scope(ctx))


def resolve_warrantors_term(ctx: Context, t: Term) -> Term:
    res = _Resolver(ctx)
    res.taken |= free_names(t) | bound_names(t)
    return res.term(t, _ctx_scope(ctx))


def render_vernacular(s: Statement) -> str:
    return format_statement(s, explicit=False)
