"""Meaningfulness and type synthesis.

A statement is meaningful in a context when every variable is declared,
every warrantor reference names an in-scope assumption (context entries
and enclosing dependent binders alike), every application is well typed,
and every warrant argument cites an assumption whose statement matches
the parameter's instantiated schema up to struct_eq.

Binders inside statements may shadow outer names; contexts themselves
never bind a name twice.
"""
from __future__ import annotations

from ..errors import (
    ContainsDescription, Diagnostic, DuplicateName, IllFormedEntry,
    SchemaMismatch, TypeMismatch, UnboundVar, UnboundWarrantor,
    UnsupportedJudgment,
)
from .context import Assume, Context, ContextEntry, SetDecl, TypeDecl
from .equality import env_struct_eq
from .nodes import (
    And, App, BaseType, Compr, ComprSet, DepAnd, DepImp, Desc, Eq, ExistsS,
    ExistsT, ExistsUniqueT, ForallS, ForallT, Imp, Mem, Or, Pred, SetType,
    Top, Type, Var, WarrantRef, Statement, Term,
)
from .signature import Signature, TermParam, WarrantParam
from .subst import instantiate_schema


def validate_type(sig: Signature, ty: Type) -> None:
    match ty:
        case BaseType(name=n):
            if not sig.has_base(n):
                raise TypeMismatch(f"unknown base type {n}", subject=ty)
        case SetType(elem=e):
            validate_type(sig, e)
        case _:
            raise TypeMismatch(f"not a type: {ty!r}", subject=ty)


class _Scope:
    """Typing scope paired with the equality environment it induces."""

    __slots__ = ("types", "env", "depth")

    def __init__(self, types: dict, env: dict, depth: int):
        self.types = types
        self.env = env
        self.depth = depth

    def bind_var(self, name: str, ty: Type) -> "_Scope":
        types = dict(self.types)
        types[name] = ("tv", ty)
        env = dict(self.env)
        env[name] = ("tv", self.depth)
        return _Scope(types, env, self.depth + 1)

    def bind_warrant(self, name: str, stmt: Statement) -> "_Scope":
        types = dict(self.types)
        binding = ("w", stmt, self.env)
        types[name] = binding
        env = dict(self.env)
        env[name] = binding
        return _Scope(types, env, self.depth)


class _Checker:
    def __init__(self, sig: Signature, allow_high: bool):
        self.sig = sig
        self.allow_high = allow_high

    def _high(self, node):
        if not self.allow_high:
            raise UnsupportedJudgment(
                "set-level construct in a low-level position", subject=node
            )

    # ---------------------------------------------------------- terms

    def term(self, t: Term, sc: _Scope) -> Type:
        match t:
            case Var(name=n):
                entry = sc.types.get(n)
                if entry is None:
                    raise UnboundVar(f"unbound variable {n}", subject=t)
                if entry[0] != "tv":
                    raise UnboundVar(
                        f"{n} names an assumption, not a variable", subject=t
                    )
                return entry[1]
            case App():
                return self.app(t, sc)
            case Compr(var=x, ty=ty, body=b):
                validate_type(self.sig, ty)
                self.stmt(b, sc.bind_var(x, ty))
                return SetType(ty)
            case ComprSet(var=x, host=h, body=b):
                self._high(t)
                elem = self.set_elem_type(h, sc)
                self.stmt(b, sc.bind_var(x, elem))
                return SetType(elem)
            case Desc(ref=r):
                stmt = self.resolve_warrant(r, sc)
                if not isinstance(stmt, ExistsUniqueT):
                    raise TypeMismatch(
                        "description needs a warrantor of a unique-existence "
                        f"statement, got one of {type(stmt).__name__}",
                        subject=t,
                    )
                return stmt.ty
        raise TypeMismatch(f"not a term: {t!r}", subject=t)

    def set_elem_type(self, t: Term, sc: _Scope) -> Type:
        ty = self.term(t, sc)
        if not isinstance(ty, SetType):
            raise TypeMismatch(
                f"expected a set expression, got one of type {ty}", subject=t
            )
        return ty.elem

    def resolve_warrant(self, r: WarrantRef, sc: _Scope) -> Statement:
        if r.name is None:
            raise UnboundWarrantor("unresolved warrant slot", subject=r)
        entry = sc.types.get(r.name)
        if entry is None:
            raise UnboundWarrantor(f"unbound warrantor {r.name}", subject=r)
        if entry[0] != "w":
            raise UnboundWarrantor(
                f"{r.name} names a variable, not an assumption", subject=r
            )
        return entry[1]

    def app(self, t: App, sc: _Scope) -> Type:
        decl = self.sig.fun(t.sym)
        if decl is None:
            raise UnboundVar(f"unknown function symbol {t.sym}", subject=t)
        if len(t.args) != len(decl.params):
            raise TypeMismatch(
                f"{t.sym} expects {len(decl.params)} arguments, "
                f"got {len(t.args)}",
                subject=t,
            )
        for p, a in zip(decl.params, t.args):
            match p:
                case TermParam(ty=ty):
                    if isinstance(a, WarrantRef):
                        raise TypeMismatch(
                            f"{t.sym}: term argument expected for {p.name}",
                            subject=t,
                        )
                    actual = self.term(a, sc)
                    if actual != ty:
                        raise TypeMismatch(
                            f"{t.sym}: argument {p.name} has type {actual}, "
                            f"expected {ty}",
                            subject=t,
                        )
                case WarrantParam(schema=schema):
                    if not isinstance(a, WarrantRef):
                        raise TypeMismatch(
                            f"{t.sym}: warrant argument expected for {p.name}",
                            subject=t,
                        )
                    warranted = self.resolve_warrant(a, sc)
                    want = instantiate_schema(schema, decl.params, t.args)
                    _, _, w_env = sc.types[a.name]
                    if not env_struct_eq(warranted, w_env, want, sc.env):
                        raise SchemaMismatch(
                            f"{t.sym}: assumption {a.name} does not match the "
                            f"schema of parameter {p.name}",
                            subject=t,
                        )
        return decl.result

    # ----------------------------------------------------- statements

    def stmt(self, s: Statement, sc: _Scope) -> None:
        match s:
            case Top():
                return
            case And(left=l, right=r) | Or(left=l, right=r) | Imp(left=l, right=r):
                self.stmt(l, sc)
                self.stmt(r, sc)
            case DepAnd(binder=z, left=l, right=r) | DepImp(binder=z, left=l, right=r):
                self.stmt(l, sc)
                self.stmt(r, sc.bind_warrant(z, l))
            case ForallT(var=x, ty=ty, body=b) | ExistsT(var=x, ty=ty, body=b) \
                    | ExistsUniqueT(var=x, ty=ty, body=b):
                validate_type(self.sig, ty)
                self.stmt(b, sc.bind_var(x, ty))
            case ForallS(var=x, host=h, body=b) | ExistsS(var=x, host=h, body=b):
                self._high(s)
                elem = self.set_elem_type(h, sc)
                self.stmt(b, sc.bind_var(x, elem))
            case Eq(left=l, right=r):
                lt = self.term(l, sc)
                rt = self.term(r, sc)
                if lt != rt:
                    raise TypeMismatch(
                        f"equation between {lt} and {rt}", subject=s
                    )
            case Mem(elem=e, container=c):
                elem_ty = self.set_elem_type(c, sc)
                actual = self.term(e, sc)
                if actual != elem_ty:
                    raise TypeMismatch(
                        f"membership of a {actual} in a set of {elem_ty}",
                        subject=s,
                    )
            case Pred(sym=p, args=args):
                decl = self.sig.pred(p)
                if decl is None:
                    raise UnboundVar(f"unknown predicate symbol {p}", subject=s)
                if len(args) != len(decl.arg_types):
                    raise TypeMismatch(
                        f"{p} expects {len(decl.arg_types)} arguments, "
                        f"got {len(args)}",
                        subject=s,
                    )
                for a, ty in zip(args, decl.arg_types):
                    actual = self.term(a, sc)
                    if actual != ty:
                        raise TypeMismatch(
                            f"{p}: argument has type {actual}, expected {ty}",
                            subject=s,
                        )
            case _:
                raise TypeMismatch(f"not a statement: {s!r}", subject=s)


def _scope_of(ctx: Context, allow_high: bool) -> _Scope:
    sc = _Scope({}, {}, 0)
    checker = _Checker(ctx.sig, allow_high=True)
    for e in ctx.entries:
        match e:
            case TypeDecl(name=n, ty=ty):
                sc.types[n] = ("tv", ty)
            case SetDecl(name=n, host=h):
                elem = checker.set_elem_type(h, sc)
                sc.types[n] = ("tv", elem)
            case Assume(name=n, stmt=s):
                binding = ("w", s, dict(sc.env))
                sc.types[n] = binding
                sc.env[n] = binding
    return sc


def meaningful(ctx: Context, stmt: Statement, allow_high: bool = False) -> None:
    """Raise a Diagnostic unless stmt is meaningful in ctx."""
    sc = _scope_of(ctx, allow_high)
    _Checker(ctx.sig, allow_high).stmt(stmt, sc)


def is_meaningful(ctx: Context, stmt: Statement, allow_high: bool = False) -> bool:
    try:
        meaningful(ctx, stmt, allow_high)
    except Diagnostic:
        return False
    return True


def synth_type(ctx: Context, term: Term, allow_high: bool = False) -> Type:
    """Type of a term in a context; raises a Diagnostic when ill formed."""
    sc = _scope_of(ctx, allow_high)
    return _Checker(ctx.sig, allow_high).term(term, sc)


def check_entry(ctx: Context, entry: ContextEntry) -> None:
    """Validate one context entry against the context before it."""
    try:
        match entry:
            case TypeDecl(ty=ty):
                validate_type(ctx.sig, ty)
            case SetDecl(host=h):
                synth_type(ctx, h, allow_high=True)
                sc = _scope_of(ctx, True)
                _Checker(ctx.sig, True).set_elem_type(h, sc)
            case Assume(stmt=s):
                meaningful(ctx, s, allow_high=True)
            case _:
                raise IllFormedEntry(f"not a context entry: {entry!r}")
    except Diagnostic as d:
        if isinstance(d, (IllFormedEntry, DuplicateName)):
            raise
        raise IllFormedEntry(
            f"entry {entry.name}: {d.message}", subject=entry
        ) from d


def validate_context(ctx: Context) -> None:
    """Recheck a whole context from the left."""
    from .context import extend_context
    acc = Context(ctx.sig, ())
    for e in ctx.entries:
        acc = extend_context(acc, e)


def validate_signature(sig: Signature) -> None:
    """Base types, symbols, and warrant schemas are well formed; schemas
    are checked meaningful over their preceding parameters."""
    seen: set[str] = set()
    for n in sig.base_types:
        if n in seen:
            raise DuplicateName(f"base type {n} declared twice")
        seen.add(n)
    for f in sig.funs + sig.preds:
        if f.name in seen:
            raise DuplicateName(f"symbol {f.name} declared twice")
        seen.add(f.name)
    for p in sig.preds:
        for ty in p.arg_types:
            validate_type(sig, ty)
    for f in sig.funs:
        validate_type(sig, f.result)
        pseen: set[str] = set()
        ctx = Context(sig, ())
        from .context import extend_context
        for p in f.params:
            if p.name in pseen:
                raise DuplicateName(
                    f"{f.name}: parameter {p.name} declared twice"
                )
            pseen.add(p.name)
            match p:
                case TermParam(name=n, ty=ty):
                    ctx = extend_context(ctx, TypeDecl(n, ty))
                case WarrantParam(name=n, schema=s):
                    ctx = extend_context(ctx, Assume(n, s))


# --------------------------------------------------------------- erase

def erase(stmt: Statement) -> Statement:
    """Forget dependency: dependent conjunction and implication become
    their plain forms. Rejects anything whose meaning leans on a
    warrantor — description terms and filled or unfilled warrant slots.
    """
    match stmt:
        case Top():
            return stmt
        case And(left=l, right=r):
            return And(erase(l), erase(r))
        case Or(left=l, right=r):
            return Or(erase(l), erase(r))
        case Imp(left=l, right=r):
            return Imp(erase(l), erase(r))
        case DepAnd(left=l, right=r):
            return And(erase(l), erase(r))
        case DepImp(left=l, right=r):
            return Imp(erase(l), erase(r))
        case ForallT(var=x, ty=ty, body=b):
            return ForallT(x, ty, erase(b))
        case ExistsT(var=x, ty=ty, body=b):
            return ExistsT(x, ty, erase(b))
        case ExistsUniqueT(var=x, ty=ty, body=b):
            return ExistsUniqueT(x, ty, erase(b))
        case Eq(left=l, right=r):
            return Eq(_erase_term(l), _erase_term(r))
        case Mem(elem=e, container=c):
            return Mem(_erase_term(e), _erase_term(c))
        case Pred(sym=p, args=args):
            return Pred(p, tuple(_erase_term(a) for a in args))
        case ForallS() | ExistsS():
            raise UnsupportedJudgment(
                "cannot erase a set-bounded quantifier", subject=stmt
            )
    raise TypeMismatch(f"not a statement: {stmt!r}", subject=stmt)


def erase_term(t: Term) -> Term:
    """Term-level companion of erase, with the same rejection rules."""
    return _erase_term(t)


def _erase_term(t: Term) -> Term:
    match t:
        case Var():
            return t
        case Desc():
            raise ContainsDescription(
                "description term has no warrantor-free reading", subject=t
            )
        case App(sym=s, args=args):
            if any(isinstance(a, WarrantRef) for a in args):
                raise ContainsDescription(
                    f"{s} consumes a warrant argument", subject=t
                )
            return App(s, tuple(_erase_term(a) for a in args))
        case Compr(var=x, ty=ty, body=b):
            return Compr(x, ty, erase(b))
        case ComprSet():
            raise UnsupportedJudgment(
                "cannot erase a set-bounded comprehension", subject=t
            )
    raise TypeMismatch(f"not a term: {t!r}", subject=t)
