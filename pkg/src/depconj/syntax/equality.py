"""Structural equality of statements and terms.

Two statements are struct_eq when they agree up to renaming of bound
variables and up to warrantor identity: references to warrantors count
as equal whenever the statements they warrant are themselves struct_eq.
In particular two descriptions taken from interchangeable assumptions
are equal, which is how at-most-one-warrantor collapse is realized
syntactically.

Environments map names to bindings:
  ("tv", marker)      bound ordinary variable; absent names are free and
                      compare by name. Markers from a scope builder are
                      ints consistent along one binding path; binders
                      entered during a comparison get shared ("c", j)
                      markers so the two sides pair up positionally.
  ("w", stmt, env)    warrant binder or context assumption, with the
                      environment snapshot at its binding point.
"""
from __future__ import annotations

import itertools

from .context import Assume, Context
from .nodes import (
    And, App, Compr, ComprSet, DepAnd, DepImp, Desc, Eq, ExistsS, ExistsT,
    ExistsUniqueT, ForallS, ForallT, Imp, Mem, Or, Pred, Top, Var,
    WarrantRef,
)


def context_env(ctx: Context) -> dict:
    env: dict = {}
    for e in ctx.entries:
        if isinstance(e, Assume):
            snapshot = dict(env)
            env = dict(env)
            env[e.name] = ("w", e.stmt, snapshot)
    return env


def struct_eq(a, b, ctx: Context | None = None) -> bool:
    """Proof-irrelevant structural equality; free warrantors resolve
    through the common context when one is given."""
    env = context_env(ctx) if ctx is not None else {}
    return env_struct_eq(a, env, b, env)


def env_struct_eq(a, env1: dict, b, env2: dict) -> bool:
    return _eq(a, env1, b, env2, itertools.count())


def _shadow(env: dict, name: str, binding) -> dict:
    env2 = dict(env)
    env2[name] = binding
    return env2


def _ref_eq(n1, env1, n2, env2, fresh) -> bool:
    if n1 is None or n2 is None:
        return n1 is None and n2 is None
    b1 = env1.get(n1)
    b2 = env2.get(n2)
    if b1 is None and b2 is None:
        return n1 == n2
    if b1 is None or b2 is None:
        return False
    if b1[0] != "w" or b2[0] != "w":
        return False
    return _eq(b1[1], b1[2], b2[1], b2[2], fresh)


def _binder_eq(x1, b1, env1, x2, b2, env2, fresh) -> bool:
    mark = ("c", next(fresh))
    return _eq(
        b1, _shadow(env1, x1, ("tv", mark)),
        b2, _shadow(env2, x2, ("tv", mark)),
        fresh,
    )


def _eq(a, env1: dict, b, env2: dict, fresh) -> bool:
    match a, b:
        case Var(name=n1), Var(name=n2):
            t1, t2 = env1.get(n1), env2.get(n2)
            if t1 is None and t2 is None:
                return n1 == n2
            return (
                t1 is not None and t2 is not None
                and t1[0] == "tv" and t2[0] == "tv" and t1[1] == t2[1]
            )
        case WarrantRef(name=n1), WarrantRef(name=n2):
            return _ref_eq(n1, env1, n2, env2, fresh)
        case Desc(ref=r1), Desc(ref=r2):
            return _ref_eq(r1.name, env1, r2.name, env2, fresh)
        case App(sym=s1, args=a1), App(sym=s2, args=a2):
            return (
                s1 == s2 and len(a1) == len(a2)
                and all(_eq(x, env1, y, env2, fresh) for x, y in zip(a1, a2))
            )
        case Compr(var=x1, ty=t1, body=c1), Compr(var=x2, ty=t2, body=c2):
            return t1 == t2 and _binder_eq(x1, c1, env1, x2, c2, env2, fresh)
        case ComprSet(var=x1, host=h1, body=c1), ComprSet(var=x2, host=h2, body=c2):
            return (
                _eq(h1, env1, h2, env2, fresh)
                and _binder_eq(x1, c1, env1, x2, c2, env2, fresh)
            )
        case Top(), Top():
            return True
        case (And(left=l1, right=r1), And(left=l2, right=r2)) | \
             (Or(left=l1, right=r1), Or(left=l2, right=r2)) | \
             (Imp(left=l1, right=r1), Imp(left=l2, right=r2)) | \
             (Eq(left=l1, right=r1), Eq(left=l2, right=r2)):
            return _eq(l1, env1, l2, env2, fresh) and _eq(r1, env1, r2, env2, fresh)
        case Mem(elem=e1, container=c1), Mem(elem=e2, container=c2):
            return _eq(e1, env1, e2, env2, fresh) and _eq(c1, env1, c2, env2, fresh)
        case (DepAnd(binder=z1, left=l1, right=r1), DepAnd(binder=z2, left=l2, right=r2)) | \
             (DepImp(binder=z1, left=l1, right=r1), DepImp(binder=z2, left=l2, right=r2)):
            if not _eq(l1, env1, l2, env2, fresh):
                return False
            return _eq(
                r1, _shadow(env1, z1, ("w", l1, env1)),
                r2, _shadow(env2, z2, ("w", l2, env2)),
                fresh,
            )
        case (ForallT(var=x1, ty=t1, body=c1), ForallT(var=x2, ty=t2, body=c2)) | \
             (ExistsT(var=x1, ty=t1, body=c1), ExistsT(var=x2, ty=t2, body=c2)) | \
             (ExistsUniqueT(var=x1, ty=t1, body=c1), ExistsUniqueT(var=x2, ty=t2, body=c2)):
            return t1 == t2 and _binder_eq(x1, c1, env1, x2, c2, env2, fresh)
        case (ForallS(var=x1, host=h1, body=c1), ForallS(var=x2, host=h2, body=c2)) | \
             (ExistsS(var=x1, host=h1, body=c1), ExistsS(var=x2, host=h2, body=c2)):
            return (
                _eq(h1, env1, h2, env2, fresh)
                and _binder_eq(x1, c1, env1, x2, c2, env2, fresh)
            )
        case Pred(sym=s1, args=a1), Pred(sym=s2, args=a2):
            return (
                s1 == s2 and len(a1) == len(a2)
                and all(_eq(x, env1, y, env2, fresh) for x, y in zip(a1, a2))
            )
    return False


def contexts_struct_eq(c1: Context, c2: Context) -> bool:
    """Entry-wise equality: kinds and names literal, payloads struct_eq."""
    from .context import SetDecl, TypeDecl
    if c1.sig != c2.sig or len(c1.entries) != len(c2.entries):
        return False
    env1: dict = {}
    env2: dict = {}
    for e1, e2 in zip(c1.entries, c2.entries):
        if type(e1) is not type(e2) or e1.name != e2.name:
            return False
        match e1, e2:
            case TypeDecl(ty=t1), TypeDecl(ty=t2):
                if t1 != t2:
                    return False
            case SetDecl(host=h1), SetDecl(host=h2):
                if not env_struct_eq(h1, env1, h2, env2):
                    return False
            case Assume(stmt=s1), Assume(stmt=s2):
                if not env_struct_eq(s1, env1, s2, env2):
                    return False
                env1 = _shadow(env1, e1.name, ("w", s1, dict(env1)))
                env2 = _shadow(env2, e2.name, ("w", s2, dict(env2)))
    return True
