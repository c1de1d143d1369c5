"""Capture-avoiding substitution.

Ordinary variables are replaced by terms; warrantor names are only ever
renamed. Both kinds of binder shadow both maps, and binders are renamed
with the deterministic prime scheme when a replacement image would be
captured.
"""
from __future__ import annotations

from .nodes import (
    And, App, Compr, ComprSet, DepAnd, DepImp, Desc, Eq, ExistsS, ExistsT,
    ExistsUniqueT, ForallS, ForallT, Imp, Mem, Or, Pred, Top, Var,
    WarrantRef, Node, Statement, Term,
    free_names, free_term_vars, free_warrantors, fresh_name,
)
from .signature import Param, TermParam, WarrantParam


def substitute(node, term: Term, var: str):
    """node[term/var] — replace the free variable var by term."""
    return substitute_many(node, {var: term}, {})


def rename_warrantor(node, new: str, old: str):
    """node[new/old] on free warrantor references."""
    return substitute_many(node, {}, {old: new})


def substitute_many(node, term_map: dict[str, Term], warrant_map: dict[str, str]):
    if not term_map and not warrant_map:
        return node
    return _subst(node, dict(term_map), dict(warrant_map))


def _image_names(term_map: dict[str, Term], warrant_map: dict[str, str]) -> frozenset[str]:
    out: set[str] = set(warrant_map.values())
    for t in term_map.values():
        out |= free_names(t)
    return frozenset(out)


def _narrow(node: Node, term_map, warrant_map):
    """Keep only map entries whose key occurs free in node."""
    fv = free_term_vars(node)
    fw = free_warrantors(node)
    tm = {k: v for k, v in term_map.items() if k in fv}
    wm = {k: v for k, v in warrant_map.items() if k in fw}
    return tm, wm


def _under_binder(binder: str, body, term_map, warrant_map, extra_avoid=()):
    """Substitute inside a binder body, renaming the binder on capture.

    Returns (new_binder, new_body)."""
    tm = {k: v for k, v in term_map.items() if k != binder}
    wm = {k: v for k, v in warrant_map.items() if k != binder}
    tm, wm = _narrow(body, tm, wm)
    if not tm and not wm:
        return binder, body
    images = _image_names(tm, wm)
    if binder in images:
        avoid = images | free_names(body) | set(extra_avoid) | {binder}
        fresh = fresh_name(binder, avoid)
        tm[binder] = Var(fresh)
        wm[binder] = fresh
        return fresh, _subst(body, tm, wm)
    return binder, _subst(body, tm, wm)


def _subst(node, term_map, warrant_map):
    match node:
        case Var(name=n):
            return term_map.get(n, node)
        case WarrantRef(name=None):
            return node
        case WarrantRef(name=n):
            new = warrant_map.get(n)
            return WarrantRef(new) if new is not None else node
        case Desc(ref=r):
            return Desc(_subst(r, term_map, warrant_map))
        case App(sym=s, args=args):
            return App(s, tuple(_subst(a, term_map, warrant_map) for a in args))
        case Compr(var=x, ty=ty, body=b):
            x2, b2 = _under_binder(x, b, term_map, warrant_map)
            return Compr(x2, ty, b2)
        case ComprSet(var=x, host=h, body=b):
            h2 = _subst(h, term_map, warrant_map)
            x2, b2 = _under_binder(x, b, term_map, warrant_map)
            return ComprSet(x2, h2, b2)
        case Top():
            return node
        case And(left=l, right=r):
            return And(_subst(l, term_map, warrant_map), _subst(r, term_map, warrant_map))
        case Or(left=l, right=r):
            return Or(_subst(l, term_map, warrant_map), _subst(r, term_map, warrant_map))
        case Imp(left=l, right=r):
            return Imp(_subst(l, term_map, warrant_map), _subst(r, term_map, warrant_map))
        case DepAnd(binder=z, left=l, right=r):
            l2 = _subst(l, term_map, warrant_map)
            z2, r2 = _under_binder(z, r, term_map, warrant_map, free_names(l2))
            return DepAnd(z2, l2, r2)
        case DepImp(binder=z, left=l, right=r):
            l2 = _subst(l, term_map, warrant_map)
            z2, r2 = _under_binder(z, r, term_map, warrant_map, free_names(l2))
            return DepImp(z2, l2, r2)
        case ForallT(var=x, ty=ty, body=b):
            x2, b2 = _under_binder(x, b, term_map, warrant_map)
            return ForallT(x2, ty, b2)
        case ExistsT(var=x, ty=ty, body=b):
            x2, b2 = _under_binder(x, b, term_map, warrant_map)
            return ExistsT(x2, ty, b2)
        case ExistsUniqueT(var=x, ty=ty, body=b):
            x2, b2 = _under_binder(x, b, term_map, warrant_map)
            return ExistsUniqueT(x2, ty, b2)
        case ForallS(var=x, host=h, body=b):
            h2 = _subst(h, term_map, warrant_map)
            x2, b2 = _under_binder(x, b, term_map, warrant_map)
            return ForallS(x2, h2, b2)
        case ExistsS(var=x, host=h, body=b):
            h2 = _subst(h, term_map, warrant_map)
            x2, b2 = _under_binder(x, b, term_map, warrant_map)
            return ExistsS(x2, h2, b2)
        case Eq(left=l, right=r):
            return Eq(_subst(l, term_map, warrant_map), _subst(r, term_map, warrant_map))
        case Mem(elem=e, container=c):
            return Mem(_subst(e, term_map, warrant_map), _subst(c, term_map, warrant_map))
        case Pred(sym=s, args=args):
            return Pred(s, tuple(_subst(a, term_map, warrant_map) for a in args))
    raise TypeError(f"not a node: {node!r}")


def rename_warrantors_uniform(node, mapping: dict[str, str]):
    """Rename warrantor names literally, binders and references alike.

    Unlike rename_warrantor this does not stop at shadowing binders: a
    DepAnd/DepImp binder in the mapping is renamed together with every
    reference to it. Binding structure is preserved exactly when the
    mapping is a bijection applied to the whole tree at once, which is
    what consistent assumption renaming needs."""
    if not mapping:
        return node
    return _uniform(node, mapping)


def _uniform(node, m: dict[str, str]):
    sp = node.span
    match node:
        case Var() | Top() | WarrantRef(name=None):
            return node
        case WarrantRef(name=n):
            return WarrantRef(m.get(n, n), span=sp)
        case Desc(ref=r):
            return Desc(_uniform(r, m), span=sp)
        case App(sym=s, args=args):
            return App(s, tuple(_uniform(a, m) for a in args), span=sp)
        case Compr(var=x, ty=ty, body=b):
            return Compr(x, ty, _uniform(b, m), span=sp)
        case ComprSet(var=x, host=h, body=b):
            return ComprSet(x, _uniform(h, m), _uniform(b, m), span=sp)
        case And(left=l, right=r):
            return And(_uniform(l, m), _uniform(r, m), span=sp)
        case Or(left=l, right=r):
            return Or(_uniform(l, m), _uniform(r, m), span=sp)
        case Imp(left=l, right=r):
            return Imp(_uniform(l, m), _uniform(r, m), span=sp)
        case DepAnd(binder=z, left=l, right=r):
            return DepAnd(m.get(z, z), _uniform(l, m), _uniform(r, m), span=sp)
        case DepImp(binder=z, left=l, right=r):
            return DepImp(m.get(z, z), _uniform(l, m), _uniform(r, m), span=sp)
        case ForallT(var=x, ty=ty, body=b):
            return ForallT(x, ty, _uniform(b, m), span=sp)
        case ExistsT(var=x, ty=ty, body=b):
            return ExistsT(x, ty, _uniform(b, m), span=sp)
        case ExistsUniqueT(var=x, ty=ty, body=b):
            return ExistsUniqueT(x, ty, _uniform(b, m), span=sp)
        case ForallS(var=x, host=h, body=b):
            return ForallS(x, _uniform(h, m), _uniform(b, m), span=sp)
        case ExistsS(var=x, host=h, body=b):
            return ExistsS(x, _uniform(h, m), _uniform(b, m), span=sp)
        case Eq(left=l, right=r):
            return Eq(_uniform(l, m), _uniform(r, m), span=sp)
        case Mem(elem=e, container=c):
            return Mem(_uniform(e, m), _uniform(c, m), span=sp)
        case Pred(sym=s, args=args):
            return Pred(s, tuple(_uniform(a, m) for a in args), span=sp)
    raise TypeError(f"not a node: {node!r}")


def instantiate_schema(schema: Statement, params: tuple[Param, ...],
                       args) -> Statement:
    """Instantiate a warrant-param schema at actual arguments.

    args runs parallel to params; term params map to their term argument,
    warrant params rename to the supplied reference. An unresolved slot
    among the earlier warrant arguments leaves the schema reference
    dangling, which no assumption will match.
    """
    term_map: dict[str, Term] = {}
    warrant_map: dict[str, str] = {}
    for p, a in zip(params, args):
        match p:
            case TermParam(name=n):
                term_map[n] = a
            case WarrantParam(name=n):
                if isinstance(a, WarrantRef) and a.name is not None:
                    warrant_map[n] = a.name
    return substitute_many(schema, term_map, warrant_map)
