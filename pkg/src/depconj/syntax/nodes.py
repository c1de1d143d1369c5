"""AST for the object language: types, terms, and statements.

Statements form a preorder over each context; the kernel manipulates them
purely syntactically. Two namespaces share one scope: ordinary (term)
variables and warrantor names. A binder of either kind shadows both.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Span:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


_SPAN = dict(default=None, compare=False, repr=False)


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class BaseType:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class SetType:
    elem: "Type"

    def __str__(self) -> str:
        return f"Set({self.elem})"


Type = BaseType | SetType


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class WarrantRef:
    """Reference to an in-scope assumption by name; None marks an
    unresolved slot left by vernacular input."""
    name: str | None
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class App:
    sym: str
    args: tuple["Term | WarrantRef", ...]
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class Compr:
    """{ var : ty | body } — a subset of ty carved out by body."""
    var: str
    ty: Type
    body: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class ComprSet:
    """{ var in host | body } — high level; elaborates to Compr."""
    var: str
    host: "Term"
    body: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class Desc:
    """Element described by a warrantor of a unique-existence statement."""
    ref: WarrantRef
    span: Span | None = field(**_SPAN)


Term = Var | App | Compr | ComprSet | Desc


# ------------------------------------------------------------ statements

@dataclass(frozen=True)
class Top:
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class And:
    left: "Statement"
    right: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class Or:
    left: "Statement"
    right: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class Imp:
    left: "Statement"
    right: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class DepAnd:
    """Dependent conjunction: the body may cite the truth of the left
    part through the binder."""
    binder: str
    left: "Statement"
    right: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class DepImp:
    binder: str
    left: "Statement"
    right: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class ForallT:
    var: str
    ty: Type
    body: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class ExistsT:
    var: str
    ty: Type
    body: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class ExistsUniqueT:
    var: str
    ty: Type
    body: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class ForallS:
    """forall var in host . body — high level."""
    var: str
    host: "Term"
    body: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class ExistsS:
    var: str
    host: "Term"
    body: "Statement"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class Eq:
    left: "Term"
    right: "Term"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class Mem:
    elem: "Term"
    container: "Term"
    span: Span | None = field(**_SPAN)


@dataclass(frozen=True)
class Pred:
    sym: str
    args: tuple["Term", ...]
    span: Span | None = field(**_SPAN)


Statement = (
    Top | And | Or | Imp | DepAnd | DepImp
    | ForallT | ExistsT | ExistsUniqueT | ForallS | ExistsS
    | Eq | Mem | Pred
)

Node = Statement | Term | WarrantRef

BINARY = (And, Or, Imp)
DEP_BINDERS = (DepAnd, DepImp)
TYPED_QUANTIFIERS = (ForallT, ExistsT, ExistsUniqueT)
SET_QUANTIFIERS = (ForallS, ExistsS)


# ------------------------------------------------------- free names

def free_term_vars(node: Node) -> frozenset[str]:
    """Free ordinary-variable names. Binders of either kind shadow."""
    match node:
        case Var(name=n):
            return frozenset((n,))
        case WarrantRef() | Top() | Desc():
            return frozenset()
        case App(args=args):
            return frozenset().union(*(free_term_vars(a) for a in args)) if args else frozenset()
        case Compr(var=x, body=b):
            return free_term_vars(b) - {x}
        case ComprSet(var=x, host=h, body=b):
            return free_term_vars(h) | (free_term_vars(b) - {x})
        case And(left=l, right=r) | Or(left=l, right=r) | Imp(left=l, right=r):
            return free_term_vars(l) | free_term_vars(r)
        case DepAnd(binder=z, left=l, right=r) | DepImp(binder=z, left=l, right=r):
            return free_term_vars(l) | (free_term_vars(r) - {z})
        case ForallT(var=x, body=b) | ExistsT(var=x, body=b) | ExistsUniqueT(var=x, body=b):
            return free_term_vars(b) - {x}
        case ForallS(var=x, host=h, body=b) | ExistsS(var=x, host=h, body=b):
            return free_term_vars(h) | (free_term_vars(b) - {x})
        case Eq(left=l, right=r):
            return free_term_vars(l) | free_term_vars(r)
        case Mem(elem=e, container=c):
            return free_term_vars(e) | free_term_vars(c)
        case Pred(args=args):
            return frozenset().union(*(free_term_vars(a) for a in args)) if args else frozenset()
    raise TypeError(f"not a node: {node!r}")


def free_warrantors(node: Node) -> frozenset[str]:
    """Free warrantor names (assumption references). Binders of either
    kind shadow; unresolved slots contribute nothing."""
    match node:
        case WarrantRef(name=None):
            return frozenset()
        case WarrantRef(name=n):
            return frozenset((n,))
        case Var() | Top():
            return frozenset()
        case Desc(ref=r):
            return free_warrantors(r)
        case App(args=args):
            return frozenset().union(*(free_warrantors(a) for a in args)) if args else frozenset()
        case Compr(var=x, body=b):
            return free_warrantors(b) - {x}
        case ComprSet(var=x, host=h, body=b):
            return free_warrantors(h) | (free_warrantors(b) - {x})
        case And(left=l, right=r) | Or(left=l, right=r) | Imp(left=l, right=r):
            return free_warrantors(l) | free_warrantors(r)
        case DepAnd(binder=z, left=l, right=r) | DepImp(binder=z, left=l, right=r):
            return free_warrantors(l) | (free_warrantors(r) - {z})
        case ForallT(var=x, body=b) | ExistsT(var=x, body=b) | ExistsUniqueT(var=x, body=b):
            return free_warrantors(b) - {x}
        case ForallS(var=x, host=h, body=b) | ExistsS(var=x, host=h, body=b):
            return free_warrantors(h) | (free_warrantors(b) - {x})
        case Eq(left=l, right=r):
            return free_warrantors(l) | free_warrantors(r)
        case Mem(elem=e, container=c):
            return free_warrantors(e) | free_warrantors(c)
        case Pred(args=args):
            return frozenset().union(*(free_warrantors(a) for a in args)) if args else frozenset()
    raise TypeError(f"not a node: {node!r}")


def free_names(node: Node) -> frozenset[str]:
    return free_term_vars(node) | free_warrantors(node)


def _children(node: Node) -> tuple[Node, ...]:
    match node:
        case Var() | WarrantRef() | Top():
            return ()
        case Desc(ref=r):
            return (r,)
        case App(args=args) | Pred(args=args):
            return tuple(args)
        case Compr(body=b):
            return (b,)
        case ComprSet(host=h, body=b):
            return (h, b)
        case And(left=l, right=r) | Or(left=l, right=r) | Imp(left=l, right=r):
            return (l, r)
        case DepAnd(left=l, right=r) | DepImp(left=l, right=r):
            return (l, r)
        case ForallT(body=b) | ExistsT(body=b) | ExistsUniqueT(body=b):
            return (b,)
        case ForallS(host=h, body=b) | ExistsS(host=h, body=b):
            return (h, b)
        case Eq(left=l, right=r):
            return (l, r)
        case Mem(elem=e, container=c):
            return (e, c)
    raise TypeError(f"not a node: {node!r}")


def subnodes(node: Node):
    """Yield node and every descendant, preorder."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(_children(n)))


def uses_description(node: Node) -> bool:
    """True if the node contains a description term or feeds any warrant
    slot of a function symbol — either way its meaning leans on a
    warrantor, which truth-value semantics cannot see."""
    for n in subnodes(node):
        match n:
            case Desc():
                return True
            case App(args=args):
                if any(isinstance(a, WarrantRef) for a in args):
                    return True
    return False


def desc_referenced(node: Node) -> frozenset[str]:
    """Warrantor names that occur free inside a description term."""
    match node:
        case Desc(ref=WarrantRef(name=n)):
            return frozenset((n,)) if n is not None else frozenset()
        case Var() | WarrantRef() | Top():
            return frozenset()
        case Compr(var=x, body=b):
            return desc_referenced(b) - {x}
        case DepAnd(binder=z, left=l, right=r) | DepImp(binder=z, left=l, right=r):
            return desc_referenced(l) | (desc_referenced(r) - {z})
        case ForallT(var=x, body=b) | ExistsT(var=x, body=b) | ExistsUniqueT(var=x, body=b):
            return desc_referenced(b) - {x}
        case ComprSet(var=x, host=h, body=b) | ForallS(var=x, host=h, body=b) | ExistsS(var=x, host=h, body=b):
            return desc_referenced(h) | (desc_referenced(b) - {x})
        case _:
            out: frozenset[str] = frozenset()
            for c in _children(node):
                out |= desc_referenced(c)
            return out


def is_low_level(node: Node) -> bool:
    """Low-level syntax: no set-bounded quantifiers, no set-bounded
    comprehensions."""
    return not any(
        isinstance(n, (ForallS, ExistsS, ComprSet)) for n in subnodes(node)
    )


def has_holes(node: Node) -> bool:
    return any(
        isinstance(n, WarrantRef) and n.name is None for n in subnodes(node)
    )


def bound_names(node: Node) -> frozenset[str]:
    """Every binder name occurring anywhere in the node."""
    out: set[str] = set()
    for n in subnodes(node):
        match n:
            case Compr(var=x) | ComprSet(var=x):
                out.add(x)
            case DepAnd(binder=z) | DepImp(binder=z):
                out.add(z)
            case ForallT(var=x) | ExistsT(var=x) | ExistsUniqueT(var=x):
                out.add(x)
            case ForallS(var=x) | ExistsS(var=x):
                out.add(x)
    return frozenset(out)


PRIME = "′"


def fresh_name(base: str, avoid) -> str:
    """Deterministic fresh-name scheme: append prime marks to the base
    until the result avoids the given names."""
    candidate = base
    while candidate in avoid:
        candidate += PRIME
    return candidate
