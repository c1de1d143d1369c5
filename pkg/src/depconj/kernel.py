"""Proof kernel: derivation trees over entailment judgments.

A derivation node names a primitive rule, carries its parameters, and
points at its premise subtrees. ``check`` walks the tree, validates
every rule application including side conditions and meaningfulness of
all statements involved, and returns the judgment the tree establishes.
Nothing outside this module can mint a judgment.

The kernel works on the core language only. Set-bounded quantifiers,
set-bounded comprehensions, set membership declarations in contexts,
and unresolved warrant slots are all rejected with HighLevelLeak:
they must be compiled away before a tree reaches the kernel.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .errors import Diagnostic
from .syntax.context import Assume, Context, ContextEntry, SetDecl, TypeDecl
from .syntax.nodes import (
    And, DepAnd, DepImp, ExistsT, ForallT, Imp, Mem, Or, Statement, Term,
    Top, Compr, Var, WarrantRef, free_term_vars, free_warrantors,
    is_low_level, has_holes,
)
from .syntax.subst import rename_warrantors_uniform, substitute
from .syntax.wellformed import meaningful, synth_type
from .syntax.equality import contexts_struct_eq, struct_eq
from .syntax.nodes import SetType


class KernelError(Exception):
    def __init__(self, message: str, rule: "RuleName | None" = None):
        super().__init__(message)
        self.message = message
        self.rule = rule

    def __str__(self) -> str:
        tag = f"[{self.rule.value}] " if self.rule else ""
        return f"{tag}{self.message}"


class RuleMismatch(KernelError):
    """Premise judgments or parameters do not fit the rule's shape."""


class SideConditionFailed(KernelError):
    """A freshness or variable-occurrence condition is violated."""


class NotMeaningful(KernelError):
    """A statement involved in the rule fails scope or type checking."""


class HighLevelLeak(KernelError):
    """Surface-level material reached the kernel unelaborated."""


class RuleName(enum.Enum):
    REFL = "Refl"
    TRANS = "Trans"
    TOP_INTRO = "TopIntro"
    AND_INTRO = "AndIntro"
    AND_ELIM_L = "AndElimL"
    AND_ELIM_R = "AndElimR"
    OR_INTRO_L = "OrIntroL"
    OR_INTRO_R = "OrIntroR"
    OR_ELIM = "OrElim"
    IMP_INTRO = "ImpIntro"
    IMP_UNCURRY = "ImpUncurry"
    FORALL_INTRO = "ForallIntro"
    FORALL_TRANSPOSE = "ForallTranspose"
    EXISTS_INTRO = "ExistsIntro"
    EXISTS_TRANSPOSE = "ExistsTranspose"
    SUBST = "Subst"
    WEAKEN = "Weaken"
    SPECIAL_FWD = "SpecialFwd"
    SPECIAL_BWD = "SpecialBwd"
    DEP_AND_TRANSPOSE = "DepAndTranspose"
    DEP_AND_UNTRANSPOSE = "DepAndUntranspose"
    DEP_IMP_TRANSPOSE = "DepImpTranspose"
    DEP_IMP_UNTRANSPOSE = "DepImpUntranspose"
    DESCRIPTION = "Description"
    INCL_REFL = "InclRefl"
    INCL_TRANS = "InclTrans"
    COMPR_TRANSPOSE = "ComprTranspose"
    COMPR_UNTRANSPOSE = "ComprUntranspose"


RULE_BY_NAME = {r.value: r for r in RuleName}


@dataclass(frozen=True)
class Judgment:
    """ctx |- lhs <= rhs (statements), or ctx |- lhs subset rhs (sets)."""
    ctx: Context
    kind: str  # "leq" | "subset"
    lhs: Any
    rhs: Any

    def __str__(self) -> str:
        from .printer import format_judgment
        return format_judgment(self.ctx, self.kind, self.lhs, self.rhs)


@dataclass(frozen=True)
class Derivation:
    rule: RuleName
    params: dict = field(default_factory=dict)
    premises: tuple["Derivation", ...] = ()
    _judgment: Judgment | None = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        if not isinstance(self.rule, RuleName):
            raise RuleMismatch(f"unknown rule {self.rule!r}")


def check(d: Derivation) -> Judgment:
    """Validate the whole tree; returns (and caches) its judgment."""
    if d._judgment is not None:
        return d._judgment
    j = _RULE_CHECKS[d.rule](d)
    object.__setattr__(d, "_judgment", j)
    return j


def judgment_of(d: Derivation) -> Judgment:
    return check(d)


# ----------------------------------------------------------- utilities

def _param(d: Derivation, key: str, cls) -> Any:
    v = d.params.get(key)
    if not isinstance(v, cls):
        want = getattr(cls, "__name__", None) or str(cls)
        raise RuleMismatch(
            f"parameter {key!r} must be a {want}", d.rule
        )
    return v

def _no_extra_params(d: Derivation, *keys: str) -> None:
    extra = set(d.params) - set(keys)
    if extra:
        raise RuleMismatch(
            f"unexpected parameters {sorted(extra)}", d.rule
        )


def _arity(d: Derivation, n: int) -> None:
    if len(d.premises) != n:
        raise RuleMismatch(
            f"takes {n} premise(s), got {len(d.premises)}", d.rule
        )


def _leq(d: Derivation, i: int) -> Judgment:
    j = check(d.premises[i])
    if j.kind != "leq":
        raise RuleMismatch("premise must be a statement judgment", d.rule)
    return j


def _subset(d: Derivation, i: int) -> Judgment:
    j = check(d.premises[i])
    if j.kind != "subset":
        raise RuleMismatch("premise must be a set inclusion", d.rule)
    return j


def _same_ctx(d: Derivation, j1: Judgment, j2: Judgment) -> None:
    if not contexts_struct_eq(j1.ctx, j2.ctx):
        raise RuleMismatch("premise contexts differ", d.rule)


def _meaningful(d: Derivation, ctx: Context, s: Statement) -> None:
    try:
        meaningful(ctx, s)
    except Diagnostic as exc:
        raise NotMeaningful(str(exc), d.rule) from exc


def _reject_high(d: Derivation, ctx: Context, *stmts) -> None:
    if not ctx.is_low_level():
        raise HighLevelLeak("context declares set membership", d.rule)
    for s in stmts:
        if not is_low_level(s):
            raise HighLevelLeak(
                "set-bounded construct reached the kernel", d.rule
            )
        if has_holes(s):
            raise HighLevelLeak(
                "unresolved warrant slot reached the kernel", d.rule
            )


def _ctx_param(d: Derivation) -> Context:
    """Fetch and fully validate a leaf's context parameter. Composite
    rules inherit validity from their premises, so only leaves pay."""
    ctx = _param(d, "ctx", Context)
    from .syntax.wellformed import validate_context
    try:
        validate_context(ctx)
    except Diagnostic as exc:
        raise NotMeaningful(str(exc), d.rule) from exc
    return ctx


def _extend(d: Derivation, ctx: Context, entry: ContextEntry) -> Context:
    from .syntax.context import extend_context
    try:
        return extend_context(ctx, entry)
    except Diagnostic as exc:
        raise SideConditionFailed(str(exc), d.rule) from exc


def _pop_assume(d: Derivation, ctx: Context) -> tuple[Context, str, Statement]:
    if not ctx.entries or not isinstance(ctx.entries[-1], Assume):
        raise SideConditionFailed(
            "premise context must end with an assumption", d.rule
        )
    last = ctx.entries[-1]
    return ctx.pop()[0], last.name, last.stmt


def _pop_typedecl(d: Derivation, ctx: Context) -> tuple[Context, str, Any]:
    if not ctx.entries or not isinstance(ctx.entries[-1], TypeDecl):
        raise SideConditionFailed(
            "premise context must end with a variable declaration", d.rule
        )
    last = ctx.entries[-1]
    return ctx.pop()[0], last.name, last.ty


# ------------------------------------------------------------- leaves

def _chk_refl(d: Derivation) -> Judgment:
    _arity(d, 0)
    _no_extra_params(d, "stmt", "ctx")
    ctx = _ctx_param(d)
    s = _param(d, "stmt", Statement)
    _reject_high(d, ctx, s)
    _meaningful(d, ctx, s)
    return Judgment(ctx, "leq", s, s)


def _chk_top_intro(d: Derivation) -> Judgment:
    _arity(d, 0)
    _no_extra_params(d, "stmt", "ctx")
    ctx = _ctx_param(d)
    s = _param(d, "stmt", Statement)
    _reject_high(d, ctx, s)
    _meaningful(d, ctx, s)
    return Judgment(ctx, "leq", s, Top())


def _chk_and_elim(d: Derivation, keep_left: bool) -> Judgment:
    _arity(d, 0)
    _no_extra_params(d, "left", "right", "ctx")
    ctx = _ctx_param(d)
    l = _param(d, "left", Statement)
    r = _param(d, "right", Statement)
    whole = And(l, r)
    _reject_high(d, ctx, whole)
    _meaningful(d, ctx, whole)
    return Judgment(ctx, "leq", whole, l if keep_left else r)


def _chk_or_intro(d: Derivation, from_left: bool) -> Judgment:
    _arity(d, 0)
    _no_extra_params(d, "left", "right", "ctx")
    ctx = _ctx_param(d)
    l = _param(d, "left", Statement)
    r = _param(d, "right", Statement)
    whole = Or(l, r)
    _reject_high(d, ctx, whole)
    _meaningful(d, ctx, whole)
    return Judgment(ctx, "leq", l if from_left else r, whole)


def _chk_incl_refl(d: Derivation) -> Judgment:
    _arity(d, 0)
    _no_extra_params(d, "set", "ctx")
    ctx = _ctx_param(d)
    t = _param(d, "set", Term)
    _reject_high(d, ctx)
    if not is_low_level(t) or has_holes(t):
        raise HighLevelLeak("set term is not in the core language", d.rule)
    try:
        ty = synth_type(ctx, t)
    except Diagnostic as exc:
        raise NotMeaningful(str(exc), d.rule) from exc
    if not isinstance(ty, SetType):
        raise RuleMismatch("term does not denote a set", d.rule)
    return Judgment(ctx, "subset", t, t)


def _chk_description(d: Derivation) -> Judgment:
    _arity(d, 0)
    _no_extra_params(d, "binder", "ctx")
    ctx = _ctx_param(d)
    name = _param(d, "binder", str)
    _reject_high(d, ctx)
    entry = ctx.assumption(name)
    if entry is None:
        raise SideConditionFailed(
            f"no assumption named {name} in the context", d.rule
        )
    from .syntax.nodes import Desc, ExistsUniqueT
    s = entry.stmt
    if not isinstance(s, ExistsUniqueT):
        raise RuleMismatch(
            f"assumption {name} is not a unique existence", d.rule
        )
    witness = Desc(WarrantRef(name))
    body = substitute(s.body, witness, s.var)
    _meaningful(d, ctx, body)
    return Judgment(ctx, "leq", Top(), body)


# --------------------------------------------------------- composites

def _chk_trans(d: Derivation) -> Judgment:
    _arity(d, 2)
    _no_extra_params(d)
    j1, j2 = _leq(d, 0), _leq(d, 1)
    _same_ctx(d, j1, j2)
    if not struct_eq(j1.rhs, j2.lhs, j1.ctx):
        raise RuleMismatch("middle statements do not match", d.rule)
    return Judgment(j1.ctx, "leq", j1.lhs, j2.rhs)


def _chk_and_intro(d: Derivation) -> Judgment:
    _arity(d, 2)
    _no_extra_params(d)
    j1, j2 = _leq(d, 0), _leq(d, 1)
    _same_ctx(d, j1, j2)
    if not struct_eq(j1.lhs, j2.lhs, j1.ctx):
        raise RuleMismatch("premises start from different statements", d.rule)
    return Judgment(j1.ctx, "leq", j1.lhs, And(j1.rhs, j2.rhs))


def _chk_or_elim(d: Derivation) -> Judgment:
    _arity(d, 2)
    _no_extra_params(d)
    j1, j2 = _leq(d, 0), _leq(d, 1)
    _same_ctx(d, j1, j2)
    if not struct_eq(j1.rhs, j2.rhs, j1.ctx):
        raise RuleMismatch("premises end at different statements", d.rule)
    return Judgment(j1.ctx, "leq", Or(j1.lhs, j2.lhs), j1.rhs)


def _chk_imp_intro(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    if not isinstance(j.lhs, And):
        raise RuleMismatch(
            "premise left side must be a conjunction", d.rule
        )
    return Judgment(
        j.ctx, "leq", j.lhs.left, Imp(j.lhs.right, j.rhs)
    )


def _chk_imp_uncurry(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    if not isinstance(j.rhs, Imp):
        raise RuleMismatch(
            "premise right side must be an implication", d.rule
        )
    return Judgment(
        j.ctx, "leq", And(j.lhs, j.rhs.left), j.rhs.right
    )


def _chk_forall_intro(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    prefix, x, ty = _pop_typedecl(d, j.ctx)
    if x in free_term_vars(j.lhs):
        raise SideConditionFailed(
            f"{x} occurs free on the left of the premise", d.rule
        )
    return Judgment(prefix, "leq", j.lhs, ForallT(x, ty, j.rhs))


def _chk_forall_transpose(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    if not isinstance(j.rhs, ForallT):
        raise RuleMismatch(
            "premise right side must be a universal", d.rule
        )
    q = j.rhs
    ext = _extend(d, j.ctx, TypeDecl(q.var, q.ty))
    return Judgment(ext, "leq", j.lhs, q.body)


def _chk_exists_intro(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    prefix, x, ty = _pop_typedecl(d, j.ctx)
    if x in free_term_vars(j.rhs):
        raise SideConditionFailed(
            f"{x} occurs free on the right of the premise", d.rule
        )
    return Judgment(prefix, "leq", ExistsT(x, ty, j.lhs), j.rhs)


def _chk_exists_transpose(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    if not isinstance(j.lhs, ExistsT):
        raise RuleMismatch(
            "premise left side must be an existential", d.rule
        )
    q = j.lhs
    ext = _extend(d, j.ctx, TypeDecl(q.var, q.ty))
    return Judgment(ext, "leq", q.body, j.rhs)


def _chk_subst(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d, "term")
    j = _leq(d, 0)
    a = _param(d, "term", Term)
    prefix, x, ty = _pop_typedecl(d, j.ctx)
    if not is_low_level(a) or has_holes(a):
        raise HighLevelLeak("substituted term is not core", d.rule)
    try:
        got = synth_type(prefix, a)
    except Diagnostic as exc:
        raise NotMeaningful(str(exc), d.rule) from exc
    if got != ty:
        raise SideConditionFailed(
            f"substituted term has type {got}, variable expects {ty}", d.rule
        )
    return Judgment(
        prefix, "leq", substitute(j.lhs, a, x), substitute(j.rhs, a, x)
    )


def _chk_weaken(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d, "entry")
    j = _leq(d, 0)
    entry = _param(d, "entry", (TypeDecl, SetDecl, Assume))
    if isinstance(entry, SetDecl):
        raise HighLevelLeak("context declares set membership", d.rule)
    ext = _extend(d, j.ctx, entry)
    return Judgment(ext, "leq", j.lhs, j.rhs)


def _chk_special_fwd(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d, "binder")
    j = _leq(d, 0)
    name = _param(d, "binder", str)
    if not isinstance(j.lhs, And):
        raise RuleMismatch(
            "premise left side must be a conjunction", d.rule
        )
    ext = _extend(d, j.ctx, Assume(name, j.lhs.left))
    return Judgment(ext, "leq", j.lhs.right, j.rhs)


def _chk_special_bwd(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    prefix, name, assumed = _pop_assume(d, j.ctx)
    used = free_warrantors(j.lhs) | free_warrantors(j.rhs)
    if name in used:
        raise SideConditionFailed(
            f"assumption {name} is still referenced", d.rule
        )
    return Judgment(prefix, "leq", And(assumed, j.lhs), j.rhs)


def _chk_dep_and_transpose(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    if not isinstance(j.lhs, DepAnd):
        raise RuleMismatch(
            "premise left side must be a dependent conjunction", d.rule
        )
    s = j.lhs
    ext = _extend(d, j.ctx, Assume(s.binder, s.left))
    return Judgment(ext, "leq", s.right, j.rhs)


def _chk_dep_and_untranspose(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    prefix, name, assumed = _pop_assume(d, j.ctx)
    if name in free_warrantors(j.rhs):
        raise SideConditionFailed(
            f"assumption {name} is still referenced on the right", d.rule
        )
    return Judgment(prefix, "leq", DepAnd(name, assumed, j.lhs), j.rhs)


def _chk_dep_imp_transpose(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    prefix, name, assumed = _pop_assume(d, j.ctx)
    if name in free_warrantors(j.lhs):
        raise SideConditionFailed(
            f"assumption {name} is still referenced on the left", d.rule
        )
    return Judgment(prefix, "leq", j.lhs, DepImp(name, assumed, j.rhs))


def _chk_dep_imp_untranspose(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    if not isinstance(j.rhs, DepImp):
        raise RuleMismatch(
            "premise right side must be a dependent implication", d.rule
        )
    s = j.rhs
    ext = _extend(d, j.ctx, Assume(s.binder, s.left))
    return Judgment(ext, "leq", j.lhs, s.right)


def _chk_incl_trans(d: Derivation) -> Judgment:
    _arity(d, 2)
    _no_extra_params(d)
    j1, j2 = _subset(d, 0), _subset(d, 1)
    _same_ctx(d, j1, j2)
    if not struct_eq(j1.rhs, j2.lhs, j1.ctx):
        raise RuleMismatch("middle sets do not match", d.rule)
    return Judgment(j1.ctx, "subset", j1.lhs, j2.rhs)


def _chk_compr_transpose(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _subset(d, 0)
    if not isinstance(j.lhs, Compr):
        raise RuleMismatch(
            "premise left side must be a comprehension", d.rule
        )
    c = j.lhs
    ext = _extend(d, j.ctx, TypeDecl(c.var, c.ty))
    return Judgment(ext, "leq", c.body, Mem(Var(c.var), j.rhs))


def _chk_compr_untranspose(d: Derivation) -> Judgment:
    _arity(d, 1)
    _no_extra_params(d)
    j = _leq(d, 0)
    prefix, x, ty = _pop_typedecl(d, j.ctx)
    if not isinstance(j.rhs, Mem) or j.rhs.elem != Var(x):
        raise RuleMismatch(
            "premise right side must assert membership of the "
            "declared variable", d.rule
        )
    target = j.rhs.container
    if x in free_term_vars(target):
        raise SideConditionFailed(
            f"{x} occurs free in the containing set", d.rule
        )
    return Judgment(prefix, "subset", Compr(x, ty, j.lhs), target)


_RULE_CHECKS = {
    RuleName.REFL: _chk_refl,
    RuleName.TRANS: _chk_trans,
    RuleName.TOP_INTRO: _chk_top_intro,
    RuleName.AND_INTRO: _chk_and_intro,
    RuleName.AND_ELIM_L: lambda d: _chk_and_elim(d, True),
    RuleName.AND_ELIM_R: lambda d: _chk_and_elim(d, False),
    RuleName.OR_INTRO_L: lambda d: _chk_or_intro(d, True),
    RuleName.OR_INTRO_R: lambda d: _chk_or_intro(d, False),
    RuleName.OR_ELIM: _chk_or_elim,
    RuleName.IMP_INTRO: _chk_imp_intro,
    RuleName.IMP_UNCURRY: _chk_imp_uncurry,
    RuleName.FORALL_INTRO: _chk_forall_intro,
    RuleName.FORALL_TRANSPOSE: _chk_forall_transpose,
    RuleName.EXISTS_INTRO: _chk_exists_intro,
    RuleName.EXISTS_TRANSPOSE: _chk_exists_transpose,
    RuleName.SUBST: _chk_subst,
    RuleName.WEAKEN: _chk_weaken,
    RuleName.SPECIAL_FWD: _chk_special_fwd,
    RuleName.SPECIAL_BWD: _chk_special_bwd,
    RuleName.DEP_AND_TRANSPOSE: _chk_dep_and_transpose,
    RuleName.DEP_AND_UNTRANSPOSE: _chk_dep_and_untranspose,
    RuleName.DEP_IMP_TRANSPOSE: _chk_dep_imp_transpose,
    RuleName.DEP_IMP_UNTRANSPOSE: _chk_dep_imp_untranspose,
    RuleName.DESCRIPTION: _chk_description,
    RuleName.INCL_REFL: _chk_incl_refl,
    RuleName.INCL_TRANS: _chk_incl_trans,
    RuleName.COMPR_TRANSPOSE: _chk_compr_transpose,
    RuleName.COMPR_UNTRANSPOSE: _chk_compr_untranspose,
}

assert set(_RULE_CHECKS) == set(RuleName)


# ---------------------------------------------------------- renaming

def rename_assumptions(d: Derivation, mapping: dict[str, str]) -> Derivation:
    """Rename assumption names consistently through a whole tree:
    in every statement, term, context, and name-valued parameter."""
    def fix_stmt(s):
        return rename_warrantors_uniform(s, mapping)

    def fix_entry(e: ContextEntry) -> ContextEntry:
        match e:
            case TypeDecl():
                return e
            case SetDecl(name, host):
                return SetDecl(name, fix_stmt(host))
            case Assume(name, stmt):
                return Assume(mapping.get(name, name), fix_stmt(stmt))
        raise TypeError(e)

    def fix_value(key: str, v):
        if isinstance(v, Context):
            return Context(v.sig, tuple(fix_entry(e) for e in v.entries))
        if isinstance(v, (TypeDecl, SetDecl, Assume)):
            return fix_entry(v)
        if isinstance(v, str):
            return mapping.get(v, v) if key == "binder" else v
        return fix_stmt(v)

    return Derivation(
        d.rule,
        {k: fix_value(k, v) for k, v in d.params.items()},
        tuple(rename_assumptions(p, mapping) for p in d.premises),
    )
