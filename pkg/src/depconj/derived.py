"""Derived rules: named constructors that assemble kernel trees.

Each constructor builds a specific derivation shape out of primitive
rules, runs it through the kernel, and returns the checked tree. The
kernel stays the sole authority: nothing here mints judgments, it only
arranges rule applications.

Adjunctions appear twice. ``derive`` exposes their units and co-units
as ready-made derivations, and ``AdjunctionInstance`` reifies the
transposition bijection itself so instances can be composed: the
two-level transposes used by the elaborator are compositions of two
one-level instances.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .errors import Diagnostic
from .kernel import Derivation, Judgment, KernelError, RuleName as R, check
from .syntax.context import Assume, Context, TypeDecl
from .syntax.equality import contexts_struct_eq
from .syntax.nodes import (
    And, Compr, DepAnd, DepImp, ExistsT, ForallT, Imp, Mem, SetType,
    Statement, Term, Top, Type, Var,
)
from .syntax.wellformed import synth_type


class BadArgs(Exception):
    """Arguments do not satisfy the constructor's precondition."""


class DomainMismatch(Exception):
    """Adjunction instances do not align for composition."""


class DerivedRuleName(enum.Enum):
    UNIT_OF = "UnitOf"
    COUNIT_OF = "CounitOf"
    ASSUMPTION_TRUTH = "AssumptionTruth"
    DEP_MODUS_PONENS = "DepModusPonens"
    DEP_MODUS_PONENS_SIMPLIFIED = "DepModusPonensSimplified"
    DEP_AND_EQUIV_FWD = "DepAndEquivFwd"
    DEP_AND_EQUIV_BWD = "DepAndEquivBwd"
    DEP_IMP_EQUIV_FWD = "DepImpEquivFwd"
    DEP_IMP_EQUIV_BWD = "DepImpEquivBwd"
    ELAB_FORALL_ADJ = "ElabForallAdj"
    ELAB_EXISTS_ADJ = "ElabExistsAdj"
    ELAB_COMPR_ADJ = "ElabComprAdj"


DERIVED_BY_NAME = {n.value: n for n in DerivedRuleName}

ADJUNCTIONS = (
    "conj", "disj", "imp", "forall", "exists", "dep_and", "dep_imp", "compr",
)


def derive(name: DerivedRuleName, ctx: Context, **params) -> Derivation:
    """Build and kernel-check the named derivation over ctx."""
    builder = _BUILDERS.get(name)
    if builder is None:
        raise BadArgs(f"no constructor for {name!r}")
    try:
        d = builder(ctx, params)
        check(d)
    except (KernelError, Diagnostic) as exc:
        raise BadArgs(str(exc)) from exc
    return d


# --------------------------------------------------------- access help

def _need(params: dict, key: str, cls) -> object:
    v = params.get(key)
    if not isinstance(v, cls):
        want = getattr(cls, "__name__", None) or str(cls)
        raise BadArgs(f"parameter {key!r} must be a {want}")
    return v


def _opt(params: dict, key: str, cls, default):
    if key not in params or params[key] is None:
        return default
    return _need(params, key, cls)


def _refl(s: Statement, ctx: Context) -> Derivation:
    return Derivation(R.REFL, {"stmt": s, "ctx": ctx})


def _assumed(ctx: Context, binder: str, e: Statement) -> Context:
    return ctx.snoc(Assume(binder, e))


def _comm(e: Statement, f: Statement, ctx: Context) -> Derivation:
    """E /\\ F <= F /\\ E."""
    return Derivation(R.AND_INTRO, premises=(
        Derivation(R.AND_ELIM_R, {"left": e, "right": f, "ctx": ctx}),
        Derivation(R.AND_ELIM_L, {"left": e, "right": f, "ctx": ctx}),
    ))


def _host_of(ctx: Context, set_term: Term) -> Type:
    try:
        ty = synth_type(ctx, set_term)
    except Diagnostic as exc:
        raise BadArgs(str(exc)) from exc
    if not isinstance(ty, SetType):
        raise BadArgs("the 'set' parameter must denote a set")
    return ty.elem


# ----------------------------------------------------- unit and counit

def _unit_of(ctx: Context, params: dict) -> Derivation:
    adj = _need(params, "adjunction", str)
    match adj:
        case "conj":
            e = _need(params, "E", Statement)
            return Derivation(R.AND_INTRO, premises=(
                _refl(e, ctx), _refl(e, ctx),
            ))
        case "disj":
            e = _need(params, "E", Statement)
            f = _need(params, "F", Statement)
            side = _need(params, "side", str)
            rule = R.OR_INTRO_L if side == "left" else R.OR_INTRO_R
            return Derivation(rule, {"left": e, "right": f, "ctx": ctx})
        case "imp":
            e = _need(params, "E", Statement)
            f = _need(params, "F", Statement)
            return Derivation(R.IMP_INTRO, premises=(
                _refl(And(e, f), ctx),
            ))
        case "forall":
            x = _need(params, "x", str)
            ty = _need(params, "ty", Type)
            e = _need(params, "E", Statement)
            return Derivation(R.FORALL_INTRO, premises=(
                _refl(e, ctx.snoc(TypeDecl(x, ty))),
            ))
        case "exists":
            x = _need(params, "x", str)
            ty = _need(params, "ty", Type)
            e = _need(params, "E", Statement)
            return Derivation(R.EXISTS_TRANSPOSE, premises=(
                _refl(ExistsT(x, ty, e), ctx),
            ))
        case "dep_and":
            z = _need(params, "binder", str)
            e = _need(params, "E", Statement)
            f = _need(params, "F", Statement)
            return Derivation(R.DEP_AND_TRANSPOSE, premises=(
                _refl(DepAnd(z, e, f), ctx),
            ))
        case "dep_imp":
            z = _need(params, "binder", str)
            e = _need(params, "E", Statement)
            f = _need(params, "F", Statement)
            return Derivation(R.DEP_IMP_TRANSPOSE, premises=(
                _refl(f, _assumed(ctx, z, e)),
            ))
        case "compr":
            x = _need(params, "x", str)
            ty = _need(params, "ty", Type)
            e = _need(params, "E", Statement)
            return Derivation(R.COMPR_TRANSPOSE, premises=(
                Derivation(R.INCL_REFL, {
                    "set": Compr(x, ty, e), "ctx": ctx,
                }),
            ))
    raise BadArgs(f"unknown adjunction {adj!r}")


def _counit_of(ctx: Context, params: dict) -> Derivation:
    adj = _need(params, "adjunction", str)
    match adj:
        case "conj":
            e = _need(params, "E", Statement)
            f = _need(params, "F", Statement)
            side = _need(params, "side", str)
            rule = R.AND_ELIM_L if side == "left" else R.AND_ELIM_R
            return Derivation(rule, {"left": e, "right": f, "ctx": ctx})
        case "disj":
            e = _need(params, "E", Statement)
            return Derivation(R.OR_ELIM, premises=(
                _refl(e, ctx), _refl(e, ctx),
            ))
        case "imp":
            f = _need(params, "F", Statement)
            g = _need(params, "G", Statement)
            return Derivation(R.IMP_UNCURRY, premises=(
                _refl(Imp(f, g), ctx),
            ))
        case "forall":
            x = _need(params, "x", str)
            ty = _need(params, "ty", Type)
            e = _need(params, "E", Statement)
            return Derivation(R.FORALL_TRANSPOSE, premises=(
                _refl(ForallT(x, ty, e), ctx),
            ))
        case "exists":
            x = _need(params, "x", str)
            ty = _need(params, "ty", Type)
            e = _need(params, "E", Statement)
            return Derivation(R.EXISTS_INTRO, premises=(
                _refl(e, ctx.snoc(TypeDecl(x, ty))),
            ))
        case "dep_and":
            z = _need(params, "binder", str)
            e = _need(params, "E", Statement)
            g = _need(params, "G", Statement)
            return Derivation(R.DEP_AND_UNTRANSPOSE, premises=(
                _refl(g, _assumed(ctx, z, e)),
            ))
        case "dep_imp":
            z = _need(params, "binder", str)
            e = _need(params, "E", Statement)
            g = _need(params, "G", Statement)
            return Derivation(R.DEP_IMP_UNTRANSPOSE, premises=(
                _refl(DepImp(z, e, g), ctx),
            ))
        case "compr":
            x = _need(params, "x", str)
            a = _need(params, "set", Term)
            ty = _host_of(ctx, a)
            return Derivation(R.COMPR_UNTRANSPOSE, premises=(
                _refl(Mem(Var(x), a), ctx.snoc(TypeDecl(x, ty))),
            ))
    raise BadArgs(f"unknown adjunction {adj!r}")


# ------------------------------------------------- assumption calculus

def _assumption_truth(ctx: Context, params: dict) -> Derivation:
    z = _need(params, "binder", str)
    e = _need(params, "E", Statement)
    h = _opt(params, "H", Statement, Top())
    ext = _assumed(ctx, z, e)
    truth = Derivation(R.SPECIAL_FWD, {"binder": z}, (
        Derivation(R.AND_ELIM_L, {"left": e, "right": Top(), "ctx": ctx}),
    ))
    return Derivation(R.TRANS, premises=(
        Derivation(R.TOP_INTRO, {"stmt": h, "ctx": ext}),
        truth,
    ))


def _dep_modus_ponens(ctx: Context, params: dict) -> Derivation:
    z = _need(params, "binder", str)
    e = _need(params, "E", Statement)
    g = _need(params, "G", Statement)
    imp = DepImp(z, e, g)
    ext = _assumed(ctx, z, e)
    packed = Derivation(R.DEP_AND_UNTRANSPOSE, premises=(
        _refl(imp, ext),
    ))
    weakened = Derivation(R.WEAKEN, {"entry": Assume(z, e)}, (packed,))
    eliminated = Derivation(R.DEP_IMP_UNTRANSPOSE, premises=(
        _refl(imp, ctx),
    ))
    return Derivation(R.TRANS, premises=(weakened, eliminated))


def _dep_modus_ponens_simplified(ctx: Context, params: dict) -> Derivation:
    z = _need(params, "binder", str)
    e = _need(params, "E", Statement)
    g = _need(params, "G", Statement)
    imp = DepImp(z, e, g)
    swap = _dep_and_equiv_bwd(ctx, {"binder": z, "E": e, "F": imp})
    weakened = Derivation(R.WEAKEN, {"entry": Assume(z, e)}, (swap,))
    mp = _dep_modus_ponens(ctx, params)
    return Derivation(R.TRANS, premises=(weakened, mp))


# ------------------------------------- dependent/plain interderivation

def _dep_and_equiv_fwd(ctx: Context, params: dict) -> Derivation:
    z = _need(params, "binder", str)
    e = _need(params, "E", Statement)
    f = _need(params, "F", Statement)
    return Derivation(R.DEP_AND_UNTRANSPOSE, premises=(
        Derivation(R.SPECIAL_FWD, {"binder": z}, (
            _refl(And(e, f), ctx),
        )),
    ))


def _dep_and_equiv_bwd(ctx: Context, params: dict) -> Derivation:
    z = _need(params, "binder", str)
    e = _need(params, "E", Statement)
    f = _need(params, "F", Statement)
    return Derivation(R.SPECIAL_BWD, premises=(
        Derivation(R.DEP_AND_TRANSPOSE, premises=(
            _refl(DepAnd(z, e, f), ctx),
        )),
    ))


def _dep_imp_equiv_fwd(ctx: Context, params: dict) -> Derivation:
    z = _need(params, "binder", str)
    e = _need(params, "E", Statement)
    f = _need(params, "F", Statement)
    mp = Derivation(R.IMP_UNCURRY, premises=(_refl(Imp(e, f), ctx),))
    commuted = Derivation(R.TRANS, premises=(
        _comm(e, Imp(e, f), ctx), mp,
    ))
    return Derivation(R.DEP_IMP_TRANSPOSE, premises=(
        Derivation(R.SPECIAL_FWD, {"binder": z}, (commuted,)),
    ))


def _dep_imp_equiv_bwd(ctx: Context, params: dict) -> Derivation:
    z = _need(params, "binder", str)
    e = _need(params, "E", Statement)
    f = _need(params, "F", Statement)
    imp = DepImp(z, e, f)
    counit = Derivation(R.DEP_IMP_UNTRANSPOSE, premises=(_refl(imp, ctx),))
    grounded = Derivation(R.SPECIAL_BWD, premises=(counit,))
    commuted = Derivation(R.TRANS, premises=(
        _comm(imp, e, ctx), grounded,
    ))
    return Derivation(R.IMP_INTRO, premises=(commuted,))


# -------------------------------------------- two-level elaboration

def _elab_forall_adj(ctx: Context, params: dict) -> Derivation:
    x = _need(params, "x", str)
    a = _need(params, "set", Term)
    w = _need(params, "binder", str)
    e = _need(params, "E", Statement)
    ty = _host_of(ctx, a)
    low = ForallT(x, ty, DepImp(w, Mem(Var(x), a), e))
    return Derivation(R.DEP_IMP_UNTRANSPOSE, premises=(
        Derivation(R.FORALL_TRANSPOSE, premises=(_refl(low, ctx),)),
    ))


def _elab_exists_adj(ctx: Context, params: dict) -> Derivation:
    x = _need(params, "x", str)
    a = _need(params, "set", Term)
    w = _need(params, "binder", str)
    e = _need(params, "E", Statement)
    ty = _host_of(ctx, a)
    low = ExistsT(x, ty, DepAnd(w, Mem(Var(x), a), e))
    return Derivation(R.DEP_AND_TRANSPOSE, premises=(
        Derivation(R.EXISTS_TRANSPOSE, premises=(_refl(low, ctx),)),
    ))


def _elab_compr_adj(ctx: Context, params: dict) -> Derivation:
    x = _need(params, "x", str)
    a = _need(params, "set", Term)
    w = _need(params, "binder", str)
    e = _need(params, "E", Statement)
    ty = _host_of(ctx, a)
    low = Compr(x, ty, DepAnd(w, Mem(Var(x), a), e))
    return Derivation(R.DEP_AND_TRANSPOSE, premises=(
        Derivation(R.COMPR_TRANSPOSE, premises=(
            Derivation(R.INCL_REFL, {"set": low, "ctx": ctx}),
        )),
    ))


_BUILDERS: dict[DerivedRuleName, Callable[[Context, dict], Derivation]] = {
    DerivedRuleName.UNIT_OF: _unit_of,
    DerivedRuleName.COUNIT_OF: _counit_of,
    DerivedRuleName.ASSUMPTION_TRUTH: _assumption_truth,
    DerivedRuleName.DEP_MODUS_PONENS: _dep_modus_ponens,
    DerivedRuleName.DEP_MODUS_PONENS_SIMPLIFIED: _dep_modus_ponens_simplified,
    DerivedRuleName.DEP_AND_EQUIV_FWD: _dep_and_equiv_fwd,
    DerivedRuleName.DEP_AND_EQUIV_BWD: _dep_and_equiv_bwd,
    DerivedRuleName.DEP_IMP_EQUIV_FWD: _dep_imp_equiv_fwd,
    DerivedRuleName.DEP_IMP_EQUIV_BWD: _dep_imp_equiv_bwd,
    DerivedRuleName.ELAB_FORALL_ADJ: _elab_forall_adj,
    DerivedRuleName.ELAB_EXISTS_ADJ: _elab_exists_adj,
    DerivedRuleName.ELAB_COMPR_ADJ: _elab_compr_adj,
}


# ------------------------------------------------ adjunction instances

@dataclass(frozen=True)
class AdjunctionInstance:
    """One adjunction f -| g, reified as the transposition bijection.

    ``transpose`` maps a derivation of f(x) <= y (living at f_ctx) to
    one of x <= g(y) (living at g_ctx); ``untranspose`` is its inverse.
    Context bookkeeping makes instances composable.
    """
    label: str
    f_ctx: Context
    g_ctx: Context
    transpose: Callable[[Derivation], Derivation]
    untranspose: Callable[[Derivation], Derivation]


def _single(rule: R, **params) -> Callable[[Derivation], Derivation]:
    def apply(d: Derivation) -> Derivation:
        return Derivation(rule, dict(params), (d,))
    return apply


def adjunction_instance(name: str, ctx: Context, **params) -> AdjunctionInstance:
    """Instances whose transposes are single kernel rules."""
    match name:
        case "imp":
            return AdjunctionInstance(
                "imp", ctx, ctx,
                _single(R.IMP_INTRO), _single(R.IMP_UNCURRY),
            )
        case "special":
            z, e = params["binder"], params["E"]
            return AdjunctionInstance(
                "special", ctx, _assumed(ctx, z, e),
                _single(R.SPECIAL_FWD, binder=z), _single(R.SPECIAL_BWD),
            )
        case "dep_and":
            z, e = params["binder"], params["E"]
            return AdjunctionInstance(
                "dep_and", ctx, _assumed(ctx, z, e),
                _single(R.DEP_AND_TRANSPOSE), _single(R.DEP_AND_UNTRANSPOSE),
            )
        case "dep_imp":
            z, e = params["binder"], params["E"]
            return AdjunctionInstance(
                "dep_imp", _assumed(ctx, z, e), ctx,
                _single(R.DEP_IMP_TRANSPOSE), _single(R.DEP_IMP_UNTRANSPOSE),
            )
        case "forall":
            x, ty = params["x"], params["ty"]
            return AdjunctionInstance(
                "forall", ctx.snoc(TypeDecl(x, ty)), ctx,
                _single(R.FORALL_INTRO), _single(R.FORALL_TRANSPOSE),
            )
        case "exists":
            x, ty = params["x"], params["ty"]
            return AdjunctionInstance(
                "exists", ctx, ctx.snoc(TypeDecl(x, ty)),
                _single(R.EXISTS_TRANSPOSE), _single(R.EXISTS_INTRO),
            )
        case "compr":
            x, ty = params["x"], params["ty"]
            return AdjunctionInstance(
                "compr", ctx, ctx.snoc(TypeDecl(x, ty)),
                _single(R.COMPR_TRANSPOSE), _single(R.COMPR_UNTRANSPOSE),
            )
    raise BadArgs(f"no single-rule instance for {name!r}")


def identity_adjunction(ctx: Context) -> AdjunctionInstance:
    ident = lambda d: d
    return AdjunctionInstance("id", ctx, ctx, ident, ident)


def compose_adjoints(outer: AdjunctionInstance,
                     inner: AdjunctionInstance) -> AdjunctionInstance:
    """Compose along the context chain: outer runs first on the f side.

    The composite's f-side judgments live at outer.f_ctx and its g-side
    judgments at inner.g_ctx; transposition threads through the shared
    middle context.
    """
    if not contexts_struct_eq(outer.g_ctx, inner.f_ctx):
        raise DomainMismatch(
            f"cannot compose {outer.label} with {inner.label}: "
            "middle contexts differ"
        )
    return AdjunctionInstance(
        f"{outer.label}.{inner.label}",
        outer.f_ctx,
        inner.g_ctx,
        lambda d: inner.transpose(outer.transpose(d)),
        lambda d: outer.untranspose(inner.untranspose(d)),
    )
