"""Judgment shapes of every derived-rule builder."""
import pytest

from depconj.derived import (
    ADJUNCTIONS, BadArgs, DERIVED_BY_NAME, DerivedRuleName as D, derive,
)
from depconj.kernel import RuleName as R, check
from depconj.syntax.context import Assume, Context, TypeDecl
from depconj.syntax.equality import struct_eq
from depconj.syntax.nodes import (
    And, App, BaseType, Compr, DepAnd, DepImp, ExistsT, ForallT, Imp, Mem,
    Or, Pred, SetType, Top, Var,
)
from depconj.syntax.signature import FunDecl, PredDecl, Signature

NAT = BaseType("Nat")
P = Pred("P", ())
Q = Pred("Q", ())


def sig() -> Signature:
    return (
        Signature()
        .with_base("Nat")
        .with_pred(PredDecl("P", ()))
        .with_pred(PredDecl("Q", ()))
        .with_pred(PredDecl("R", (NAT,)))
        .with_fun(FunDecl("zero", (), NAT))
    )


def ctx(*entries) -> Context:
    return Context(sig(), tuple(entries))


def rules_postorder(d) -> list[R]:
    out = []

    def walk(n):
        for q in n.premises:
            walk(q)
        out.append(n.rule)

    walk(d)
    return out


class TestUnits:
    def test_conj(self):
        j = check(derive(D.UNIT_OF, ctx(), adjunction="conj", E=P))
        assert struct_eq(j.lhs, P) and struct_eq(j.rhs, And(P, P))

    @pytest.mark.parametrize("side,lhs", [("left", P), ("right", Q)])
    def test_disj(self, side, lhs):
        j = check(derive(D.UNIT_OF, ctx(), adjunction="disj", E=P, F=Q,
                         side=side))
        assert struct_eq(j.lhs, lhs) and struct_eq(j.rhs, Or(P, Q))

    def test_imp(self):
        j = check(derive(D.UNIT_OF, ctx(), adjunction="imp", E=P, F=Q))
        assert struct_eq(j.rhs, Imp(Q, And(P, Q)))

    def test_forall(self):
        j = check(derive(D.UNIT_OF, ctx(), adjunction="forall", x="x",
                         ty=NAT, E=P))
        assert struct_eq(j.rhs, ForallT("x", NAT, P))
        assert not j.ctx.entries

    def test_exists(self):
        R_x = Pred("R", (Var("x"),))
        j = check(derive(D.UNIT_OF, ctx(), adjunction="exists", x="x",
                         ty=NAT, E=R_x))
        assert isinstance(j.ctx.entries[-1], TypeDecl)
        assert struct_eq(j.lhs, R_x)
        assert struct_eq(j.rhs, ExistsT("x", NAT, R_x))

    def test_dep_and(self):
        j = check(derive(D.UNIT_OF, ctx(), adjunction="dep_and", binder="z",
                         E=P, F=Q))
        assert j.ctx.entries == (Assume("z", P),)
        assert struct_eq(j.lhs, Q)
        assert struct_eq(j.rhs, DepAnd("z", P, Q))

    def test_dep_imp(self):
        j = check(derive(D.UNIT_OF, ctx(), adjunction="dep_imp", binder="z",
                         E=P, F=Q))
        assert struct_eq(j.rhs, DepImp("z", P, Q))
        assert not j.ctx.entries

    def test_compr(self):
        R_x = Pred("R", (Var("x"),))
        j = check(derive(D.UNIT_OF, ctx(), adjunction="compr", x="x",
                         ty=NAT, E=R_x))
        assert struct_eq(j.rhs, Mem(Var("x"), Compr("x", NAT, R_x)))


class TestCounits:
    @pytest.mark.parametrize("side,rhs", [("left", P), ("right", Q)])
    def test_conj(self, side, rhs):
        j = check(derive(D.COUNIT_OF, ctx(), adjunction="conj", E=P, F=Q,
                         side=side))
        assert struct_eq(j.lhs, And(P, Q)) and struct_eq(j.rhs, rhs)

    def test_disj(self):
        j = check(derive(D.COUNIT_OF, ctx(), adjunction="disj", E=P))
        assert struct_eq(j.lhs, Or(P, P)) and struct_eq(j.rhs, P)

    def test_imp_is_modus_ponens(self):
        j = check(derive(D.COUNIT_OF, ctx(), adjunction="imp", F=P, G=Q))
        assert struct_eq(j.lhs, And(Imp(P, Q), P))
        assert struct_eq(j.rhs, Q)

    def test_forall(self):
        R_x = Pred("R", (Var("x"),))
        j = check(derive(D.COUNIT_OF, ctx(), adjunction="forall", x="x",
                         ty=NAT, E=R_x))
        assert struct_eq(j.lhs, ForallT("x", NAT, R_x))
        assert struct_eq(j.rhs, R_x)
        assert isinstance(j.ctx.entries[-1], TypeDecl)

    def test_exists(self):
        j = check(derive(D.COUNIT_OF, ctx(), adjunction="exists", x="x",
                         ty=NAT, E=P))
        assert struct_eq(j.lhs, ExistsT("x", NAT, P))
        assert struct_eq(j.rhs, P)
        assert not j.ctx.entries

    def test_dep_and(self):
        j = check(derive(D.COUNIT_OF, ctx(), adjunction="dep_and",
                         binder="z", E=P, G=Q))
        assert struct_eq(j.lhs, DepAnd("z", P, Q))
        assert struct_eq(j.rhs, Q)
        assert not j.ctx.entries

    def test_dep_imp(self):
        j = check(derive(D.COUNIT_OF, ctx(), adjunction="dep_imp",
                         binder="z", E=P, G=Q))
        assert j.ctx.entries == (Assume("z", P),)
        assert struct_eq(j.lhs, DepImp("z", P, Q))
        assert struct_eq(j.rhs, Q)

    def test_compr(self):
        c = ctx(TypeDecl("A", SetType(NAT)))
        j = check(derive(D.COUNIT_OF, c, adjunction="compr", x="x",
                         set=Var("A")))
        assert j.kind == "subset"
        assert struct_eq(j.lhs, Compr("x", NAT, Mem(Var("x"), Var("A"))))
        assert struct_eq(j.rhs, Var("A"))


class TestAssumptionDerived:
    def test_assumption_truth_default(self):
        j = check(derive(D.ASSUMPTION_TRUTH, ctx(), binder="z", E=P))
        assert j.ctx.entries == (Assume("z", P),)
        assert struct_eq(j.lhs, Top()) and struct_eq(j.rhs, P)

    def test_assumption_truth_any_hypothesis(self):
        j = check(derive(D.ASSUMPTION_TRUTH, ctx(), binder="z", E=P, H=Q))
        assert struct_eq(j.lhs, Q) and struct_eq(j.rhs, P)

    def test_dep_modus_ponens(self):
        j = check(derive(D.DEP_MODUS_PONENS, ctx(), binder="z", E=P, G=Q))
        assert j.ctx.entries == (Assume("z", P),)
        assert struct_eq(j.lhs, DepAnd("z", P, DepImp("z", P, Q)))
        assert struct_eq(j.rhs, Q)

    def test_dep_modus_ponens_simplified(self):
        j = check(derive(D.DEP_MODUS_PONENS_SIMPLIFIED, ctx(), binder="z",
                         E=P, G=Q))
        assert struct_eq(j.lhs, And(P, DepImp("z", P, Q)))
        assert struct_eq(j.rhs, Q)


class TestEquivChains:
    def test_dep_and_fwd_steps(self):
        d = derive(D.DEP_AND_EQUIV_FWD, ctx(), binder="z", E=P, F=Q)
        j = check(d)
        assert struct_eq(j.lhs, DepAnd("z", P, Q))
        assert struct_eq(j.rhs, And(P, Q))
        assert rules_postorder(d) == [
            R.REFL, R.SPECIAL_FWD, R.DEP_AND_UNTRANSPOSE]

    def test_dep_and_bwd_steps(self):
        d = derive(D.DEP_AND_EQUIV_BWD, ctx(), binder="z", E=P, F=Q)
        j = check(d)
        assert struct_eq(j.lhs, And(P, Q))
        assert struct_eq(j.rhs, DepAnd("z", P, Q))
        assert rules_postorder(d) == [
            R.REFL, R.DEP_AND_TRANSPOSE, R.SPECIAL_BWD]

    def test_dep_imp_fwd_steps(self):
        d = derive(D.DEP_IMP_EQUIV_FWD, ctx(), binder="z", E=P, F=Q)
        j = check(d)
        assert struct_eq(j.lhs, Imp(P, Q))
        assert struct_eq(j.rhs, DepImp("z", P, Q))
        order = rules_postorder(d)
        want = [R.IMP_UNCURRY, R.SPECIAL_FWD, R.DEP_IMP_TRANSPOSE]
        it = iter(order)
        assert all(r in it for r in want)

    def test_dep_imp_bwd_steps(self):
        d = derive(D.DEP_IMP_EQUIV_BWD, ctx(), binder="z", E=P, F=Q)
        j = check(d)
        assert struct_eq(j.lhs, DepImp("z", P, Q))
        assert struct_eq(j.rhs, Imp(P, Q))
        order = rules_postorder(d)
        want = [R.DEP_IMP_UNTRANSPOSE, R.SPECIAL_BWD, R.IMP_INTRO]
        it = iter(order)
        assert all(r in it for r in want)


class TestElabAdjunctions:
    def c(self):
        return ctx(TypeDecl("A", SetType(NAT)))

    def test_forall(self):
        R_x = Pred("R", (Var("x"),))
        j = check(derive(D.ELAB_FORALL_ADJ, self.c(), x="x", set=Var("A"),
                         binder="w", E=R_x))
        mem = Mem(Var("x"), Var("A"))
        assert struct_eq(j.lhs, ForallT("x", NAT, DepImp("w", mem, R_x)))
        assert struct_eq(j.rhs, R_x)
        assert isinstance(j.ctx.entries[-1], Assume)

    def test_exists(self):
        R_x = Pred("R", (Var("x"),))
        j = check(derive(D.ELAB_EXISTS_ADJ, self.c(), x="x", set=Var("A"),
                         binder="w", E=R_x))
        mem = Mem(Var("x"), Var("A"))
        assert struct_eq(j.lhs, R_x)
        assert struct_eq(j.rhs, ExistsT("x", NAT, DepAnd("w", mem, R_x)))

    def test_compr(self):
        R_x = Pred("R", (Var("x"),))
        j = check(derive(D.ELAB_COMPR_ADJ, self.c(), x="x", set=Var("A"),
                         binder="w", E=R_x))
        mem = Mem(Var("x"), Var("A"))
        low = Compr("x", NAT, DepAnd("w", mem, R_x))
        assert struct_eq(j.lhs, R_x)
        assert struct_eq(j.rhs, Mem(Var("x"), low))


class TestBadArgs:
    def test_missing_param(self):
        with pytest.raises(BadArgs):
            derive(D.UNIT_OF, ctx(), adjunction="conj")

    def test_unknown_adjunction(self):
        with pytest.raises(BadArgs):
            derive(D.UNIT_OF, ctx(), adjunction="tensor", E=P)

    def test_wrong_type(self):
        with pytest.raises(BadArgs):
            derive(D.UNIT_OF, ctx(), adjunction="conj", E="not a statement")

    def test_kernel_rejection_becomes_bad_args(self):
        R_x = Pred("R", (Var("x"),))
        with pytest.raises(BadArgs):
            derive(D.UNIT_OF, ctx(), adjunction="forall", x="x", ty=NAT,
                   E=R_x)

    def test_extra_params_ignored(self):
        j = check(derive(D.UNIT_OF, ctx(), adjunction="conj", E=P,
                         F=Q, side="left"))
        assert struct_eq(j.rhs, And(P, P))

    def test_all_names_registered(self):
        assert set(DERIVED_BY_NAME.values()) == set(D)
        assert len(ADJUNCTIONS) == 8
