"""Core syntax: free names, substitution, equality, well-formedness."""
import pytest

from depconj.errors import (
    ContainsDescription, TypeMismatch, UnboundVar, UnboundWarrantor,
)
from depconj.syntax.context import Assume, Context, SetDecl, TypeDecl
from depconj.syntax.equality import contexts_struct_eq, struct_eq
from depconj.syntax.nodes import (
    And, App, BaseType, Compr, DepAnd, DepImp, Desc, Eq, ExistsT,
    ExistsUniqueT, ForallT, Imp, Mem, Or, Pred, SetType, Top, Var,
    WarrantRef, bound_names, free_names, free_term_vars, free_warrantors,
    fresh_name, has_holes, is_low_level, uses_description,
)
from depconj.syntax.signature import (
    FunDecl, PredDecl, Signature, TermParam, WarrantParam,
)
from depconj.syntax.subst import (
    rename_warrantor, rename_warrantors_uniform, substitute,
)
from depconj.syntax.wellformed import (
    erase, erase_term, is_meaningful, meaningful, synth_type,
)

NAT = BaseType("Nat")


def base_sig() -> Signature:
    return (
        Signature()
        .with_base("Nat")
        .with_pred(PredDecl("P", ()))
        .with_pred(PredDecl("R", (NAT,)))
        .with_fun(FunDecl("zero", (), NAT))
        .with_fun(FunDecl(
            "pick",
            (TermParam("S", SetType(NAT)),
             WarrantParam("h", Pred("nonempty", (Var("S"),)))),
            NAT,
        ))
        .with_pred(PredDecl("nonempty", (SetType(NAT),)))
    )


def ctx_of(*entries) -> Context:
    return Context(base_sig(), tuple(entries))


class TestFreeNames:
    def test_var_free(self):
        assert free_term_vars(Pred("R", (Var("x"),))) == {"x"}

    def test_binder_closes(self):
        s = ForallT("x", NAT, Pred("R", (Var("x"),)))
        assert free_term_vars(s) == frozenset()
        assert bound_names(s) == {"x"}

    def test_dep_binder_closes_warrantor(self):
        s = DepAnd("z", Pred("P", ()), Pred("P", ()))
        assert free_warrantors(s) == frozenset()
        inner = App("pick", (Var("A"), WarrantRef("z")))
        assert free_warrantors(Eq(inner, App("zero", ()))) == {"z"}

    def test_desc_reference_is_free(self):
        t = Desc(WarrantRef("u"))
        assert free_warrantors(Eq(t, t)) == {"u"}
        assert uses_description(Eq(t, t))

    def test_holes(self):
        assert has_holes(App("pick", (Var("A"), WarrantRef(None))))
        assert not has_holes(App("pick", (Var("A"), WarrantRef("h"))))

    def test_fresh_name_avoids(self):
        assert fresh_name("x", {"x", "x'"}) not in {"x", "x'"}


class TestSubstitution:
    def test_simple(self):
        s = Pred("R", (Var("x"),))
        assert substitute(s, App("zero", ()), "x") == Pred(
            "R", (App("zero", ()),))

    def test_shadowed(self):
        s = ForallT("x", NAT, Pred("R", (Var("x"),)))
        assert substitute(s, App("zero", ()), "x") == s

    def test_capture_renames_binder(self):
        s = ExistsT("y", NAT, And(Pred("R", (Var("x"),)),
                                  Pred("R", (Var("y"),))))
        out = substitute(s, Var("y"), "x")
        assert out.var != "y"
        assert free_term_vars(out) == {"y"}

    def test_rename_warrantor_free_only(self):
        body = Eq(App("pick", (Var("A"), WarrantRef("z"))), App("zero", ()))
        s = DepAnd("z", Pred("P", ()), body)
        assert rename_warrantor(s, "w", "z") == s

    def test_uniform_rename_moves_binder(self):
        body = Eq(App("pick", (Var("A"), WarrantRef("z"))), App("zero", ()))
        s = DepAnd("z", Pred("P", ()), body)
        out = rename_warrantors_uniform(s, {"z": "w"})
        assert out.binder == "w"
        assert free_warrantors(out.right) == {"w"}

    def test_uniform_rename_swap(self):
        s = And(
            Eq(Desc(WarrantRef("p")), App("zero", ())),
            Eq(Desc(WarrantRef("q")), App("zero", ())),
        )
        out = rename_warrantors_uniform(s, {"p": "q", "q": "p"})
        assert out.left.left.ref.name == "q"
        assert out.right.left.ref.name == "p"


class TestStructEq:
    def test_alpha_quantifier(self):
        a = ForallT("x", NAT, Pred("R", (Var("x"),)))
        b = ForallT("y", NAT, Pred("R", (Var("y"),)))
        assert struct_eq(a, b)

    def test_alpha_dep_binder(self):
        a = DepAnd("z", Pred("P", ()), Pred("P", ()))
        b = DepAnd("w", Pred("P", ()), Pred("P", ()))
        assert struct_eq(a, b)

    def test_free_vars_by_name(self):
        assert not struct_eq(Pred("R", (Var("x"),)), Pred("R", (Var("y"),)))

    def test_proof_irrelevant_warrantors(self):
        ex = ExistsUniqueT("x", NAT, Pred("R", (Var("x"),)))
        ctx = ctx_of(Assume("p", ex), Assume("q", ex))
        assert struct_eq(Desc(WarrantRef("p")), Desc(WarrantRef("q")), ctx)

    def test_warrantors_differ_when_statements_do(self):
        ctx = ctx_of(
            Assume("p", ExistsUniqueT("x", NAT, Pred("R", (Var("x"),)))),
            Assume("q", ExistsUniqueT("x", NAT, Top())),
        )
        assert not struct_eq(
            Desc(WarrantRef("p")), Desc(WarrantRef("q")), ctx)

    def test_contexts_compare_names_literally(self):
        c1 = ctx_of(Assume("z", Pred("P", ())))
        c2 = ctx_of(Assume("w", Pred("P", ())))
        assert contexts_struct_eq(c1, c1)
        assert not contexts_struct_eq(c1, c2)

    def test_connective_mismatch(self):
        assert not struct_eq(And(Top(), Top()), Or(Top(), Top()))
        assert not struct_eq(
            Imp(Top(), Top()), DepImp("z", Top(), Top()))


class TestWellFormed:
    def test_pred_arity(self):
        ctx = ctx_of()
        with pytest.raises(TypeMismatch):
            meaningful(ctx, Pred("R", ()))

    def test_unbound_var(self):
        with pytest.raises(UnboundVar):
            meaningful(ctx_of(), Pred("R", (Var("x"),)))

    def test_declared_var(self):
        ctx = ctx_of(TypeDecl("x", NAT))
        assert is_meaningful(ctx, Pred("R", (Var("x"),)))

    def test_warrant_slot_needs_matching_assumption(self):
        ctx = ctx_of(TypeDecl("A", SetType(NAT)))
        stmt = Eq(App("pick", (Var("A"), WarrantRef("h"))), App("zero", ()))
        with pytest.raises(UnboundWarrantor):
            meaningful(ctx, stmt)
        ok = ctx_of(
            TypeDecl("A", SetType(NAT)),
            Assume("h", Pred("nonempty", (Var("A"),))),
        )
        assert is_meaningful(ok, stmt)

    def test_schema_mismatch_rejected(self):
        ctx = ctx_of(
            TypeDecl("A", SetType(NAT)),
            Assume("h", Top()),
        )
        stmt = Eq(App("pick", (Var("A"), WarrantRef("h"))), App("zero", ()))
        assert not is_meaningful(ctx, stmt)

    def test_synth_type(self):
        ctx = ctx_of(TypeDecl("A", SetType(NAT)))
        assert synth_type(ctx, Var("A")) == SetType(NAT)
        assert synth_type(ctx, App("zero", ())) == NAT
        assert synth_type(
            ctx, Compr("x", NAT, Pred("R", (Var("x"),)))) == SetType(NAT)

    def test_erase_drops_dependence(self):
        dep = DepAnd("z", Pred("P", ()), Pred("P", ()))
        low = erase(dep)
        assert low == And(Pred("P", ()), Pred("P", ()))

    def test_erase_refuses_warrant_args(self):
        stmt = Eq(App("pick", (Var("A"), WarrantRef("h"))), App("zero", ()))
        with pytest.raises(ContainsDescription):
            erase(stmt)

    def test_erase_refuses_description(self):
        with pytest.raises(ContainsDescription):
            erase(Eq(Desc(WarrantRef("u")), App("zero", ())))

    def test_erase_term_on_comprehension(self):
        t = Compr("x", NAT, DepAnd("w", Pred("P", ()), Pred("P", ())))
        out = erase_term(t)
        assert is_low_level(out)
        assert out.body == And(Pred("P", ()), Pred("P", ()))

    def test_low_level_predicate(self):
        from depconj.syntax.nodes import ForallS
        high = ForallS("x", Var("A"), Pred("R", (Var("x"),)))
        low = ForallT("x", NAT, Pred("R", (Var("x"),)))
        assert not is_low_level(high)
        assert is_low_level(low)
        assert is_low_level(Mem(Var("a"), Var("A")))
