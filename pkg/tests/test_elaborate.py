"""Lowering of set-bounded constructs and warrantor resolution."""
import pytest

from depconj.elaborate import (
    elaborate_context, elaborate_statement, elaborate_term,
    render_vernacular, resolve_warrantors, resolve_warrantors_term,
)
from depconj.errors import HostUnresolvable, NoWarrantorInScope
from depconj.parser import Parser
from depconj.syntax.context import Assume, Context, SetDecl, TypeDecl
from depconj.syntax.equality import struct_eq
from depconj.syntax.nodes import (
    And, App, BaseType, Compr, ComprSet, DepAnd, DepImp, Eq, ExistsS,
    ExistsT, ForallS, ForallT, Imp, Mem, Pred, SetType, Top, Var,
    WarrantRef, free_warrantors, is_low_level,
)
from depconj.syntax.signature import (
    FunDecl, PredDecl, Signature, TermParam, WarrantParam,
)
from depconj.syntax.wellformed import is_meaningful

NAT = BaseType("Nat")


def sig() -> Signature:
    return (
        Signature()
        .with_base("Nat")
        .with_pred(PredDecl("R", (NAT,)))
        .with_pred(PredDecl("nonempty", (SetType(NAT),)))
        .with_fun(FunDecl("zero", (), NAT))
        .with_fun(FunDecl(
            "inf",
            (TermParam("S", SetType(NAT)),
             WarrantParam("h", Pred("nonempty", (Var("S"),)))),
            NAT,
        ))
    )


def ctx(*entries) -> Context:
    return Context(sig(), tuple(entries))


def set_ctx() -> Context:
    return ctx(TypeDecl("A", SetType(NAT)))


class TestLowering:
    def test_forall_in_set(self):
        s = ForallS("x", Var("A"), Pred("R", (Var("x"),)))
        out = elaborate_statement(set_ctx(), s).lowered
        assert isinstance(out, ForallT)
        assert out.ty == NAT
        body = out.body
        assert isinstance(body, DepImp)
        assert struct_eq(body.left, Mem(Var("x"), Var("A")))
        assert is_low_level(out)

    def test_exists_in_set(self):
        s = ExistsS("x", Var("A"), Pred("R", (Var("x"),)))
        out = elaborate_statement(set_ctx(), s).lowered
        assert isinstance(out, ExistsT)
        assert isinstance(out.body, DepAnd)

    def test_comprehension_in_set(self):
        t = ComprSet("x", Var("A"), Pred("R", (Var("x"),)))
        out = elaborate_term(set_ctx(), t).lowered
        assert isinstance(out, Compr)
        assert isinstance(out.body, DepAnd)
        assert struct_eq(out.body.left, Mem(Var("x"), Var("A")))

    def test_fresh_binder_scheme(self):
        s = ForallS("x", Var("A"), Pred("R", (Var("x"),)))
        res = elaborate_statement(set_ctx(), s)
        assert res.lowered.body.binder == "w_x"
        assert "w_x" in res.warrantor_table

    def test_low_level_passes_through(self):
        s = ForallT("x", NAT, Pred("R", (Var("x"),)))
        out = elaborate_statement(set_ctx(), s).lowered
        assert struct_eq(out, s)

    def test_nested_bounded(self):
        s = ForallS("x", Var("A"), ExistsS("y", Var("A"), Top()))
        out = elaborate_statement(set_ctx(), s).lowered
        assert is_low_level(out)
        inner = out.body.right
        assert isinstance(inner, ExistsT)

    def test_context_set_decl_lowering(self):
        c = ctx(TypeDecl("A", SetType(NAT)), SetDecl("a", Var("A")))
        res = elaborate_context(c)
        entries = res.lowered.entries
        assert entries[1] == TypeDecl("a", NAT)
        assert isinstance(entries[2], Assume)
        assert struct_eq(entries[2].stmt, Mem(Var("a"), Var("A")))
        assert entries[2].name in res.warrantor_table

    def test_host_must_be_set_typed(self):
        c = ctx(TypeDecl("n", NAT))
        s = ForallS("x", Var("n"), Top())
        with pytest.raises(HostUnresolvable):
            elaborate_statement(c, s)


class TestResolution:
    def holed(self) -> Eq:
        return Eq(App("inf", (Var("A"), WarrantRef(None))), App("zero", ()))

    def test_context_assumption_fills_hole(self):
        c = ctx(
            TypeDecl("A", SetType(NAT)),
            Assume("h", Pred("nonempty", (Var("A"),))),
        )
        out = resolve_warrantors(c, self.holed())
        assert out.left.args[1] == WarrantRef("h")
        assert is_meaningful(c, out)

    def test_conjunction_promotes_to_dependent(self):
        s = And(Pred("nonempty", (Var("A"),)), self.holed())
        out = resolve_warrantors(set_ctx(), s)
        assert isinstance(out, DepAnd)
        assert free_warrantors(out) == frozenset()
        assert is_meaningful(set_ctx(), out)

    def test_implication_promotes_to_dependent(self):
        s = Imp(Pred("nonempty", (Var("A"),)), self.holed())
        out = resolve_warrantors(set_ctx(), s)
        assert isinstance(out, DepImp)

    def test_plain_stays_plain(self):
        s = And(Top(), Pred("nonempty", (Var("A"),)))
        out = resolve_warrantors(set_ctx(), s)
        assert isinstance(out, And)

    def test_reversed_order_fails(self):
        s = And(self.holed(), Pred("nonempty", (Var("A"),)))
        with pytest.raises(NoWarrantorInScope):
            resolve_warrantors(set_ctx(), s)

    def test_explicit_reference_kept(self):
        c = ctx(
            TypeDecl("A", SetType(NAT)),
            Assume("h", Pred("nonempty", (Var("A"),))),
        )
        s = Eq(App("inf", (Var("A"), WarrantRef("h"))), App("zero", ()))
        out = resolve_warrantors(c, s)
        assert out.left.args[1] == WarrantRef("h")

    def test_nearest_warrantor_wins(self):
        c = ctx(
            TypeDecl("A", SetType(NAT)),
            Assume("h1", Pred("nonempty", (Var("A"),))),
            Assume("h2", Pred("nonempty", (Var("A"),))),
        )
        out = resolve_warrantors(c, self.holed())
        assert out.left.args[1] == WarrantRef("h2")

    def test_term_resolution(self):
        c = ctx(
            TypeDecl("A", SetType(NAT)),
            Assume("h", Pred("nonempty", (Var("A"),))),
        )
        t = Compr("x", NAT, Eq(App("inf", (Var("A"), WarrantRef(None))),
                               Var("x")))
        out = resolve_warrantors_term(c, t)
        assert free_warrantors(out) == {"h"}


class TestVernacular:
    def parse(self, src: str, c: Context):
        p = Parser(src)
        p.sig = c.sig
        s = p.statement()
        p.expect_eof()
        return s

    def test_round_trip_dependent_conjunction(self):
        c = set_ctx()
        s = And(
            Pred("nonempty", (Var("A"),)),
            Eq(App("inf", (Var("A"), WarrantRef(None))), App("zero", ())),
        )
        resolved = resolve_warrantors(c, s)
        text = render_vernacular(resolved)
        again = resolve_warrantors(c, self.parse(text, c))
        assert struct_eq(resolved, again)

    def test_vernacular_hides_warrant_arguments(self):
        c = ctx(
            TypeDecl("A", SetType(NAT)),
            Assume("h", Pred("nonempty", (Var("A"),))),
        )
        s = Eq(App("inf", (Var("A"), WarrantRef("h"))), App("zero", ()))
        assert "@" not in render_vernacular(s)
        assert "h" not in render_vernacular(s).replace("inf", "")
