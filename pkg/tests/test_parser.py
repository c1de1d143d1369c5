"""Surface syntax: statements, terms, scripts, and error reporting."""
import pytest

from depconj.parser import ParseError, Parser
from depconj.printer import format_statement, format_term
from depconj.syntax.equality import struct_eq
from depconj.syntax.nodes import (
    And, App, BaseType, Compr, ComprSet, DepAnd, DepImp, Desc, Eq, ExistsS,
    ExistsT, ExistsUniqueT, ForallS, ForallT, Imp, Mem, Or, Pred, SetType,
    Top, Var, WarrantRef,
)
from depconj.syntax.signature import (
    FunDecl, PredDecl, TermParam, WarrantParam,
)

NAT = BaseType("Nat")


def parser(src: str) -> Parser:
    p = Parser(src)
    p.sig = (
        p.sig.with_base("Nat")
        .with_pred(PredDecl("P", ()))
        .with_pred(PredDecl("Q", ()))
        .with_pred(PredDecl("R", (NAT,)))
        .with_fun(FunDecl("zero", (), NAT))
        .with_fun(FunDecl("succ", (TermParam("n", NAT),), NAT))
    )
    return p


def stmt(src: str):
    p = parser(src)
    s = p.statement()
    p.expect_eof()
    return s


def term(src: str):
    p = parser(src)
    t = p.term()
    p.expect_eof()
    return t


class TestStatements:
    def test_atoms(self):
        assert stmt("top") == Top()
        assert stmt("P") == Pred("P", ())
        assert stmt("R(zero)") == Pred("R", (App("zero", ()),))

    def test_precedence(self):
        s = stmt("P \\/ Q /\\ P => Q")
        assert isinstance(s, Imp)
        assert isinstance(s.left, Or)
        assert isinstance(s.left.right, And)

    def test_imp_right_assoc(self):
        s = stmt("P => Q => P")
        assert isinstance(s.right, Imp)

    def test_parens(self):
        s = stmt("(P => Q) /\\ P")
        assert isinstance(s, And)
        assert isinstance(s.left, Imp)

    def test_quantifiers(self):
        assert stmt("forall x : Nat . R(x)") == ForallT(
            "x", NAT, Pred("R", (Var("x"),)))
        assert stmt("exists x : Nat . R(x)") == ExistsT(
            "x", NAT, Pred("R", (Var("x"),)))
        assert stmt("exists! x : Nat . R(x)") == ExistsUniqueT(
            "x", NAT, Pred("R", (Var("x"),)))

    def test_bounded_quantifiers(self):
        s = stmt("forall x in A . R(x)")
        assert isinstance(s, ForallS)
        assert s.host == Var("A")
        s = stmt("exists x in A . R(x)")
        assert isinstance(s, ExistsS)

    def test_unique_existence_needs_type(self):
        with pytest.raises(ParseError):
            stmt("exists! x in A . R(x)")

    def test_dependent_connectives(self):
        s = stmt("[z |- P] /\\ Q")
        assert s == DepAnd("z", Pred("P", ()), Pred("Q", ()))
        s = stmt("[z |- P] => Q")
        assert s == DepImp("z", Pred("P", ()), Pred("Q", ()))

    def test_anonymous_bracket_gets_fresh_binder(self):
        s = stmt("[P] /\\ Q")
        assert isinstance(s, DepAnd)
        assert s.binder

    def test_eq_and_mem(self):
        assert stmt("zero = succ(zero)") == Eq(
            App("zero", ()), App("succ", (App("zero", ()),)))
        assert stmt("zero in A") == Mem(App("zero", ()), Var("A"))


class TestTerms:
    def test_comprehension_typed(self):
        t = term("{ x : Nat | R(x) }")
        assert t == Compr("x", NAT, Pred("R", (Var("x"),)))

    def test_comprehension_bounded(self):
        t = term("{ x in A | R(x) }")
        assert isinstance(t, ComprSet)
        assert t.host == Var("A")

    def test_desc(self):
        assert term("desc(u)") == Desc(WarrantRef("u"))

    def test_call_with_hole_and_ref(self):
        sig = (
            parser("").sig
            .with_pred(PredDecl("nonempty", (SetType(NAT),)))
            .with_fun(FunDecl(
                "pick",
                (TermParam("S", SetType(NAT)),
                 WarrantParam("h", Pred("nonempty", (Var("S"),)))),
                NAT,
            ))
        )
        for src, want in [
            ("pick(A, @h)", WarrantRef("h")),
            ("pick(A)", WarrantRef(None)),
            ("pick(A, @?)", WarrantRef(None)),
        ]:
            q = Parser(src)
            q.sig = sig
            assert q.term().args[1] == want

    def test_unknown_symbol(self):
        with pytest.raises(ParseError):
            term("mystery(zero)")


class TestSpans:
    def test_error_carries_position(self):
        try:
            stmt("P /\\ ")
        except ParseError as e:
            assert e.span is not None
            assert e.span.line == 1
        else:
            pytest.fail("expected a parse error")

    def test_statement_span(self):
        s = stmt("forall x : Nat . R(x)")
        assert s.span is not None
        assert s.span.col == 1


class TestPrinterRoundTrip:
    CASES = [
        "top",
        "P /\\ Q",
        "P \\/ Q => P",
        "[z |- P] /\\ R(zero)",
        "[z |- P] => Q",
        "forall x : Nat . R(x)",
        "exists! x : Nat . R(x)",
        "zero in { x : Nat | R(x) }",
    ]

    @pytest.mark.parametrize("src", CASES)
    def test_round_trip(self, src):
        s = stmt(src)
        again = stmt(format_statement(s, explicit=True))
        assert struct_eq(s, again)

    def test_term_round_trip(self):
        t = term("{ x : Nat | [z |- P] /\\ R(x) }")
        again = term(format_term(t, explicit=True))
        assert struct_eq(t, again)
