"""Property tests for structural invariants of the syntax layer."""
from hypothesis import given, settings, strategies as st

from depconj.derived import DerivedRuleName as D, derive
from depconj.kernel import check
from depconj.model import catalogue, check_soundness
from depconj.parser import parse_statement
from depconj.printer import format_statement
from depconj.syntax.context import Context
from depconj.syntax.equality import struct_eq
from depconj.syntax.nodes import (
    And, App, BaseType, DepAnd, DepImp, ExistsT, ForallT, Imp, Or, Pred,
    Top, Var, free_term_vars,
)
from depconj.syntax.signature import FunDecl, PredDecl, Signature
from depconj.syntax.subst import rename_warrantors_uniform, substitute
from depconj.syntax.wellformed import erase, is_meaningful
from depconj.syntax.nodes import is_low_level

NAT = BaseType("Nat")

SIG = (
    Signature()
    .with_base("Nat")
    .with_pred(PredDecl("P", ()))
    .with_pred(PredDecl("Q", ()))
    .with_pred(PredDecl("R", (NAT,)))
    .with_fun(FunDecl("zero", (), NAT))
)
CTX = Context(SIG)

_atoms = st.sampled_from([
    Top(),
    Pred("P", ()),
    Pred("Q", ()),
    Pred("R", (App("zero", ()),)),
])


def _compose(children):
    binary = st.tuples(children, children).map(
        lambda ab: And(*ab)) | st.tuples(children, children).map(
        lambda ab: Or(*ab)) | st.tuples(children, children).map(
        lambda ab: Imp(*ab)) | st.tuples(children, children).map(
        lambda ab: DepAnd("z", *ab)) | st.tuples(children, children).map(
        lambda ab: DepImp("z", *ab))
    quant = children.map(lambda b: ForallT("x", NAT, b)) | children.map(
        lambda b: ExistsT("x", NAT, b))
    return binary | quant


statements = st.recursive(_atoms, _compose, max_leaves=12)


def reparse(s):
    return parse_statement(format_statement(s, explicit=True), SIG)


@given(statements)
def test_struct_eq_reflexive(s):
    assert struct_eq(s, s)


@given(statements, statements)
def test_struct_eq_symmetric(a, b):
    assert struct_eq(a, b) == struct_eq(b, a)


@given(statements)
def test_print_parse_round_trip(s):
    assert struct_eq(reparse(s), s)


@given(statements)
def test_generated_statements_meaningful(s):
    assert is_meaningful(CTX, s)


@given(statements)
def test_erase_idempotent_and_low(s):
    e = erase(s)
    assert is_low_level(e)
    assert erase(e) == e


@given(statements)
def test_substitute_eliminates_variable(s):
    open_stmt = Imp(Pred("R", (Var("v"),)), s)
    closed = substitute(open_stmt, App("zero", ()), "v")
    assert "v" not in free_term_vars(closed)


@given(statements)
def test_uniform_rename_invertible(s):
    there = rename_warrantors_uniform(s, {"z": "w9"})
    back = rename_warrantors_uniform(there, {"w9": "z"})
    assert back == s


@settings(max_examples=25, deadline=None)
@given(statements, statements)
def test_conj_adjunction_sound_on_random_statements(e, f):
    m = catalogue()["chain3"]
    unit = derive(D.UNIT_OF, CTX, adjunction="conj", E=e)
    mp = derive(D.COUNIT_OF, CTX, adjunction="imp", F=e, G=f)
    for d in (unit, mp):
        check(d)
        assert check_soundness(m, d) is None
