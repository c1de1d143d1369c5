"""Proof scripts: parsing, checking, lowering, formatting."""
import pytest

from depconj.parser import ParseError
from depconj.script import (
    check_script, format_script, load_script, lower_script, parse_script,
)
from depconj.syntax.equality import struct_eq
from depconj.syntax.nodes import And, DepAnd, Pred, Top

from conftest import CORPUS, corpus_scripts


def report(src: str):
    return check_script(parse_script(src))


class TestParsing:
    def test_signature_and_context_items(self):
        s = parse_script(
            "type Nat;\n"
            "pred P;\n"
            "fun zero() : Nat;\n"
            "context A : Set(Nat);\n"
            "context assume h : P;\n"
        )
        assert len(s.items) == 5

    def test_lowered_assume_form_reparses(self):
        s = parse_script("pred P;\ncontext h |- P;\n")
        rep = check_script(s)
        assert rep.ok

    def test_claim_by_derived(self):
        rep = report(
            "pred P;\n"
            "claim c : P <= P /\\ P\n"
            "  by derived(UnitOf, adjunction = conj, E = P);\n"
        )
        assert rep.ok
        assert "c" in rep.claims

    def test_claim_proof_tree(self):
        rep = report(
            "pred P;\npred Q;\n"
            "claim c : P /\\ Q <= Q /\\ P\n"
            "  proof\n"
            "    AndIntro\n"
            "      AndElimR(left = P, right = Q)\n"
            "      AndElimL(left = P, right = Q)\n"
            "  end\n"
        )
        assert rep.ok

    def test_unknown_derived_rule(self):
        rep = report("pred P;\nclaim c : P <= P by derived(Mystery);\n")
        assert not rep.ok
        assert any("Mystery" in (line.detail or "") for line in rep.lines)

    def test_statement_item_resolves(self):
        rep = report(
            "type Nat;\n"
            "pred nonempty(Set(Nat));\n"
            "fun zero() : Nat;\n"
            "fun inf(S : Set(Nat), h : warrant(nonempty(S))) : Nat;\n"
            "context A : Set(Nat);\n"
            "statement s : nonempty(A) /\\ inf(A) = zero;\n"
        )
        assert rep.ok
        resolved = rep.statements["s"]
        assert isinstance(resolved, DepAnd)

    def test_def_expands(self):
        rep = report(
            "pred P;\npred Q;\n"
            "def both := P /\\ Q;\n"
            "claim c : both <= P\n"
            "  by derived(CounitOf, adjunction = conj, E = P, F = Q,"
            " side = left);\n"
        )
        assert rep.ok


class TestClaimChecking:
    def test_wrong_conclusion_reported(self):
        rep = report(
            "pred P;\npred Q;\n"
            "claim c : P <= Q\n"
            "  by derived(UnitOf, adjunction = conj, E = P);\n"
        )
        assert not rep.ok
        assert any(not line.ok for line in rep.lines)

    def test_bracket_context_must_match(self):
        rep = report(
            "pred P;\n"
            "claim c [z |- P] : top <= P\n"
            "  by derived(AssumptionTruth, binder = w, E = P);\n"
        )
        assert not rep.ok

    def test_claim_context_extends_ambient(self):
        rep = report(
            "pred P;\npred Q;\n"
            "context assume h : Q;\n"
            "claim c [z |- P] : top <= P\n"
            "  by derived(AssumptionTruth, binder = z, E = P);\n"
        )
        assert rep.ok
        j, _ = rep.claims["c"]
        assert [e.name for e in j.ctx.entries] == ["h", "z"]


class TestCorpus:
    @pytest.mark.parametrize(
        "path", corpus_scripts(), ids=lambda p: p.stem)
    def test_script_checks(self, path):
        rep = check_script(load_script(str(path)))
        assert rep.ok, [str(line) for line in rep.lines if not line.ok]
        assert rep.claims

    def test_meaningless_rejected(self):
        rep = check_script(load_script(str(CORPUS / "meaningless.prf")))
        assert not rep.ok

    @pytest.mark.parametrize(
        "path", corpus_scripts(), ids=lambda p: p.stem)
    def test_format_idempotent(self, path):
        script = load_script(str(path))
        once = format_script(script, explicit=False)
        again = format_script(parse_script(once), explicit=False)
        assert once == again

    @pytest.mark.parametrize(
        "path", corpus_scripts(), ids=lambda p: p.stem)
    def test_explicit_format_reparses_struct_eq(self, path):
        script = load_script(str(path))
        rep = check_script(script)
        explicit = format_script(script, explicit=True)
        rep2 = check_script(parse_script(explicit))
        assert rep2.ok
        assert set(rep.claims) == set(rep2.claims)
        for name, (j, _) in rep.claims.items():
            j2, _ = rep2.claims[name]
            assert j.kind == j2.kind
            assert struct_eq(j.lhs, j2.lhs) and struct_eq(j.rhs, j2.rhs)


class TestLowering:
    def test_lower_script_golden(self):
        src = (CORPUS / "highlevel_forall.hi").read_text()
        want = (CORPUS / "highlevel_forall.lo").read_text()
        assert lower_script(parse_script(src)) == want

    def test_lowered_rechecks(self):
        low = lower_script(parse_script(
            (CORPUS / "highlevel_forall.hi").read_text()))
        assert check_script(parse_script(low)).ok
