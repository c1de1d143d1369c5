"""Command-line interface: subcommands, exit codes, diagnostics."""
import subprocess
import sys

import pytest

from depconj.cli import main

from conftest import CORPUS


@pytest.fixture(autouse=True)
def plain_output(monkeypatch):
    monkeypatch.setenv("DEPCONJ_COLOR", "0")


def run(argv: list[str]) -> int:
    return main(argv)


class TestCheck:
    def test_corpus_scripts_pass(self, capsys):
        for path in sorted(CORPUS.glob("sec*.prf")):
            assert run(["check", str(path)]) == 0, path.name
            out = capsys.readouterr().out
            assert "ok claim" in out

    def test_meaningless_fails_with_diagnostic(self, capsys):
        code = run(["check", str(CORPUS / "meaningless.prf")])
        err = capsys.readouterr().err
        assert code == 1
        assert "UnboundWarrantor" in err
        assert "inf(A)" in err

    def test_missing_file(self, capsys):
        assert run(["check", "/nonexistent/x.prf"]) == 2

    def test_parse_error_is_usage(self, tmp_path, capsys):
        f = tmp_path / "bad.prf"
        f.write_text("pred P\n")
        assert run(["check", str(f)]) == 2

    def test_failed_claim_cited_with_span(self, tmp_path, capsys):
        f = tmp_path / "wrong.prf"
        f.write_text(
            "pred P;\npred Q;\n"
            "claim c : P <= Q\n"
            "  by derived(UnitOf, adjunction = conj, E = P);\n"
        )
        assert run(["check", str(f)]) == 1
        err = capsys.readouterr().err
        assert "c" in err and "3:" in err


class TestElaborate:
    def test_golden(self, capsys):
        assert run(["elaborate", str(CORPUS / "highlevel_forall.hi")]) == 0
        out = capsys.readouterr().out
        assert out == (CORPUS / "highlevel_forall.lo").read_text()

    def test_output_file(self, tmp_path, capsys):
        dest = tmp_path / "out.lo"
        assert run(["elaborate", str(CORPUS / "highlevel_forall.hi"),
                    "-o", str(dest)]) == 0
        assert dest.read_text() == (
            CORPUS / "highlevel_forall.lo").read_text()


class TestDerive:
    def args_file(self, tmp_path, text: str) -> str:
        f = tmp_path / "args.txt"
        f.write_text(text)
        return str(f)

    def ctx_file(self, tmp_path) -> str:
        f = tmp_path / "ctx.prf"
        f.write_text("pred P;\npred Q;\n")
        return str(f)

    def test_derive_and_recheck(self, tmp_path, capsys):
        out = tmp_path / "d.drv"
        code = run([
            "derive", "DepModusPonens",
            "--ctx", self.ctx_file(tmp_path),
            "--args", self.args_file(
                tmp_path, "binder = z; E = P; G = Q;"),
            "-o", str(out),
        ])
        assert code == 0
        assert run(["check", str(out)]) == 0
        assert "ok" in capsys.readouterr().out

    def test_unknown_rule(self, capsys):
        assert run(["derive", "NoSuchRule"]) == 2

    def test_bad_args(self, tmp_path, capsys):
        code = run([
            "derive", "UnitOf",
            "--args", self.args_file(tmp_path, "adjunction = conj;"),
        ])
        assert code == 1


class TestFuzz:
    def test_catalogue_names(self, capsys):
        assert run(["fuzz", "--seed", "3", "--count", "40",
                    "--models", "chain2,diamond"]) == 0
        out = capsys.readouterr().out
        assert "seed=3" in out

    def test_model_file(self, capsys):
        mdl = CORPUS / "models" / "booleans.mdl"
        assert run(["fuzz", "--seed", "3", "--count", "30",
                    "--models", str(mdl)]) == 0

    def test_unknown_model(self, capsys):
        assert run(["fuzz", "--models", "nope"]) == 2


class TestFmt:
    def test_idempotent(self, tmp_path, capsys):
        src = CORPUS / "sec1.prf"
        assert run(["fmt", str(src)]) == 0
        once = capsys.readouterr().out
        f = tmp_path / "once.prf"
        f.write_text(once)
        assert run(["fmt", str(f)]) == 0
        assert capsys.readouterr().out == once

    def test_explicit_reparses(self, tmp_path, capsys):
        assert run(["fmt", "--explicit", str(CORPUS / "sec6.prf")]) == 0
        text = capsys.readouterr().out
        f = tmp_path / "explicit.prf"
        f.write_text(text)
        assert run(["check", str(f)]) == 0


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "depconj.cli", "check",
             str(CORPUS / "sec1.prf")],
            capture_output=True, text=True,
            env={"DEPCONJ_COLOR": "0", "PATH": "/usr/bin:/bin"},
        )
        assert proc.returncode == 0

    def test_no_command_is_usage(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run([])
        assert exc.value.code == 2
