"""Command-line front end over proof scripts, derivations, and models.

Exit codes: 0 success, 1 a claim or soundness check failed, 2 usage,
parse, or file errors. Failure diagnostics go to standard error.
DEPCONJ_COLOR=1 forces ANSI colors on, =0 forces them off; otherwise
color follows whether the stream is a terminal.
"""
from __future__ import annotations

import argparse
import os
import sys

from .derived import BadArgs, DERIVED_BY_NAME, derive
from .elaborate import (
    elaborate_statement, elaborate_term, resolve_warrantors,
    resolve_warrantors_term,
)
from .errors import Diagnostic
from .kernel import KernelError, check
from .model import catalogue, fuzz, load_model
from .parser import ParseError, Parser
from .printer import format_judgment
from .script import (
    check_script, format_script, load_script, lower_script, parse_script,
)
from .serialize import (
    derivations_equal, dump_derivation_text, load_derivation_text,
    parse_param_value,
)
from .syntax.equality import contexts_struct_eq, struct_eq
from .syntax.nodes import Statement, Term


def _color_on(stream) -> bool:
    env = os.environ.get("DEPCONJ_COLOR")
    if env == "1":
        return True
    if env == "0":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _ok(text: str) -> str:
    if _color_on(sys.stdout):
        return f"\x1b[32m{text}\x1b[0m"
    return text


def _fail(text: str) -> str:
    if _color_on(sys.stderr):
        return f"\x1b[31m{text}\x1b[0m"
    return text


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# ------------------------------------------------------------ commands

def _cmd_check(args) -> int:
    if args.file.endswith(".drv"):
        d, _sig = load_derivation_text(_read(args.file))
        try:
            j = check(d)
        except KernelError as exc:
            print(_fail(f"FAIL {args.file}: {exc}"), file=sys.stderr)
            return 1
        print(_ok(f"ok {format_judgment(j.ctx, j.kind, j.lhs, j.rhs)}"))
        return 0

    script = parse_script(_read(args.file))
    report = check_script(script)
    code = 0
    for line in report.lines:
        label = f"{line.kind} {line.name}".rstrip()
        if line.ok:
            print(_ok(f"ok {label}: {line.detail}"))
        else:
            code = 1
            where = f" ({line.span})" if line.span is not None else ""
            print(_fail(f"FAIL {label}{where}: {line.detail}"),
                  file=sys.stderr)
    if code == 0:
        code = _recheck_serialized(script, report)
    return code


def _recheck_serialized(script, report) -> int:
    """Exit 0 promises every claim survives a serialization round trip."""
    for name, (j, d) in report.claims.items():
        text = dump_derivation_text(d, script.sig)
        d2, _sig = load_derivation_text(text)
        try:
            j2 = check(d2)
        except KernelError as exc:
            print(_fail(f"FAIL claim {name}: reloaded derivation "
                        f"rejected: {exc}"), file=sys.stderr)
            return 1
        same = (derivations_equal(d, d2)
                and j2.kind == j.kind
                and contexts_struct_eq(j2.ctx, j.ctx)
                and struct_eq(j2.lhs, j.lhs, j.ctx)
                and struct_eq(j2.rhs, j.rhs, j.ctx))
        if not same:
            print(_fail(f"FAIL claim {name}: serialization round trip "
                        f"changed the derivation"), file=sys.stderr)
            return 1
    return 0


def _cmd_elaborate(args) -> int:
    script = parse_script(_read(args.file))
    _emit(lower_script(script), args.out)
    return 0


def _ambient_of(path: str | None):
    from .syntax.context import Context
    from .syntax.signature import EMPTY_SIGNATURE

    if path is None:
        return Context(EMPTY_SIGNATURE)
    script = parse_script(_read(path))
    report = check_script(script)
    if not report.ok:
        bad = next(line for line in report.lines if not line.ok)
        raise Diagnostic(f"context file {path}: {bad.detail}")
    return report.context


def _parse_args_file(path: str | None, ctx) -> dict:
    if path is None:
        return {}
    p = Parser(_read(path), sig=ctx.sig)
    out: dict = {}
    while not p.at_eof():
        key = p._expect("ident").text
        p._expect("op", "=")
        out[key] = parse_param_value(p, key)
        if not (p._match("op", ";") or p._match("op", ",")):
            break
    p.expect_eof()
    return out


def _cmd_derive(args) -> int:
    rule = DERIVED_BY_NAME.get(args.name)
    if rule is None:
        known = ", ".join(sorted(DERIVED_BY_NAME))
        print(_fail(f"unknown derived rule {args.name!r}; "
                    f"known: {known}"), file=sys.stderr)
        return 2
    ctx = _ambient_of(args.ctx)
    raw = _parse_args_file(args.args, ctx)
    params = {}
    for k, v in raw.items():
        if isinstance(v, Statement):
            v = resolve_warrantors(ctx, elaborate_statement(ctx, v).lowered)
        elif isinstance(v, Term):
            v = resolve_warrantors_term(ctx, elaborate_term(ctx, v).lowered)
        params[k] = v
    d = derive(rule, ctx, **params)
    _emit(dump_derivation_text(d, ctx.sig), args.out)
    return 0


def _cmd_fuzz(args) -> int:
    if args.models is None:
        models = list(catalogue().values())
    else:
        cat = catalogue()
        models = []
        for name in args.models.split(","):
            name = name.strip()
            if name in cat:
                models.append(cat[name])
            elif name.endswith(".mdl"):
                models.append(load_model(name))
            else:
                known = ", ".join(sorted(cat))
                print(_fail(f"unknown model {name!r}; catalogue: {known}, "
                            f"or pass a .mdl path"), file=sys.stderr)
                return 2
    report = fuzz(seed=args.seed, count=args.count, models=models)
    print(report.text())
    return 1 if report.failures else 0


def _cmd_fmt(args) -> int:
    script = parse_script(_read(args.file))
    _emit(format_script(script, explicit=args.explicit), args.out)
    return 0


# ------------------------------------------------------------ dispatch

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="depconj",
        description="Check, elaborate, and fuzz proofs in a calculus of "
                    "dependent conjunction and implication.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check every claim in a proof script "
                                     "(or a .drv derivation file)")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("elaborate",
                       help="translate a high-level script to fully "
                            "explicit form with a warrantor table")
    p.add_argument("file")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(fn=_cmd_elaborate)

    p = sub.add_parser("derive",
                       help="build a named derived rule and emit the "
                            "serialized derivation")
    p.add_argument("name")
    p.add_argument("--ctx", default=None,
                   help="script file providing signature and context")
    p.add_argument("--args", default=None,
                   help="file of `key = value` constructor arguments")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(fn=_cmd_derive)

    p = sub.add_parser("fuzz", help="random soundness cross-check of the "
                                    "kernel against finite models")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--models", default=None,
                   help="comma-separated catalogue names or .mdl paths")
    p.set_defaults(fn=_cmd_fuzz)

    p = sub.add_parser("fmt", help="canonical pretty-print of a script")
    p.add_argument("file")
    p.add_argument("--explicit", action="store_true",
                   help="spell out warrant binders and references")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(fn=_cmd_fmt)
    return top


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(_fail(str(exc)), file=sys.stderr)
        return 2
    except OSError as exc:
        print(_fail(str(exc)), file=sys.stderr)
        return 2
    except (Diagnostic, KernelError, BadArgs) as exc:
        print(_fail(str(exc)), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
