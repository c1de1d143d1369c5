"""Proof scripts: parse, check, lower, and reformat .prf/.hi/.lo files.

A script is a flat sequence of items:

    type/fun/pred/def ... ;          signature growth
    context <entry> ;                extend the ambient context
    statement <name> : <stmt> ;      a named statement to elaborate
    claim <name> [local]* : E <= F   a judgment with its proof
        by derived(Name, k = v, ...) ;
    claim <name> : A subset B
        proof <indented rule tree> end

Claims carry the proof either as a call to a derived-rule constructor or
as an explicit kernel tree. The stated judgment lives at the ambient
context extended by the claim's bracketed local entries; a derived
constructor always runs at the ambient context, so the brackets state
exactly the entries the constructor introduces. Tree leaves may omit
their ctx parameter, which the checker fills with the claim context.

Statements and claim sides are written in the high-level surface
language; checking elaborates and resolves them first. Proof tree
parameters are kernel-level and are passed through untouched.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .derived import BadArgs, DERIVED_BY_NAME, derive
from .elaborate import (
    elaborate_context, elaborate_statement, elaborate_term,
    resolve_warrantors, resolve_warrantors_term,
)
from .errors import Diagnostic
from .kernel import Derivation, KernelError, RuleName, check
from .parser import (
    Abbrev, ParseError, Parser, parse_judgment_parts,
)
from .printer import (
    format_entry, format_fun_decl, format_judgment, format_pred_decl,
    format_statement, format_term, format_type,
)
from .serialize import (
    format_derivation_lines, format_param_value, parse_derivation_tree,
    parse_param_value,
)
from .syntax.context import Assume, Context, ContextEntry, SetDecl, TypeDecl
from .syntax.context import extend_context
from .syntax.equality import contexts_struct_eq, struct_eq
from .syntax.nodes import Span, Statement, Term
from .syntax.signature import FunDecl, PredDecl, Signature
from .syntax.wellformed import meaningful


# ------------------------------------------------------------- model

@dataclass(frozen=True)
class TypeItem:
    name: str


@dataclass(frozen=True)
class PredItem:
    decl: PredDecl


@dataclass(frozen=True)
class FunItem:
    decl: FunDecl


@dataclass(frozen=True)
class DefItem:
    abbrev: Abbrev


@dataclass(frozen=True)
class ContextItem:
    entry: ContextEntry
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class StatementItem:
    name: str
    body: Statement
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ClaimItem:
    name: str
    local: tuple[ContextEntry, ...]
    kind: str
    lhs: Statement | Term
    rhs: Statement | Term
    derived_call: tuple[str, dict] | None
    proof: Derivation | None
    span: Span | None = field(default=None, compare=False, repr=False)


Item = (TypeItem | PredItem | FunItem | DefItem | ContextItem
        | StatementItem | ClaimItem)


@dataclass(frozen=True)
class ProofScript:
    sig: Signature
    defs: dict[str, Abbrev]
    items: tuple[Item, ...]


# ------------------------------------------------------------ parsing

def _classified_sig_item(p: Parser, before) -> Item:
    nb, nf, np_, nd = before
    if len(p.sig.base_types) > nb:
        return TypeItem(p.sig.base_types[-1])
    if len(p.sig.funs) > nf:
        return FunItem(p.sig.funs[-1])
    if len(p.sig.preds) > np_:
        return PredItem(p.sig.preds[-1])
    name = list(p.defs)[-1]
    return DefItem(p.defs[name])


def parse_script(text: str) -> ProofScript:
    p = Parser(text)
    items: list[Item] = []
    while not p.at_eof():
        before = (len(p.sig.base_types), len(p.sig.funs),
                  len(p.sig.preds), len(p.defs))
        if p.signature_item():
            items.append(_classified_sig_item(p, before))
            continue
        tok = p._peek()
        if p._match("kw", "context"):
            entry = p.context_entry()
            p._expect("op", ";")
            items.append(ContextItem(entry, tok.span))
        elif p._match("kw", "statement"):
            name = p._expect("ident").text
            p._expect("op", ":")
            body = p.statement()
            p._expect("op", ";")
            items.append(StatementItem(name, body, tok.span))
        elif p._match("kw", "claim"):
            items.append(_parse_claim(p, tok.span))
        else:
            raise ParseError(
                "expected a signature item, context, statement, or claim",
                tok.span,
            )
    return ProofScript(p.sig, dict(p.defs), tuple(items))


def _parse_claim(p: Parser, span: Span) -> ClaimItem:
    name = p._expect("ident").text
    local = p.context_brackets()
    p._expect("op", ":")
    kind, lhs, rhs = parse_judgment_parts(p)
    if p._match("kw", "by"):
        p._expect("kw", "derived")
        p._expect("op", "(")
        dname = p._expect("ident").text
        params: dict = {}
        while not p._match("op", ")"):
            p._expect("op", ",")
            key = p._expect("ident").text
            p._expect("op", "=")
            params[key] = parse_param_value(p, key)
        p._expect("op", ";")
        return ClaimItem(name, local, kind, lhs, rhs, (dname, params),
                         None, span)
    if p._match("kw", "proof"):
        d = parse_derivation_tree(p)
        p._expect("kw", "end")
        return ClaimItem(name, local, kind, lhs, rhs, None, d, span)
    raise p._error("expected 'by derived(...)' or 'proof ... end'")


def load_script(path: str) -> ProofScript:
    with open(path, encoding="utf-8") as fh:
        return parse_script(fh.read())


# ----------------------------------------------------------- checking

@dataclass(frozen=True)
class ItemReport:
    kind: str
    name: str
    ok: bool
    detail: str
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ScriptReport:
    ok: bool
    lines: tuple[ItemReport, ...]
    context: Context
    warrantors: dict[str, tuple[Statement, Span | None]]
    statements: dict[str, Statement]
    claims: dict[str, tuple]


_CTX_RULES = frozenset((
    RuleName.REFL, RuleName.TOP_INTRO,
    RuleName.AND_ELIM_L, RuleName.AND_ELIM_R,
    RuleName.OR_INTRO_L, RuleName.OR_INTRO_R,
    RuleName.INCL_REFL, RuleName.DESCRIPTION,
))


def fill_leaf_contexts(d: Derivation, ctx: Context) -> Derivation:
    """Give every leaf that wants a ctx parameter the claim context."""
    params = d.params
    if d.rule in _CTX_RULES and "ctx" not in params:
        params = dict(params)
        params["ctx"] = ctx
    return Derivation(d.rule, params,
                      tuple(fill_leaf_contexts(q, ctx) for q in d.premises))


def _lower_entries(sig: Signature,
                   written: tuple[ContextEntry, ...]):
    """Elaborate and resolve a written context, validating as it grows."""
    res = elaborate_context(Context(sig, written))
    ctx = Context(sig)
    for e in res.lowered.entries:
        if isinstance(e, Assume):
            e = Assume(e.name, resolve_warrantors(ctx, e.stmt), span=e.span)
        ctx = extend_context(ctx, e)
    return ctx, res.warrantor_table


class _Checker:
    def __init__(self, script: ProofScript):
        self.script = script
        self.sig = script.sig
        self.written: tuple[ContextEntry, ...] = ()
        self.ambient = Context(self.sig)
        self.warrantors: dict[str, tuple[Statement, Span | None]] = {}
        self.statements: dict[str, Statement] = {}
        self.claims: dict[str, tuple] = {}
        self.lines: list[ItemReport] = []

    def run(self) -> ScriptReport:
        for item in self.script.items:
            match item:
                case ContextItem():
                    if not self._context(item):
                        break
                case StatementItem():
                    self._statement(item)
                case ClaimItem():
                    self._claim(item)
                case _:
                    pass
        ok = all(line.ok for line in self.lines)
        return ScriptReport(ok, tuple(self.lines), self.ambient,
                            self.warrantors, self.statements, self.claims)

    def _context(self, item: ContextItem) -> bool:
        grown = self.written + (item.entry,)
        try:
            ctx, table = _lower_entries(self.sig, grown)
        except Diagnostic as exc:
            self.lines.append(ItemReport(
                "context", item.entry.name, False, str(exc), item.span))
            return False
        self.written = grown
        self.ambient = ctx
        self.warrantors.update(table)
        self.lines.append(ItemReport(
            "context", item.entry.name, True,
            format_entry(item.entry), item.span))
        return True

    def _statement(self, item: StatementItem) -> None:
        try:
            res = elaborate_statement(self.ambient, item.body)
            resolved = resolve_warrantors(self.ambient, res.lowered)
            meaningful(self.ambient, resolved)
        except Diagnostic as exc:
            self.lines.append(ItemReport(
                "statement", item.name, False, str(exc), item.span))
            return
        self.statements[item.name] = resolved
        self.warrantors.update(res.warrantor_table)
        self.lines.append(ItemReport(
            "statement", item.name, True,
            format_statement(resolved), item.span))

    def _claim_context(self, item: ClaimItem) -> Context:
        if not item.local:
            return self.ambient
        ctx, _ = _lower_entries(self.sig, self.written + item.local)
        return ctx

    def _claim_sides(self, item: ClaimItem, ctx: Context):
        if item.kind == "subset":
            lhs = resolve_warrantors_term(
                ctx, elaborate_term(ctx, item.lhs).lowered)
            rhs = resolve_warrantors_term(
                ctx, elaborate_term(ctx, item.rhs).lowered)
        else:
            lhs = resolve_warrantors(
                ctx, elaborate_statement(ctx, item.lhs).lowered)
            rhs = resolve_warrantors(
                ctx, elaborate_statement(ctx, item.rhs).lowered)
        return lhs, rhs

    def _claim_proof(self, item: ClaimItem, ctx: Context) -> Derivation:
        if item.derived_call is not None:
            dname, raw = item.derived_call
            rule = DERIVED_BY_NAME.get(dname)
            if rule is None:
                raise BadArgs(f"unknown derived rule {dname}")
            args = {}
            for k, v in raw.items():
                if isinstance(v, Statement):
                    v = resolve_warrantors(
                        ctx, elaborate_statement(ctx, v).lowered)
                elif isinstance(v, Term):
                    v = resolve_warrantors_term(
                        ctx, elaborate_term(ctx, v).lowered)
                args[k] = v
            return derive(rule, self.ambient, **args)
        d = fill_leaf_contexts(item.proof, ctx)
        check(d)
        return d

    def _claim(self, item: ClaimItem) -> None:
        try:
            ctx = self._claim_context(item)
            lhs, rhs = self._claim_sides(item, ctx)
            d = self._claim_proof(item, ctx)
            j = check(d)
            stated = format_judgment(ctx, item.kind, lhs, rhs)
            if (j.kind != item.kind
                    or not contexts_struct_eq(j.ctx, ctx)
                    or not struct_eq(j.lhs, lhs, ctx)
                    or not struct_eq(j.rhs, rhs, ctx)):
                self.lines.append(ItemReport(
                    "claim", item.name, False,
                    f"proved {j} but the claim states {stated}", item.span))
                return
        except (Diagnostic, KernelError, BadArgs) as exc:
            self.lines.append(ItemReport(
                "claim", item.name, False, str(exc), item.span))
            return
        self.claims[item.name] = (j, d)
        self.lines.append(ItemReport("claim", item.name, True, str(j),
                                     item.span))


def check_script(script: ProofScript) -> ScriptReport:
    return _Checker(script).run()


# ----------------------------------------------------------- lowering

def lower_script(script: ProofScript) -> str:
    """Produce the fully explicit form of a high-level script.

    Signature items are kept, context entries and statements are
    elaborated and resolved, and a trailing comment block records every
    introduced warrantor with its origin.
    """
    report = check_script(script)
    if not report.ok:
        bad = next(line for line in report.lines if not line.ok)
        raise Diagnostic(f"{bad.kind} {bad.name}: {bad.detail}")

    lines: list[str] = []
    for item in script.items:
        match item:
            case TypeItem(name):
                lines.append(f"type {name};")
            case PredItem(decl):
                lines.append(format_pred_decl(decl))
            case FunItem(decl):
                lines.append(format_fun_decl(decl))
            case _:
                pass

    for e in report.context.entries:
        lines.append(f"context {format_entry(e)};")
    for name, resolved in report.statements.items():
        lines.append(f"statement {name} : {format_statement(resolved)};")

    if report.warrantors:
        lines.append("")
        lines.append("# warrantors:")
        for name, (mem, span) in report.warrantors.items():
            where = f"from {span.line}:{span.col}" if span else "synthesized"
            lines.append(f"#   {name} : {format_statement(mem)}  ({where})")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------- reformatting

def _format_claim(item: ClaimItem, explicit: bool) -> list[str]:
    head = f"claim {item.name}"
    if item.local:
        brackets = " ".join(
            f"[{format_entry(e, explicit)}]" for e in item.local)
        head = f"{head} {brackets}"
    if item.kind == "subset":
        body = (f"{format_term(item.lhs, explicit)} subset "
                f"{format_term(item.rhs, explicit)}")
    else:
        body = (f"{format_statement(item.lhs, explicit)} <= "
                f"{format_statement(item.rhs, explicit)}")
    head = f"{head} : {body}"
    if item.derived_call is not None:
        dname, params = item.derived_call
        args = "".join(
            f", {k} = {format_param_value(v)}" for k, v in params.items())
        return [f"{head}", f"  by derived({dname}{args});"]
    lines = [f"{head}", "  proof"]
    lines.extend(format_derivation_lines(item.proof, 2))
    lines.append("  end")
    return lines


def format_script(script: ProofScript, explicit: bool = True) -> str:
    lines: list[str] = []
    for item in script.items:
        match item:
            case TypeItem(name):
                lines.append(f"type {name};")
            case PredItem(decl):
                lines.append(format_pred_decl(decl))
            case FunItem(decl):
                lines.append(format_fun_decl(decl))
            case DefItem(ab):
                params = ""
                if ab.params:
                    inner = ", ".join(
                        f"{n} : {format_type(t)}" for n, t in ab.params)
                    params = f"({inner})"
                body = format_statement(ab.body, explicit)
                lines.append(f"def {ab.name}{params} := {body};")
            case ContextItem(entry, _):
                lines.append(f"context {format_entry(entry, explicit)};")
            case StatementItem(name, body, _):
                stmt = format_statement(body, explicit)
                lines.append(f"statement {name} : {stmt};")
            case ClaimItem():
                lines.extend(_format_claim(item, explicit))
    return "\n".join(lines) + "\n"
