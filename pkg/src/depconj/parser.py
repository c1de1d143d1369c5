"""Recursive-descent parser for the surface syntax.

Precedence: => binds weakest and associates right, then \\/, then /\\,
both associating left. Binder forms — forall/exists/exists!, set-bounded
variants, and the assumption brackets [z |- E] /\\ F, [E] /\\ F — extend
maximally to the right. Terms never need parentheses.

The parser is signature-aware: identifier heads resolve to declared
function symbols, predicate symbols, or parse-time abbreviations, and
call-site arguments are aligned against the declared parameters, leaving
an unresolved slot for every omitted warrant argument.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax.nodes import (
    And, App, BaseType, Compr, ComprSet, DepAnd, DepImp, Desc, Eq, ExistsS,
    ExistsT, ExistsUniqueT, ForallS, ForallT, Imp, Mem, Or, Pred, SetType,
    Span, Statement, Term, Top, Type, Var, WarrantRef, fresh_name,
)
from .syntax.signature import (
    FunDecl, PredDecl, Signature, TermParam, WarrantParam,
)
from .syntax.context import Assume, Context, ContextEntry, SetDecl, TypeDecl
from .syntax.subst import substitute_many


class ParseError(Exception):
    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        loc = f" at {self.span}" if self.span is not None else ""
        return f"parse error{loc}: {self.message}"


KEYWORDS = frozenset((
    "top", "forall", "exists", "in", "desc", "subset",
    "type", "fun", "pred", "def", "warrant",
    "context", "assume", "statement", "claim", "by", "derived",
    "proof", "end",
))

_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<comment>\#[^\n]*)
      | (?P<nl>\n)
      | (?P<op>:=|=>|\|-|<=|/\\|\\/|[()\[\]{},:;.|@=!?])
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*[′″‴⁗]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "op", "ident", "kw", "eof"
    text: str
    span: Span


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", Span(line, col)
            )
        pos = m.end()
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "nl":
            line += 1
            col = 1
            continue
        if kind in ("ws", "comment"):
            col += len(lexeme)
            continue
        span = Span(line, col)
        col += len(lexeme)
        if kind == "ident" and lexeme in KEYWORDS:
            tokens.append(Token("kw", lexeme, span))
        else:
            tokens.append(Token(kind, lexeme, span))
    tokens.append(Token("eof", "", Span(line, col)))
    return tokens


@dataclass(frozen=True)
class Abbrev:
    """Parse-time macro: name(params) expands to a statement."""
    name: str
    params: tuple[tuple[str, Type], ...]
    body: Statement


class Parser:
    def __init__(self, text: str, sig: Signature | None = None,
                 defs: dict[str, Abbrev] | None = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.sig = sig if sig is not None else Signature()
        self.defs = dict(defs) if defs else {}

    # ------------------------------------------------------- plumbing

    def _peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def _next(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def _at(self, kind: str, text: str | None = None) -> bool:
        t = self._peek()
        return t.kind == kind and (text is None or t.text == text)

    def _match(self, kind: str, text: str | None = None) -> Token | None:
        if self._at(kind, text):
            return self._next()
        return None

    def _expect(self, kind: str, text: str | None = None) -> Token:
        t = self._peek()
        if not self._at(kind, text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {t.text or t.kind!r}", t.span)
        return self._next()

    def _error(self, message: str) -> ParseError:
        return ParseError(message, self._peek().span)

    def at_eof(self) -> bool:
        return self._peek().kind == "eof"

    def expect_eof(self) -> None:
        if not self.at_eof():
            raise self._error(f"trailing input: {self._peek().text!r}")

    # ----------------------------------------------------------- types

    def type_(self) -> Type:
        t = self._peek()
        if t.kind == "ident" and t.text == "Set":
            self._next()
            self._expect("op", "(")
            inner = self.type_()
            self._expect("op", ")")
            return SetType(inner)
        if t.kind == "ident":
            self._next()
            return BaseType(t.text)
        raise self._error("expected a type")

    # ------------------------------------------------------ statements

    def statement(self) -> Statement:
        return self._imp()

    def _binder_start(self) -> bool:
        t = self._peek()
        return (t.kind == "kw" and t.text in ("forall", "exists")) or \
            (t.kind == "op" and t.text == "[")

    def _imp(self) -> Statement:
        left = self._disj()
        if self._match("op", "=>"):
            return Imp(left, self._imp())
        return left

    def _disj(self) -> Statement:
        left = self._conj()
        while self._match("op", "\\/"):
            left = Or(left, self._conj())
        return left

    def _conj(self) -> Statement:
        left = self._unit()
        while self._match("op", "/\\"):
            left = And(left, self._unit())
        return left

    def _unit(self) -> Statement:
        if self._binder_start():
            return self._binder()
        return self._atom()

    def _binder(self) -> Statement:
        t = self._peek()
        if t.kind == "op" and t.text == "[":
            return self._bracket()
        span = t.span
        kw = self._next().text
        unique = kw == "exists" and self._match("op", "!") is not None
        var = self._expect("ident").text
        if self._match("op", ":"):
            ty = self.type_()
            self._expect("op", ".")
            body = self.statement()
            if kw == "forall":
                return ForallT(var, ty, body, span=span)
            if unique:
                return ExistsUniqueT(var, ty, body, span=span)
            return ExistsT(var, ty, body, span=span)
        if self._match("kw", "in"):
            if unique:
                raise ParseError(
                    "unique existence ranges over a type, not a set", span
                )
            host = self.term()
            self._expect("op", ".")
            body = self.statement()
            if kw == "forall":
                return ForallS(var, host, body, span=span)
            return ExistsS(var, host, body, span=span)
        raise self._error("expected ':' or 'in' after the bound variable")

    def _bracket(self) -> Statement:
        span = self._expect("op", "[").span
        binder: str | None = None
        if self._peek().kind == "ident" and self._peek(1).kind == "op" \
                and self._peek(1).text == "|-":
            binder = self._next().text
            self._next()
        left = self.statement()
        self._expect("op", "]")
        if self._match("op", "/\\"):
            cls = DepAnd
        elif self._match("op", "=>"):
            cls = DepImp
        else:
            raise self._error("expected '/\\' or '=>' after the bracket")
        body = self.statement()
        if binder is None:
            binder = fresh_name("w", _names_in(left) | _names_in(body))
        return cls(binder, left, body, span=span)

    def _atom(self) -> Statement:
        t = self._peek()
        if t.kind == "kw" and t.text == "top":
            self._next()
            return Top(span=t.span)
        if t.kind == "op" and t.text == "(":
            self._next()
            s = self.statement()
            self._expect("op", ")")
            return s
        got = self._term_or_pred()
        if isinstance(got, (Top, And, Or, Imp, DepAnd, DepImp, ForallT,
                            ExistsT, ExistsUniqueT, ForallS, ExistsS, Eq,
                            Mem, Pred)):
            return got
        if self._match("op", "="):
            right = self.term()
            return Eq(got, right, span=t.span)
        if self._match("kw", "in"):
            container = self.term()
            return Mem(got, container, span=t.span)
        raise self._error("expected '=' or 'in' after a term")

    # ----------------------------------------------------------- terms

    def term(self) -> Term:
        got = self._term_or_pred(term_only=True)
        return got

    def _term_or_pred(self, term_only: bool = False):
        t = self._peek()
        if t.kind == "kw" and t.text == "desc":
            self._next()
            self._expect("op", "(")
            name = self._expect("ident").text
            self._expect("op", ")")
            return Desc(WarrantRef(name), span=t.span)
        if t.kind == "op" and t.text == "{":
            return self._comprehension()
        if t.kind == "ident":
            self._next()
            name = t.text
            raw_args = None
            if self._match("op", "("):
                raw_args = self._call_args()
            return self._resolve_head(name, raw_args, t.span, term_only)
        raise self._error("expected a term")

    def _comprehension(self) -> Term:
        span = self._expect("op", "{").span
        var = self._expect("ident").text
        if self._match("op", ":"):
            ty = self.type_()
            self._expect("op", "|")
            body = self.statement()
            self._expect("op", "}")
            return Compr(var, ty, body, span=span)
        if self._match("kw", "in"):
            host = self.term()
            self._expect("op", "|")
            body = self.statement()
            self._expect("op", "}")
            return ComprSet(var, host, body, span=span)
        raise self._error("expected ':' or 'in' in a comprehension")

    def _call_args(self) -> list:
        args: list = []
        if self._match("op", ")"):
            return args
        while True:
            if self._match("op", "@"):
                if self._match("op", "?"):
                    args.append(WarrantRef(None))
                else:
                    ref = self._expect("ident")
                    args.append(WarrantRef(ref.text, span=ref.span))
            else:
                args.append(self.term())
            if self._match("op", ")"):
                return args
            self._expect("op", ",")

    def _resolve_head(self, name: str, raw_args, span: Span, term_only: bool):
        fun = self.sig.fun(name)
        pred = self.sig.pred(name)
        abbrev = self.defs.get(name)
        if fun is not None:
            args = _align_args(fun, raw_args or [], span)
            return App(name, args, span=span)
        if abbrev is not None:
            if term_only:
                raise ParseError(f"{name} abbreviates a statement", span)
            supplied = raw_args or []
            if any(isinstance(a, WarrantRef) for a in supplied):
                raise ParseError(f"{name} takes no warrant arguments", span)
            if len(supplied) != len(abbrev.params):
                raise ParseError(
                    f"{name} expects {len(abbrev.params)} arguments, "
                    f"got {len(supplied)}",
                    span,
                )
            mapping = {p: a for (p, _), a in zip(abbrev.params, supplied)}
            return substitute_many(abbrev.body, mapping, {})
        if pred is not None:
            if term_only:
                raise ParseError(f"{name} is a predicate symbol", span)
            supplied = raw_args if raw_args is not None else []
            if any(isinstance(a, WarrantRef) for a in supplied):
                raise ParseError(f"{name} takes no warrant arguments", span)
            if len(supplied) != len(pred.arg_types):
                raise ParseError(
                    f"{name} expects {len(pred.arg_types)} arguments, "
                    f"got {len(supplied)}",
                    span,
                )
            return Pred(name, tuple(supplied), span=span)
        if raw_args is not None:
            raise ParseError(f"unknown symbol {name}", span)
        return Var(name, span=span)

    # -------------------------------------------------------- contexts

    def context_entry(self) -> ContextEntry:
        if self._match("kw", "assume"):
            name = self._expect("ident")
            self._expect("op", ":")
            stmt = self.statement()
            return Assume(name.text, stmt, span=name.span)
        name = self._expect("ident")
        if self._match("op", "|-"):
            stmt = self.statement()
            return Assume(name.text, stmt, span=name.span)
        if self._match("op", ":"):
            ty = self.type_()
            return TypeDecl(name.text, ty, span=name.span)
        if self._match("kw", "in"):
            host = self.term()
            return SetDecl(name.text, host, span=name.span)
        raise self._error("expected ':', 'in', or '|-' in a context entry")

    def context_brackets(self) -> tuple[ContextEntry, ...]:
        """[entry] [entry] ... — '[]' alone is the empty context."""
        entries: list[ContextEntry] = []
        first = True
        while self._at("op", "["):
            self._next()
            if first and self._match("op", "]"):
                return ()
            first = False
            entries.append(self.context_entry())
            self._expect("op", "]")
        return tuple(entries)

    # ------------------------------------------------------ signatures

    def signature_item(self) -> bool:
        """Parse one signature item if present; mutates sig/defs."""
        if self._match("kw", "type"):
            name = self._expect("ident").text
            self._expect("op", ";")
            self.sig = self.sig.with_base(name)
            return True
        if self._match("kw", "fun"):
            name = self._expect("ident").text
            params: list = []
            self._expect("op", "(")
            if not self._match("op", ")"):
                while True:
                    pname = self._expect("ident").text
                    self._expect("op", ":")
                    if self._match("kw", "warrant"):
                        self._expect("op", "(")
                        schema = self.statement()
                        self._expect("op", ")")
                        params.append(WarrantParam(pname, schema))
                    else:
                        params.append(TermParam(pname, self.type_()))
                    if self._match("op", ")"):
                        break
                    self._expect("op", ",")
            self._expect("op", ":")
            result = self.type_()
            self._expect("op", ";")
            self.sig = self.sig.with_fun(FunDecl(name, tuple(params), result))
            return True
        if self._match("kw", "pred"):
            name = self._expect("ident").text
            arg_types: list[Type] = []
            if self._match("op", "("):
                if not self._match("op", ")"):
                    while True:
                        arg_types.append(self.type_())
                        if self._match("op", ")"):
                            break
                        self._expect("op", ",")
            self._expect("op", ";")
            self.sig = self.sig.with_pred(PredDecl(name, tuple(arg_types)))
            return True
        if self._match("kw", "def"):
            name = self._expect("ident").text
            params: list[tuple[str, Type]] = []
            if self._match("op", "("):
                if not self._match("op", ")"):
                    while True:
                        pname = self._expect("ident").text
                        self._expect("op", ":")
                        params.append((pname, self.type_()))
                        if self._match("op", ")"):
                            break
                        self._expect("op", ",")
            self._expect("op", ":=")
            body = self.statement()
            self._expect("op", ";")
            self.defs[name] = Abbrev(name, tuple(params), body)
            return True
        return False


def _names_in(stmt: Statement) -> frozenset[str]:
    from .syntax.nodes import bound_names, free_names
    return free_names(stmt) | bound_names(stmt)


def _align_args(decl: FunDecl, raw_args: list, span: Span) -> tuple:
    """Match supplied arguments to declared parameters, inserting an
    unresolved slot for every omitted warrant argument."""
    out: list = []
    i = 0
    for p in decl.params:
        match p:
            case TermParam():
                if i >= len(raw_args) or isinstance(raw_args[i], WarrantRef):
                    raise ParseError(
                        f"{decl.name}: missing term argument {p.name}", span
                    )
                out.append(raw_args[i])
                i += 1
            case WarrantParam():
                if i < len(raw_args) and isinstance(raw_args[i], WarrantRef):
                    out.append(raw_args[i])
                    i += 1
                else:
                    out.append(WarrantRef(None))
    if i != len(raw_args):
        raise ParseError(f"{decl.name}: too many arguments", span)
    return tuple(out)


# ------------------------------------------------------------ helpers

def parse_statement(text: str, sig: Signature | None = None,
                    defs: dict[str, Abbrev] | None = None) -> Statement:
    p = Parser(text, sig, defs)
    s = p.statement()
    p.expect_eof()
    return s


def parse_term(text: str, sig: Signature | None = None,
               defs: dict[str, Abbrev] | None = None) -> Term:
    p = Parser(text, sig, defs)
    t = p.term()
    p.expect_eof()
    return t


def parse_type(text: str) -> Type:
    p = Parser(text)
    t = p.type_()
    p.expect_eof()
    return t


def parse_context_entry(text: str, sig: Signature | None = None,
                        defs: dict[str, Abbrev] | None = None) -> ContextEntry:
    p = Parser(text, sig, defs)
    e = p.context_entry()
    p.expect_eof()
    return e


def parse_judgment_parts(p: Parser):
    """stmt <= stmt, or set-term subset set-term. Returns
    (kind, lhs, rhs) with kind 'leq' or 'subset'."""
    start = p.pos
    try:
        lhs = p.statement()
        p._expect("op", "<=")
        rhs = p.statement()
        return "leq", lhs, rhs
    except ParseError as stmt_err:
        p.pos = start
        try:
            lhs_t = p.term()
            p._expect("kw", "subset")
            rhs_t = p.term()
            return "subset", lhs_t, rhs_t
        except ParseError:
            raise stmt_err from None
