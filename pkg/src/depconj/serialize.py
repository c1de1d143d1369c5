"""Derivation serialization: an indented text tree and a JSON document.

Text form: signature items first, then the marker line `derivation`,
then one rule application per line as `RuleName(key = value, ...)` with
premises indented two spaces below their parent. Values are printed with
the explicit canonical printer, so reloading is exact.

JSON form: {"signature": [...], "derivation": {"rule", "params",
"premises"}} with parameter values as canonical surface strings.

Both directions are lossless up to structural equality of parameters.
"""
from __future__ import annotations

import json

from .kernel import Derivation, RULE_BY_NAME, RuleName
from .parser import ParseError, Parser, Token
from .printer import (
    format_context, format_entry, format_signature, format_statement,
    format_term, format_type,
)
from .syntax.context import Assume, Context, SetDecl, TypeDecl
from .syntax.nodes import Statement, Term, Type, WarrantRef
from .syntax.signature import Signature

_IDENT_KEYS = frozenset(("binder", "x", "adjunction", "side", "name"))
_TERM_KEYS = frozenset(("term", "set"))
_PARAM_ORDER = ("stmt", "left", "right", "set", "term", "entry",
                "binder", "ctx")


def format_param_value(v) -> str:
    if isinstance(v, Context):
        return format_context(v, explicit=True)
    if isinstance(v, (TypeDecl, SetDecl, Assume)):
        return format_entry(v, explicit=True)
    if isinstance(v, str):
        return v
    if isinstance(v, Statement):
        return format_statement(v, explicit=True)
    if isinstance(v, (Term, WarrantRef)):
        return format_term(v, explicit=True)
    if isinstance(v, Type):
        return format_type(v)
    raise TypeError(f"cannot serialize parameter {v!r}")


def parse_param_value(p: Parser, key: str):
    """Parse one parameter value; the key decides the syntactic class."""
    if key == "ctx":
        entries = p.context_brackets()
        return Context(p.sig, entries)
    if key == "entry":
        return p.context_entry()
    if key == "ty":
        return p.type_()
    if key in _IDENT_KEYS:
        # adjunction names such as forall and exists scan as keywords
        t = p._peek()
        if t.kind in ("ident", "kw"):
            p._next()
            return t.text
        raise p._error("expected a name")
    if key in _TERM_KEYS:
        return p.term()
    return p.statement()


def _param_keys_sorted(params: dict) -> list[str]:
    def pos(k: str) -> tuple[int, str]:
        try:
            return (_PARAM_ORDER.index(k), k)
        except ValueError:
            return (len(_PARAM_ORDER), k)
    return sorted(params, key=pos)


def _node_line(d: Derivation) -> str:
    if not d.params:
        return d.rule.value
    inner = ", ".join(
        f"{k} = {format_param_value(d.params[k])}"
        for k in _param_keys_sorted(d.params)
    )
    return f"{d.rule.value}({inner})"


# ------------------------------------------------------------- text

def format_derivation_lines(d: Derivation, depth: int = 0) -> list[str]:
    lines = ["  " * depth + _node_line(d)]
    for q in d.premises:
        lines.extend(format_derivation_lines(q, depth + 1))
    return lines


def dump_derivation_text(d: Derivation, sig: Signature) -> str:
    lines = format_signature(sig)
    lines.append("derivation")
    lines.extend(format_derivation_lines(d, 1))
    return "\n".join(lines) + "\n"


def _parse_node_header(p: Parser) -> tuple[RuleName, dict, Token]:
    tok = p._expect("ident")
    rule = RULE_BY_NAME.get(tok.text)
    if rule is None:
        raise ParseError(f"unknown rule {tok.text}", tok.span)
    params: dict = {}
    if p._match("op", "("):
        if not p._match("op", ")"):
            while True:
                key = p._expect("ident").text
                p._expect("op", "=")
                params[key] = parse_param_value(p, key)
                if p._match("op", ")"):
                    break
                p._expect("op", ",")
    return rule, params, tok


def parse_derivation_tree(p: Parser) -> Derivation:
    """Parse an indented tree from the parser's token stream.

    Children sit on later lines at strictly greater column than their
    parent; equal column means sibling. Stops at dedent past the root,
    'end', or end of input.
    """
    first = p._peek()
    if first.kind != "ident":
        raise ParseError("expected a rule name", first.span)
    root_col = first.span.col

    def parse_at(col: int) -> Derivation:
        rule, params, tok = _parse_node_header(p)
        premises = []
        while True:
            nxt = p._peek()
            if nxt.kind == "eof" or (nxt.kind == "kw" and nxt.text == "end"):
                break
            if nxt.kind != "ident" or nxt.span.col <= col:
                break
            premises.append(parse_at(nxt.span.col))
        return Derivation(rule, params, tuple(premises))

    d = parse_at(root_col)
    nxt = p._peek()
    if nxt.kind == "ident" and nxt.span.col == root_col:
        raise ParseError("multiple roots in derivation tree", nxt.span)
    return d


def load_derivation_text(text: str) -> tuple[Derivation, Signature]:
    p = Parser(text)
    while p.signature_item():
        pass
    marker = p._expect("ident")
    if marker.text != "derivation":
        raise ParseError("expected 'derivation' marker", marker.span)
    d = parse_derivation_tree(p)
    p.expect_eof()
    return d, p.sig


# ------------------------------------------------------------- JSON

def _to_obj(d: Derivation) -> dict:
    return {
        "rule": d.rule.value,
        "params": {
            k: format_param_value(d.params[k])
            for k in _param_keys_sorted(d.params)
        },
        "premises": [_to_obj(q) for q in d.premises],
    }


def dump_derivation_json(d: Derivation, sig: Signature) -> str:
    doc = {"signature": format_signature(sig), "derivation": _to_obj(d)}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _value_from_string(text: str, key: str, sig: Signature):
    p = Parser(text, sig)
    v = parse_param_value(p, key)
    p.expect_eof()
    return v


def _from_obj(obj: dict, sig: Signature) -> Derivation:
    rule = RULE_BY_NAME.get(obj.get("rule"))
    if rule is None:
        raise ValueError(f"unknown rule {obj.get('rule')!r}")
    params = {
        k: _value_from_string(v, k, sig)
        for k, v in obj.get("params", {}).items()
    }
    premises = tuple(_from_obj(q, sig) for q in obj.get("premises", []))
    return Derivation(rule, params, premises)


def load_derivation_json(text: str) -> tuple[Derivation, Signature]:
    doc = json.loads(text)
    p = Parser("\n".join(doc.get("signature", [])))
    while p.signature_item():
        pass
    p.expect_eof()
    return _from_obj(doc["derivation"], p.sig), p.sig


# --------------------------------------------------------- comparison

def derivations_equal(a: Derivation, b: Derivation) -> bool:
    """Structural identity of trees: rules, parameters, premises."""
    from .syntax.equality import contexts_struct_eq, struct_eq
    if a.rule is not b.rule or set(a.params) != set(b.params):
        return False
    if len(a.premises) != len(b.premises):
        return False
    for k, va in a.params.items():
        vb = b.params[k]
        if isinstance(va, Context):
            if not (isinstance(vb, Context) and contexts_struct_eq(va, vb)):
                return False
        elif isinstance(va, str):
            if va != vb:
                return False
        elif isinstance(va, (TypeDecl, SetDecl, Assume)):
            if type(va) is not type(vb) or va.name != vb.name:
                return False
            pa = va.ty if isinstance(va, TypeDecl) else (
                va.host if isinstance(va, SetDecl) else va.stmt)
            pb = vb.ty if isinstance(vb, TypeDecl) else (
                vb.host if isinstance(vb, SetDecl) else vb.stmt)
            if isinstance(va, TypeDecl):
                if pa != pb:
                    return False
            elif not struct_eq(pa, pb):
                return False
        elif isinstance(va, Type):
            if va != vb:
                return False
        elif not struct_eq(va, vb):
            return False
    return all(
        derivations_equal(pa, pb) for pa, pb in zip(a.premises, b.premises)
    )
