"""Finite Heyting algebras and the semantic oracle for checked judgments.

A model interprets the lattice connectives by brute-force meet, join,
and relative pseudo-complement tables computed from the order relation.
Statements are evaluated after erasure, so dependent conjunction and
implication mean their plain forms; description terms and warrant
references never reach the evaluator.

check_soundness quantifies over everything a judgment leaves open:
variables range over the base carriers, set variables over lattice-
valued membership tables, and uninterpreted predicate and function
symbols over all total tables. The whole interpretation space is laid
out as one numpy grid, one axis per unknown, and the inequality is
tested at every cell at once. Assumptions in the context contribute
their value as meets on the hypothesis side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import (
    ContainsDescription, Diagnostic, UnboundVar, UnsupportedJudgment,
)
from ..kernel import Derivation, Judgment, check
from ..printer import format_judgment
from ..syntax.context import Assume, Context, TypeDecl
from ..syntax.nodes import (
    And, App, BaseType, Compr, Eq, ExistsT, ExistsUniqueT, ForallT, Imp,
    Mem, Or, Pred, SetType, Statement, Term, Top, Type, Var,
)
from ..syntax.wellformed import erase, erase_term, synth_type
from .poset import FinitePoset


class HeytingModel:
    """A finite Heyting algebra plus carriers and fixed interpretations.

    base_carriers maps a base type name to its carrier size k; the
    carrier is range(k). interp maps a symbol to its fixed table: a
    single value or a flat tuple in row-major argument order (last
    argument varying fastest). Predicate tables hold lattice labels,
    function tables hold carrier integers, set values are tuples of
    labels indexed by carrier element.
    """

    def __init__(self, name: str, poset: FinitePoset,
                 base_carriers: dict[str, int] | None = None,
                 interp: dict | None = None):
        self.name = name
        self.poset = poset
        self.elements = tuple(poset.elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        self.n = n
        self.base_carriers = dict(base_carriers or {})
        self.interp = dict(interp or {})

        self.leq_mat = np.zeros((n, n), dtype=bool)
        for a in self.elements:
            for b in self.elements:
                self.leq_mat[self.index[a], self.index[b]] = poset.leq(a, b)

        top = poset.top()
        bottom = poset.bottom()
        if top is None or bottom is None:
            raise ValueError(f"{name}: no top or bottom element")
        self.top_i = self.index[top]
        self.bottom_i = self.index[bottom]

        self.meet_t = np.zeros((n, n), dtype=np.int64)
        self.join_t = np.zeros((n, n), dtype=np.int64)
        for a in self.elements:
            for b in self.elements:
                m = poset.meet(a, b)
                j = poset.join(a, b)
                if m is None or j is None:
                    raise ValueError(f"{name}: not a lattice at ({a!r}, {b!r})")
                self.meet_t[self.index[a], self.index[b]] = self.index[m]
                self.join_t[self.index[a], self.index[b]] = self.index[j]

        self.imp_t = np.zeros((n, n), dtype=np.int64)
        for ai in range(n):
            for bi in range(n):
                cand = [ci for ci in range(n)
                        if self.leq_mat[self.meet_t[ai, ci], bi]]
                best = None
                for ci in cand:
                    if all(self.leq_mat[di, ci] for di in cand):
                        best = ci
                if best is None:
                    raise ValueError(
                        f"{name}: no relative pseudo-complement at "
                        f"({self.elements[ai]!r}, {self.elements[bi]!r})")
                self.imp_t[ai, bi] = best

    # label-level helpers, mostly for tests
    def leq(self, a, b) -> bool:
        return bool(self.leq_mat[self.index[a], self.index[b]])

    def meet(self, a, b):
        return self.elements[self.meet_t[self.index[a], self.index[b]]]

    def join(self, a, b):
        return self.elements[self.join_t[self.index[a], self.index[b]]]

    def imp(self, a, b):
        return self.elements[self.imp_t[self.index[a], self.index[b]]]

    @property
    def top(self):
        return self.elements[self.top_i]

    @property
    def bottom(self):
        return self.elements[self.bottom_i]

    def carrier(self, ty_name: str) -> int:
        k = self.base_carriers.get(ty_name)
        if k is None:
            raise UnsupportedJudgment(
                f"model {self.name} has no carrier for type {ty_name}")
        return k

    def label_index(self, v) -> int:
        """Lattice index of a label, tolerating positional integers."""
        if v in self.index:
            return self.index[v]
        i = int(v)
        if not 0 <= i < self.n:
            raise UnsupportedJudgment(
                f"{v!r} is not an element of model {self.name}")
        return i

    def __repr__(self) -> str:
        return f"HeytingModel({self.name!r}, {len(self.elements)} elements)"


def catalogue() -> dict[str, HeytingModel]:
    """The four fixed algebras soundness is tested against."""
    chain2 = FinitePoset.from_pairs(("0", "1"), [("0", "1")])
    chain3 = FinitePoset.from_pairs(("0", "h", "1"), [("0", "h"), ("h", "1")])
    diamond = FinitePoset.from_pairs(
        ("0", "a", "b", "1"),
        [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    five = FinitePoset.from_pairs(
        ("0", "m", "c", "j", "1"),
        [("0", "m"), ("0", "c"), ("m", "j"), ("c", "j"), ("j", "1")])
    return {
        "chain2": HeytingModel("chain2", chain2, {"Nat": 3}),
        "chain3": HeytingModel("chain3", chain3, {"Nat": 3}),
        "diamond": HeytingModel("diamond", diamond, {"Nat": 2}),
        "five": HeytingModel("five", five, {"Nat": 2}),
    }


# ------------------------------------------------------------ the grid

class _Axis:
    __slots__ = ("name", "size", "kind", "meta")

    def __init__(self, name: str, size: int, kind: str, meta):
        self.name = name
        self.size = size
        self.kind = kind      # "var" | "setvar" | "pred" | "fun"
        self.meta = meta


class _Evaluator:
    """Evaluates erased statements as index arrays over the grid.

    Unknown symbols become enumeration axes; entries in `fixed` (model
    interpretation merged with a caller environment) stay raw until
    their use site, where the declaration fixes their shape.
    """

    def __init__(self, model: HeytingModel, ctx: Context,
                 fixed: dict | None = None, cell_limit: int = 2_000_000):
        self.m = model
        self.ctx = ctx
        self.sig = ctx.sig
        self.fixed = dict(model.interp)
        if fixed:
            self.fixed.update(fixed)
        self.cell_limit = cell_limit
        self.axes: list[_Axis] = []
        self.axis_of: dict[str, int] = {}
        for e in ctx.entries:
            if isinstance(e, TypeDecl):
                self._declare_var(e.name, e.ty)

    # --------------------------------------------------- axis plumbing

    def _add_axis(self, name: str, size: int, kind: str, meta) -> None:
        if name in self.axis_of or name in self.fixed:
            return
        if size > self.cell_limit:
            raise UnsupportedJudgment(
                f"interpretation table for {name} has {size} entries")
        self.axis_of[name] = len(self.axes)
        self.axes.append(_Axis(name, size, kind, meta))

    def _declare_var(self, name: str, ty: Type) -> None:
        match ty:
            case BaseType(tname):
                self._add_axis(name, self.m.carrier(tname), "var", tname)
            case SetType(BaseType(tname)):
                k = self.m.carrier(tname)
                self._add_axis(name, self.m.n ** k, "setvar", tname)
            case _:
                raise UnsupportedJudgment(f"no carrier for type {ty}")

    def _axis_array(self, name: str) -> np.ndarray:
        i = self.axis_of[name]
        size = self.axes[i].size
        shape = [1] * len(self.axes)
        shape[i] = size
        return np.arange(size, dtype=np.int64).reshape(shape)

    def grid_cells(self) -> int:
        return math.prod(a.size for a in self.axes)

    def guard(self) -> None:
        if self.grid_cells() > self.cell_limit:
            raise UnsupportedJudgment(
                f"interpretation space has {self.grid_cells()} cells")

    # ------------------------------------------------------- discovery

    def discover(self, node) -> None:
        """Register an axis for every unknown symbol in node."""
        match node:
            case Pred(sym, args):
                sizes = self._pred_sizes(sym)
                flat = math.prod(sizes)
                self._add_axis(sym, self.m.n ** flat, "pred", sym)
                for a in args:
                    self.discover(a)
            case App(sym, args):
                ins, out = self._fun_sizes(sym)
                flat = math.prod(ins)
                self._add_axis(sym, out ** flat, "fun", sym)
                for a in args:
                    self.discover(a)
            case And(l, r) | Or(l, r) | Imp(l, r) | Eq(l, r):
                self.discover(l)
                self.discover(r)
            case Mem(e, c):
                self.discover(e)
                if isinstance(c, Compr):
                    self.discover(c.body)
                else:
                    self.discover(c)
            case ForallT(_, ty, b) | ExistsT(_, ty, b) \
                    | ExistsUniqueT(_, ty, b):
                self._ty_size(ty)
                self.discover(b)
            case Top() | Var():
                pass
            case _:
                raise UnsupportedJudgment(
                    f"oracle cannot interpret {type(node).__name__}")

    def _ty_size(self, ty: Type) -> int:
        match ty:
            case BaseType(tname):
                return self.m.carrier(tname)
            case SetType(BaseType(tname)):
                return self.m.n ** self.m.carrier(tname)
        raise UnsupportedJudgment(f"no carrier for type {ty}")

    def _pred_sizes(self, sym: str) -> list[int]:
        decl = self.sig.pred(sym)
        if decl is None:
            return []
        return [self._ty_size(t) for t in decl.arg_types]

    def _fun_sizes(self, sym: str) -> tuple[list[int], int]:
        decl = self.sig.fun(sym)
        if decl is None:
            raise UnboundVar(f"function {sym} is not declared")
        ins = [self._ty_size(p.ty) for p in decl.term_params]
        return ins, self._ty_size(decl.result)

    # ------------------------------------------------------ evaluation

    def stmt(self, s: Statement, binds: dict) -> np.ndarray:
        m = self.m
        match s:
            case Top():
                return np.int64(m.top_i)
            case And(l, r):
                return m.meet_t[self.stmt(l, binds), self.stmt(r, binds)]
            case Or(l, r):
                return m.join_t[self.stmt(l, binds), self.stmt(r, binds)]
            case Imp(l, r):
                return m.imp_t[self.stmt(l, binds), self.stmt(r, binds)]
            case Eq(l, r):
                lv = self.term(l, binds)
                rv = self.term(r, binds)
                return np.where(lv == rv, np.int64(m.top_i),
                                np.int64(m.bottom_i))
            case Mem(e, c):
                return self.membership(c, self.term(e, binds), binds)
            case Pred(sym, args):
                return self._pred_value(sym, args, binds)
            case ForallT(x, ty, b):
                return self._quantify(x, ty, b, binds, m.meet_t, m.top_i)
            case ExistsT(x, ty, b):
                return self._quantify(x, ty, b, binds, m.join_t, m.bottom_i)
            case ExistsUniqueT(x, ty, b):
                return self._exists_unique(x, ty, b, binds)
        raise UnsupportedJudgment(
            f"oracle cannot evaluate {type(s).__name__}")

    def _quantify(self, x: str, ty: Type, body: Statement, binds: dict,
                  table: np.ndarray, unit: int) -> np.ndarray:
        acc = np.int64(unit)
        for v in range(self._ty_size(ty)):
            inner = dict(binds)
            inner[x] = np.int64(v)
            acc = table[acc, self.stmt(body, inner)]
        return acc

    def _exists_unique(self, x: str, ty: Type, body: Statement,
                       binds: dict) -> np.ndarray:
        # join over t of: body(t) meet (forall u. body(u) imp u = t)
        m = self.m
        size = self._ty_size(ty)
        vals = []
        for v in range(size):
            inner = dict(binds)
            inner[x] = np.int64(v)
            vals.append(self.stmt(body, inner))
        acc = np.int64(m.bottom_i)
        for v in range(size):
            unique = np.int64(m.top_i)
            for u in range(size):
                eq = np.int64(m.top_i if u == v else m.bottom_i)
                unique = m.meet_t[unique, m.imp_t[vals[u], eq]]
            acc = m.join_t[acc, m.meet_t[vals[v], unique]]
        return acc

    def term(self, t: Term, binds: dict) -> np.ndarray:
        match t:
            case Var(name):
                if name in binds:
                    return binds[name]
                if name in self.axis_of:
                    return self._axis_array(name)
                if name in self.fixed:
                    return self._fixed_value(name)
                raise UnboundVar(f"{name} has no value", subject=t)
            case App(sym, args):
                return self._fun_value(sym, args, binds)
        raise UnsupportedJudgment(
            f"oracle cannot evaluate term {type(t).__name__}")

    def _fixed_value(self, name: str) -> np.ndarray:
        raw = self.fixed[name]
        if isinstance(raw, (tuple, list)):
            # fuzzy set literal: tuple of labels by carrier element
            code = 0
            for e, v in enumerate(raw):
                code += self.m.label_index(v) * self.m.n ** e
            return np.int64(code)
        return np.int64(int(raw))

    def membership(self, container: Term, elem: np.ndarray,
                   binds: dict) -> np.ndarray:
        match container:
            case Var():
                code = self.term(container, binds)
                return (code // self.m.n ** elem) % self.m.n
            case Compr(x, _, body):
                inner = dict(binds)
                inner[x] = elem
                return self.stmt(body, inner)
        raise UnsupportedJudgment(
            f"oracle cannot read {type(container).__name__} as a set")

    @staticmethod
    def _flat_index(arg_vals: list, sizes: list[int]):
        flat = np.int64(0)
        for v, size in zip(arg_vals, sizes):
            flat = flat * size + v
        return flat

    def _table(self, sym: str, raw, flat_size: int, to_index) -> np.ndarray:
        vals = raw if isinstance(raw, (tuple, list)) else (raw,)
        if len(vals) != flat_size:
            raise UnsupportedJudgment(
                f"table for {sym} needs {flat_size} entries, got {len(vals)}")
        return np.asarray([to_index(v) for v in vals], dtype=np.int64)

    def _pred_value(self, sym: str, args, binds: dict) -> np.ndarray:
        sizes = self._pred_sizes(sym)
        arg_vals = [self.term(a, binds) for a in args]
        flat = self._flat_index(arg_vals, sizes)
        if sym in self.fixed:
            table = self._table(sym, self.fixed[sym], math.prod(sizes),
                                self.m.label_index)
            return table[flat]
        if sym in self.axis_of:
            code = self._axis_array(sym)
            return (code // self.m.n ** flat) % self.m.n
        raise UnboundVar(f"predicate {sym} has no interpretation")

    def _fun_value(self, sym: str, args, binds: dict) -> np.ndarray:
        ins, out = self._fun_sizes(sym)
        arg_vals = [self.term(a, binds) for a in args]
        flat = self._flat_index(arg_vals, ins)
        if sym in self.fixed:
            table = self._table(sym, self.fixed[sym], math.prod(ins), int)
            return table[flat]
        if sym in self.axis_of:
            code = self._axis_array(sym)
            return (code // np.int64(out) ** flat) % out
        raise UnboundVar(f"function {sym} has no interpretation")

    # ------------------------------------------------- decoding a cell

    def decode_cell(self, cell: tuple[int, ...]) -> dict[str, str]:
        out: dict[str, str] = {}
        for axis, raw in zip(self.axes, cell):
            out[axis.name] = self._decode_axis(axis, int(raw))
        return out

    def _decode_axis(self, axis: _Axis, code: int) -> str:
        n = self.m.n
        label = lambda i: str(self.m.elements[i])
        if axis.kind == "var":
            return str(code)
        if axis.kind == "setvar":
            k = self.m.carrier(axis.meta)
            digits = [(code // n ** e) % n for e in range(k)]
            inner = ", ".join(
                f"{e} -> {label(d)}" for e, d in enumerate(digits))
            return "{" + inner + "}"
        if axis.kind == "pred":
            sizes = self._pred_sizes(axis.meta)
            flat_size = math.prod(sizes)
            digits = [(code // n ** f) % n for f in range(flat_size)]
            if not sizes:
                return label(digits[0])
            rows = ", ".join(
                f"{self._args_of(f, sizes)} -> {label(d)}"
                for f, d in enumerate(digits))
            return "[" + rows + "]"
        ins, out_size = self._fun_sizes(axis.meta)
        flat_size = math.prod(ins)
        digits = [(code // out_size ** f) % out_size
                  for f in range(flat_size)]
        if not ins:
            return str(digits[0])
        rows = ", ".join(
            f"{self._args_of(f, sizes=ins)} -> {d}"
            for f, d in enumerate(digits))
        return "[" + rows + "]"

    @staticmethod
    def _args_of(flat: int, sizes: list[int]) -> str:
        digits = []
        for size in reversed(sizes):
            digits.append(flat % size)
            flat //= size
        return "(" + ", ".join(str(d) for d in reversed(digits)) + ")"


# --------------------------------------------------------- public eval

def eval_statement(model: HeytingModel, env: dict, s: Statement,
                   ctx: Context | None = None):
    """Value of a single statement under a total environment.

    env maps term variables to carrier integers, predicate symbols to a
    lattice label (0-ary) or a flat tuple of labels, function symbols
    to a carrier integer or flat tuple, and set variables to a tuple of
    labels indexed by carrier element. Symbols fixed by the model's own
    interp need no entry. Dependent connectives are read through
    erasure. Pass the context whose signature declares the symbols.
    """
    low = erase(s)
    ctx = ctx if ctx is not None else Context()
    ev = _Evaluator(model, Context(ctx.sig), fixed=env)
    ev.discover(low)
    if ev.axes:
        raise UnboundVar(f"environment misses {ev.axes[0].name}")
    out = np.asarray(ev.stmt(low, {}))
    return model.elements[int(out.reshape(-1)[0])]


evaluate = eval_statement


# ----------------------------------------------------- soundness check

@dataclass(frozen=True)
class Counterexample:
    model: str
    judgment: str
    assignment: dict[str, str]
    lhs_value: str
    rhs_value: str

    def describe(self) -> str:
        pins = ", ".join(f"{k} = {v}" for k, v in self.assignment.items())
        return (f"{self.model}: {self.judgment} fails at [{pins}] "
                f"with lhs {self.lhs_value}, rhs {self.rhs_value}")


def check_soundness(model: HeytingModel, subject: Derivation | Judgment,
                    cell_limit: int = 2_000_000) -> Counterexample | None:
    """Exhaustively test a judgment over every open interpretation.

    Accepts a checked derivation (its judgment is used) or a bare
    judgment. Returns None when the inequality holds at every grid
    cell, a Counterexample pinning the first failing cell otherwise.
    Raises UnsupportedJudgment when the judgment leans on descriptions
    or warrant arguments, or a carrier or table would be unreasonably
    large.
    """
    j = check(subject) if isinstance(subject, Derivation) else subject
    try:
        hyps = [erase(e.stmt) for e in j.ctx.entries
                if isinstance(e, Assume)]
        if j.kind == "subset":
            lhs = erase_term(j.lhs)
            rhs = erase_term(j.rhs)
        else:
            lhs = erase(j.lhs)
            rhs = erase(j.rhs)
    except (ContainsDescription, UnsupportedJudgment) as exc:
        raise UnsupportedJudgment(str(exc)) from exc

    ev = _Evaluator(model, j.ctx, cell_limit=cell_limit)
    for h in hyps:
        ev.discover(h)
    if j.kind == "subset":
        for side in (lhs, rhs):
            match side:
                case Compr(_, _, body):
                    ev.discover(body)
                case Var():
                    pass
                case _:
                    raise UnsupportedJudgment(
                        f"oracle cannot read "
                        f"{type(side).__name__} as a set")
    else:
        ev.discover(lhs)
        ev.discover(rhs)
    ev.guard()

    hyp_val = np.int64(model.top_i)
    for h in hyps:
        hyp_val = model.meet_t[hyp_val, ev.stmt(h, {})]

    shape = tuple(a.size for a in ev.axes)
    if j.kind == "subset":
        host = _subset_host(model, j)
        per_elem = []
        ok = np.ones((), dtype=bool)
        for e in range(host):
            elem = np.int64(e)
            lv = ev.membership(lhs, elem, {})
            rv = ev.membership(rhs, elem, {})
            ok_e = model.leq_mat[model.meet_t[hyp_val, lv], rv]
            per_elem.append((lv, rv, np.broadcast_to(ok_e, shape)))
            ok = ok & ok_e
        ok = np.broadcast_to(ok, shape)
        if bool(np.all(ok)):
            return None
        cell = tuple(int(i) for i in np.argwhere(~ok)[0])
        for e, (lv, rv, ok_e) in enumerate(per_elem):
            if not ok_e[cell]:
                assignment = ev.decode_cell(cell)
                assignment["element"] = str(e)
                return Counterexample(
                    model=model.name,
                    judgment=format_judgment(j.ctx, j.kind, j.lhs, j.rhs),
                    assignment=assignment,
                    lhs_value=str(model.elements[
                        int(np.broadcast_to(lv, shape)[cell])]),
                    rhs_value=str(model.elements[
                        int(np.broadcast_to(rv, shape)[cell])]),
                )
        raise AssertionError("violated cell lost between folds")

    lhs_val = ev.stmt(lhs, {})
    rhs_val = ev.stmt(rhs, {})
    ok = np.broadcast_to(
        model.leq_mat[model.meet_t[hyp_val, lhs_val], rhs_val], shape)
    if bool(np.all(ok)):
        return None
    cell = tuple(int(i) for i in np.argwhere(~ok)[0])
    return Counterexample(
        model=model.name,
        judgment=format_judgment(j.ctx, j.kind, j.lhs, j.rhs),
        assignment=ev.decode_cell(cell),
        lhs_value=str(model.elements[
            int(np.broadcast_to(lhs_val, shape)[cell])]),
        rhs_value=str(model.elements[
            int(np.broadcast_to(rhs_val, shape)[cell])]),
    )


def _subset_host(model: HeytingModel, j: Judgment) -> int:
    try:
        ty = synth_type(j.ctx, j.lhs)
    except Diagnostic as exc:
        raise UnsupportedJudgment(str(exc)) from exc
    if not isinstance(ty, SetType) or not isinstance(ty.elem, BaseType):
        raise UnsupportedJudgment(f"cannot host subset sides of type {ty}")
    return model.carrier(ty.elem.name)


# ---------------------------------------------------- model text files

def parse_model(text: str, default_name: str = "custom") -> HeytingModel:
    """Load a model from its text form.

    Lines: `model NAME`, `carrier a b c ...`, `leq a b`, `base T k`,
    `pred P = v ...` (lattice labels, row-major), `fun f = n ...`
    (carrier integers, row-major). Blank lines and # comments ignored.
    """
    name = default_name
    elements: list[str] = []
    pairs: list[tuple[str, str]] = []
    carriers: dict[str, int] = {}
    interp: dict[str, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            match tok[0]:
                case "model":
                    name = tok[1]
                case "carrier":
                    elements.extend(tok[1:])
                case "leq":
                    pairs.append((tok[1], tok[2]))
                case "base":
                    carriers[tok[1]] = int(tok[2])
                case "pred":
                    if tok[2] != "=":
                        raise ValueError("expected 'pred NAME = values'")
                    interp[tok[1]] = tuple(tok[3:])
                case "fun":
                    if tok[2] != "=":
                        raise ValueError("expected 'fun NAME = values'")
                    interp[tok[1]] = tuple(int(v) for v in tok[3:])
                case _:
                    raise ValueError(f"unknown directive {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"model file line {lineno}: {exc}") from exc
    if not elements:
        raise ValueError("model file declares no carrier")
    poset = FinitePoset.from_pairs(tuple(elements), pairs)
    return HeytingModel(name, poset, carriers, interp)


def load_model(path: str) -> HeytingModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())
