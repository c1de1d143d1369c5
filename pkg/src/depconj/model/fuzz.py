"""Randomized cross-validation of the kernel against finite models.

Each trial builds a random derivation and checks its judgment on every
model supplied: a kernel bug or an unsound rule shows up as a concrete
counterexample. Trees are grown by wrap chains: start from a random
leaf rule, then repeatedly apply whichever composite rules fit the
judgment produced so far. Rule picking is biased toward rules not yet
covered in the run, so even short runs touch the whole table.

Judgments that mention a description term cannot be evaluated and are
counted as skipped rather than checked; everything else must hold on
every model. Reports are deterministic for a given seed (no wall-clock
data, stable ordering) and carry both a text summary and a JSON block.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from ..derived import (
    ADJUNCTIONS, BadArgs, DERIVED_BY_NAME, DerivedRuleName, derive,
)
from ..errors import UnsupportedJudgment
from ..kernel import Derivation, KernelError, RuleName, check
from ..syntax.context import Assume, Context, TypeDecl
from ..syntax.nodes import (
    And, App, BaseType, Compr, DepAnd, DepImp, Eq, ExistsT, ExistsUniqueT,
    ForallT, Imp, Mem, Or, Pred, SetType, Statement, Top, Var,
    free_term_vars, free_warrantors,
)
from ..syntax.signature import EMPTY_SIGNATURE, FunDecl, PredDecl
from .heyting import HeytingModel, catalogue, check_soundness

_NAT = BaseType("Nat")
_SET_NAT = SetType(_NAT)


def _fuzz_signature():
    return (EMPTY_SIGNATURE
            .with_base("Nat")
            .with_fun(FunDecl("zero", (), _NAT))
            .with_pred(PredDecl("P", ()))
            .with_pred(PredDecl("Q", ()))
            .with_pred(PredDecl("R", (_NAT,))))


@dataclass
class FuzzReport:
    seed: int
    count: int
    models: tuple[str, ...]
    checks: int = 0
    skipped: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    rule_coverage: dict = field(default_factory=dict)
    derived_coverage: dict = field(default_factory=dict)

    @property
    def covered(self) -> list[str]:
        return sorted(r for r, n in self.rule_coverage.items() if n > 0)

    @property
    def missing(self) -> list[str]:
        return sorted(r for r, n in self.rule_coverage.items() if n == 0)

    @property
    def coverage_fraction(self) -> float:
        total = len(self.rule_coverage)
        return len(self.covered) / total if total else 0.0

    def payload(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "models": list(self.models),
            "checks": self.checks,
            "skipped": dict(self.skipped),
            "failures": list(self.failures),
            "rule_coverage": dict(self.rule_coverage),
            "derived_coverage": dict(self.derived_coverage),
            "covered": self.covered,
            "missing": self.missing,
            "coverage_fraction": round(self.coverage_fraction, 4),
        }

    def text(self) -> str:
        lines = [
            f"soundness fuzz: seed={self.seed} trials={self.count} "
            f"models={','.join(self.models)}",
            f"checks={self.checks} "
            f"skipped={sum(self.skipped.values())} "
            f"failures={len(self.failures)}",
            f"rule coverage: {len(self.covered)}/{len(self.rule_coverage)}"
            f" ({self.coverage_fraction:.2f})",
        ]
        if self.missing:
            lines.append("missing: " + ", ".join(self.missing))
        for f in self.failures:
            lines.append(f"FAIL trial {f['trial']}: {f['detail']}")
        lines.append("json:")
        lines.append(json.dumps(self.payload(), indent=2, sort_keys=True))
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.text()


class _Gen:
    """Stateful random derivation builder sharing one rng and coverage."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.sig = _fuzz_signature()
        self.base = Context(self.sig)
        self.covered: set[RuleName] = set()
        self.k = 0

    def fresh(self, ctx: Context, stem: str) -> str:
        taken = {e.name for e in ctx.entries} | self.sig.symbol_names()
        while True:
            self.k += 1
            name = f"{stem}{self.k}"
            if name not in taken:
                return name

    # -------------------------------------------------- raw statements

    def _scope(self, ctx: Context) -> tuple[list[str], list[str]]:
        nats, sets = [], []
        for e in ctx.entries:
            if isinstance(e, TypeDecl):
                (nats if e.ty == _NAT else sets).append(e.name)
        return nats, sets

    def atom(self, ctx: Context) -> Statement:
        nats, sets = self._scope(ctx)
        pool = [
            Top(),
            Pred("P", ()),
            Pred("Q", ()),
            Pred("R", (App("zero", ()),)),
        ]
        for x in nats:
            pool.append(Pred("R", (Var(x),)))
            pool.append(Eq(Var(x), App("zero", ())))
        for a in sets:
            if nats:
                pool.append(Mem(Var(self.rng.choice(nats)), Var(a)))
            pool.append(Mem(App("zero", ()), Var(a)))
        return self.rng.choice(pool)

    def stmt(self, ctx: Context, depth: int) -> Statement:
        if depth <= 0:
            return self.atom(ctx)
        sub = lambda: self.stmt(ctx, depth - 1)
        roll = self.rng.random()
        if roll < 0.18:
            return And(sub(), sub())
        if roll < 0.32:
            return Or(sub(), sub())
        if roll < 0.46:
            return Imp(sub(), sub())
        if roll < 0.60:
            return DepAnd(self.fresh(ctx, "w"), sub(), sub())
        if roll < 0.72:
            return DepImp(self.fresh(ctx, "w"), sub(), sub())
        if roll < 0.82:
            v = self.fresh(ctx, "v")
            return ForallT(v, _NAT, self._bound_body(ctx, v, depth - 1))
        if roll < 0.92:
            v = self.fresh(ctx, "v")
            return ExistsT(v, _NAT, self._bound_body(ctx, v, depth - 1))
        if roll < 0.96:
            v = self.fresh(ctx, "v")
            return ExistsUniqueT(v, _NAT, Eq(Var(v), App("zero", ())))
        return self.atom(ctx)

    def _bound_body(self, ctx: Context, v: str, depth: int) -> Statement:
        body = self.stmt(ctx.snoc(TypeDecl(v, _NAT)), depth)
        return body

    def rand_set(self, ctx: Context) -> Compr:
        x = self.fresh(ctx, "v")
        body = self.stmt(ctx.snoc(TypeDecl(x, _NAT)), 1)
        return Compr(x, _NAT, body)

    def rand_ctx(self) -> Context:
        ctx = self.base
        for _ in range(self.rng.randrange(3)):
            roll = self.rng.random()
            if roll < 0.4:
                ctx = ctx.snoc(TypeDecl(self.fresh(ctx, "x"), _NAT))
            elif roll < 0.6:
                has_set = any(
                    isinstance(e, TypeDecl) and e.ty == _SET_NAT
                    for e in ctx.entries)
                if not has_set:
                    ctx = ctx.snoc(TypeDecl(self.fresh(ctx, "A"), _SET_NAT))
            else:
                ctx = ctx.snoc(
                    Assume(self.fresh(ctx, "h"), self.stmt(ctx, 1)))
        return ctx

    # ------------------------------------------------------ leaf rules

    def leaf(self, ctx: Context) -> Derivation:
        menu = [
            (RuleName.REFL,
             lambda: Derivation(RuleName.REFL, {
                 "stmt": self.stmt(ctx, self.rng.randrange(3)), "ctx": ctx})),
            (RuleName.TOP_INTRO,
             lambda: Derivation(RuleName.TOP_INTRO, {
                 "stmt": self.stmt(ctx, self.rng.randrange(3)), "ctx": ctx})),
            (RuleName.AND_ELIM_L,
             lambda: Derivation(RuleName.AND_ELIM_L, {
                 "left": self.stmt(ctx, 1), "right": self.stmt(ctx, 1),
                 "ctx": ctx})),
            (RuleName.AND_ELIM_R,
             lambda: Derivation(RuleName.AND_ELIM_R, {
                 "left": self.stmt(ctx, 1), "right": self.stmt(ctx, 1),
                 "ctx": ctx})),
            (RuleName.OR_INTRO_L,
             lambda: Derivation(RuleName.OR_INTRO_L, {
                 "left": self.stmt(ctx, 1), "right": self.stmt(ctx, 1),
                 "ctx": ctx})),
            (RuleName.OR_INTRO_R,
             lambda: Derivation(RuleName.OR_INTRO_R, {
                 "left": self.stmt(ctx, 1), "right": self.stmt(ctx, 1),
                 "ctx": ctx})),
        ]
        return self._pick(menu)()

    def _pick(self, menu):
        fresh = [fn for rule, fn in menu if rule not in self.covered]
        if fresh and self.rng.random() < 0.8:
            return self.rng.choice(fresh)
        return self.rng.choice([fn for _, fn in menu])

    # ----------------------------------------------------- wrap chains

    def wraps_for(self, d: Derivation) -> list[tuple[RuleName, object]]:
        j = check(d)
        ctx, lhs, rhs = j.ctx, j.lhs, j.rhs
        R = RuleName
        out: list[tuple[RuleName, object]] = []
        if j.kind == "subset":
            out.append((R.INCL_TRANS, lambda: Derivation(
                R.INCL_TRANS, premises=(d, Derivation(
                    R.INCL_REFL, {"set": rhs, "ctx": ctx})))))
            if isinstance(lhs, Compr):
                out.append((R.COMPR_TRANSPOSE, lambda: Derivation(
                    R.COMPR_TRANSPOSE, premises=(d,))))
            return out

        out.append((R.TRANS, lambda: Derivation(R.TRANS, premises=(
            d, Derivation(R.TOP_INTRO, {"stmt": rhs, "ctx": ctx})))))
        out.append((R.AND_INTRO, lambda: Derivation(
            R.AND_INTRO, premises=(d, d))))
        out.append((R.OR_ELIM, lambda: Derivation(
            R.OR_ELIM, premises=(d, d))))
        if isinstance(lhs, And):
            out.append((R.IMP_INTRO, lambda: Derivation(
                R.IMP_INTRO, premises=(d,))))
            out.append((R.SPECIAL_FWD, lambda: Derivation(
                R.SPECIAL_FWD, {"binder": self.fresh(ctx, "w")},
                (d,))))
        if isinstance(rhs, Imp):
            out.append((R.IMP_UNCURRY, lambda: Derivation(
                R.IMP_UNCURRY, premises=(d,))))
        if isinstance(lhs, DepAnd):
            out.append((R.DEP_AND_TRANSPOSE, lambda: Derivation(
                R.DEP_AND_TRANSPOSE, premises=(d,))))
        if isinstance(rhs, DepImp):
            out.append((R.DEP_IMP_UNTRANSPOSE, lambda: Derivation(
                R.DEP_IMP_UNTRANSPOSE, premises=(d,))))
        if isinstance(lhs, ExistsT):
            out.append((R.EXISTS_TRANSPOSE, lambda: Derivation(
                R.EXISTS_TRANSPOSE, premises=(d,))))
        if isinstance(rhs, ForallT):
            out.append((R.FORALL_TRANSPOSE, lambda: Derivation(
                R.FORALL_TRANSPOSE, premises=(d,))))

        last = ctx.entries[-1] if ctx.entries else None
        if isinstance(last, Assume):
            z = last.name
            if z not in free_warrantors(rhs):
                out.append((R.DEP_AND_UNTRANSPOSE, lambda: Derivation(
                    R.DEP_AND_UNTRANSPOSE, premises=(d,))))
            if z not in free_warrantors(lhs):
                out.append((R.DEP_IMP_TRANSPOSE, lambda: Derivation(
                    R.DEP_IMP_TRANSPOSE, premises=(d,))))
            if z not in free_warrantors(lhs) | free_warrantors(rhs):
                out.append((R.SPECIAL_BWD, lambda: Derivation(
                    R.SPECIAL_BWD, premises=(d,))))
        if isinstance(last, TypeDecl):
            x = last.name
            if x not in free_term_vars(lhs):
                out.append((R.FORALL_INTRO, lambda: Derivation(
                    R.FORALL_INTRO, premises=(d,))))
            if x not in free_term_vars(rhs):
                out.append((R.EXISTS_INTRO, lambda: Derivation(
                    R.EXISTS_INTRO, premises=(d,))))
            prefix = Context(ctx.sig, ctx.entries[:-1])
            if last.ty == _NAT:
                out.append((R.SUBST, lambda: Derivation(
                    R.SUBST, {"term": App("zero", ())}, (d,))))
            elif last.ty == _SET_NAT:
                out.append((R.SUBST, lambda: Derivation(
                    R.SUBST, {"term": self.rand_set(prefix)}, (d,))))
            if (isinstance(rhs, Mem) and rhs.elem == Var(x)
                    and x not in free_term_vars(rhs.container)):
                out.append((R.COMPR_UNTRANSPOSE, lambda: Derivation(
                    R.COMPR_UNTRANSPOSE, premises=(d,))))
        if len(ctx.entries) < 4:
            def weaken():
                if self.rng.random() < 0.5:
                    entry = TypeDecl(self.fresh(ctx, "x"), _NAT)
                else:
                    entry = Assume(self.fresh(ctx, "h"), self.stmt(ctx, 1))
                return Derivation(R.WEAKEN, {"entry": entry}, (d,))
            out.append((R.WEAKEN, weaken))
        return out

    def grow(self, d: Derivation, budget: int) -> Derivation:
        for _ in range(budget):
            if self.rng.random() > 0.75:
                break
            menu = self.wraps_for(d)
            if not menu:
                break
            d = self._pick(menu)()
            check(d)
        return d

    # --------------------------------------------------- trial flavors

    def trial_chain(self) -> Derivation:
        ctx = self.rand_ctx()
        return self.grow(self.leaf(ctx), budget=6)

    def trial_subset(self) -> Derivation:
        ctx = self.rand_ctx()
        _, sets = self._scope(ctx)
        if sets and self.rng.random() < 0.4:
            start: object = Var(self.rng.choice(sets))
        else:
            start = self.rand_set(ctx)
        d = Derivation(RuleName.INCL_REFL, {"set": start, "ctx": ctx})
        return self.grow(d, budget=5)

    def trial_description(self) -> Derivation:
        ctx = self.rand_ctx()
        w = self.fresh(ctx, "u")
        v = self.fresh(ctx, "v")
        body = self.rng.choice([
            Eq(Var(v), App("zero", ())),
            And(Pred("R", (Var(v),)), Eq(Var(v), App("zero", ()))),
        ])
        ctx = ctx.snoc(Assume(w, ExistsUniqueT(v, _NAT, body)))
        d = Derivation(RuleName.DESCRIPTION, {"binder": w, "ctx": ctx})
        return self.grow(d, budget=3)

    def trial_derived(self) -> tuple[Derivation, str]:
        ctx = self.rand_ctx()
        z = self.fresh(ctx, "w")
        x = self.fresh(ctx, "v")
        D = DerivedRuleName
        name = self.rng.choice([n.value for n in DerivedRuleName])
        match DERIVED_BY_NAME[name]:
            case D.UNIT_OF | D.COUNIT_OF as which:
                adj = self.rng.choice(ADJUNCTIONS)
                args = self._adjunction_args(ctx, adj, z, x)
                return derive(which, ctx, adjunction=adj, **args), name
            case D.ASSUMPTION_TRUTH:
                d = derive(D.ASSUMPTION_TRUTH, ctx, binder=z,
                           E=self.stmt(ctx, 1), H=self.stmt(ctx, 0))
            case D.DEP_MODUS_PONENS | D.DEP_MODUS_PONENS_SIMPLIFIED as which:
                d = derive(which, ctx, binder=z,
                           E=self.stmt(ctx, 1), G=self.stmt(ctx, 1))
            case (D.DEP_AND_EQUIV_FWD | D.DEP_AND_EQUIV_BWD
                    | D.DEP_IMP_EQUIV_FWD | D.DEP_IMP_EQUIV_BWD) as which:
                d = derive(which, ctx, binder=z,
                           E=self.stmt(ctx, 1), F=self.stmt(ctx, 1))
            case (D.ELAB_FORALL_ADJ | D.ELAB_EXISTS_ADJ
                    | D.ELAB_COMPR_ADJ) as which:
                d = derive(which, ctx, x=x, set=self.rand_set(ctx),
                           binder=z, E=self._elem_stmt(x))
        return d, name

    def _adjunction_args(self, ctx: Context, adj: str, z: str,
                         x: str) -> dict:
        s = lambda: self.stmt(ctx, 1)
        match adj:
            case "conj":
                return {"E": s(), "F": s(),
                        "side": self.rng.choice(("left", "right"))}
            case "disj":
                return {"E": s(), "F": s(),
                        "side": self.rng.choice(("left", "right"))}
            case "imp":
                return {"E": s(), "F": s(), "G": s()}
            case "forall" | "exists":
                # units and co-units here need E from the base context
                return {"x": x, "ty": _NAT, "E": self.stmt(ctx, 1)}
            case "dep_and" | "dep_imp":
                return {"binder": z, "E": s(), "F": s(), "G": s()}
        return {"x": x, "ty": _NAT, "E": self._elem_stmt(x),
                "set": self.rand_set(ctx)}

    def _elem_stmt(self, x: str) -> Statement:
        return self.rng.choice([
            Pred("R", (Var(x),)),
            Eq(Var(x), App("zero", ())),
            Pred("P", ()),
        ])


def _postorder_rules(d: Derivation, counts: dict) -> None:
    for p in d.premises:
        _postorder_rules(p, counts)
    counts[d.rule.value] += 1


def fuzz(seed: int = 0, count: int = 100,
         models: dict[str, HeytingModel] | list[HeytingModel] | None = None,
         ) -> FuzzReport:
    """Run `count` random derivation trials against finite models.

    models defaults to the built-in catalogue; a dict or a list of
    HeytingModel both work. The same seed always yields the same
    report, byte for byte.
    """
    if models is None:
        models = catalogue()
    model_list = list(models.values()) if isinstance(models, dict) \
        else list(models)
    rng = random.Random(seed)
    gen = _Gen(rng)
    report = FuzzReport(
        seed=seed, count=count,
        models=tuple(m.name for m in model_list),
        skipped={m.name: 0 for m in model_list},
        rule_coverage={r.value: 0 for r in RuleName},
        derived_coverage={n.value: 0 for n in DerivedRuleName},
    )

    for trial in range(count):
        roll = rng.random()
        try:
            if roll < 0.45:
                d = gen.trial_chain()
            elif roll < 0.65:
                d, name = gen.trial_derived()
                report.derived_coverage[name] += 1
            elif roll < 0.85:
                d = gen.trial_subset()
            else:
                d = gen.trial_description()
            check(d)
        except (KernelError, BadArgs) as exc:
            report.failures.append({
                "trial": trial, "model": None,
                "detail": f"generated tree rejected: {exc}",
            })
            continue
        _postorder_rules(d, report.rule_coverage)
        gen.covered.update(_rules_in(d))
        for m in model_list:
            try:
                cx = check_soundness(m, d)
            except UnsupportedJudgment:
                report.skipped[m.name] += 1
                continue
            report.checks += 1
            if cx is not None:
                report.failures.append({
                    "trial": trial, "model": m.name,
                    "detail": cx.describe(),
                })
    return report


def _rules_in(d: Derivation) -> set[RuleName]:
    out = {d.rule}
    for p in d.premises:
        out |= _rules_in(p)
    return out
