"""Finite posets, monotone maps, and brute-force adjoint search.

Orders are stored as explicit relation sets, closed reflexively and
transitively at construction; antisymmetry is validated so elements act
as canonical representatives. Adjoints are found pointwise: the right
adjoint of f at y is the maximum of {x | f(x) <= y}, dually on the
left, and the adjunction law is re-verified exhaustively before a
candidate is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from random import Random


class NoAdjoint(Exception):
    """The requested adjoint does not exist; the message says where."""


def _closure(elements, pairs):
    rel = {(a, a) for a in elements}
    rel.update(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in tuple(rel):
            for c, d in tuple(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return frozenset(rel)


@dataclass(frozen=True)
class FinitePoset:
    elements: tuple
    relation: frozenset = field(repr=False)

    @staticmethod
    def from_pairs(elements, pairs) -> "FinitePoset":
        elements = tuple(elements)
        known = set(elements)
        for a, b in pairs:
            if a not in known or b not in known:
                raise ValueError(f"pair ({a!r}, {b!r}) uses unknown elements")
        rel = _closure(elements, pairs)
        for a, b in rel:
            if a != b and (b, a) in rel:
                raise ValueError(f"{a!r} and {b!r} order each other: not an order")
        return FinitePoset(elements, rel)

    @staticmethod
    def chain(n: int) -> "FinitePoset":
        elems = tuple(range(n))
        return FinitePoset.from_pairs(elems, [(i, i + 1) for i in range(n - 1)])

    def leq(self, a, b) -> bool:
        return (a, b) in self.relation

    def maximum_of(self, subset):
        """The member of subset above all others, or None."""
        for a in subset:
            if all(self.leq(b, a) for b in subset):
                return a
        return None

    def minimum_of(self, subset):
        for a in subset:
            if all(self.leq(a, b) for b in subset):
                return a
        return None

    def meet(self, a, b):
        lower = [c for c in self.elements if self.leq(c, a) and self.leq(c, b)]
        return self.maximum_of(lower)

    def join(self, a, b):
        upper = [c for c in self.elements if self.leq(a, c) and self.leq(b, c)]
        return self.minimum_of(upper)

    def top(self):
        return self.maximum_of(self.elements)

    def bottom(self):
        return self.minimum_of(self.elements)

    def product(self, other: "FinitePoset") -> "FinitePoset":
        elems = tuple((a, b) for a in self.elements for b in other.elements)
        rel = frozenset(
            ((a1, b1), (a2, b2))
            for (a1, b1) in elems
            for (a2, b2) in elems
            if self.leq(a1, a2) and other.leq(b1, b2)
        )
        return FinitePoset(elems, rel)


@dataclass(frozen=True)
class MonotoneMap:
    dom: FinitePoset
    cod: FinitePoset
    mapping: dict = field(hash=False)

    def __post_init__(self):
        for x in self.dom.elements:
            if x not in self.mapping:
                raise ValueError(f"map undefined at {x!r}")
            if self.mapping[x] not in self.cod.elements:
                raise ValueError(f"image of {x!r} not in codomain")
        for x in self.dom.elements:
            for y in self.dom.elements:
                if self.dom.leq(x, y) and not self.cod.leq(
                        self.mapping[x], self.mapping[y]):
                    raise ValueError(
                        f"not monotone: {x!r} <= {y!r} but images disagree")

    def __call__(self, x):
        return self.mapping[x]

    def compose(self, inner: "MonotoneMap") -> "MonotoneMap":
        """self after inner."""
        if inner.cod is not self.dom and inner.cod != self.dom:
            raise ValueError("composition domains do not meet")
        return MonotoneMap(inner.dom, self.cod,
                           {x: self(inner(x)) for x in inner.dom.elements})


def identity_map(p: FinitePoset) -> MonotoneMap:
    return MonotoneMap(p, p, {x: x for x in p.elements})


def diagonal_map(p: FinitePoset) -> MonotoneMap:
    return MonotoneMap(p, p.product(p), {x: (x, x) for x in p.elements})


def compute_adjoint(side: str, f: MonotoneMap) -> MonotoneMap:
    """The adjoint of f on the given side, or NoAdjoint.

    side="right": g with f -| g, g(y) = max{x | f(x) <= y}.
    side="left":  g with g -| f, g(y) = min{x | y <= f(x)}.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be left or right, not {side!r}")
    dom, cod = f.dom, f.cod
    mapping = {}
    for y in cod.elements:
        if side == "right":
            cand = [x for x in dom.elements if cod.leq(f(x), y)]
            best = dom.maximum_of(cand)
        else:
            cand = [x for x in dom.elements if cod.leq(y, f(x))]
            best = dom.minimum_of(cand)
        if best is None:
            raise NoAdjoint(
                f"{side} adjoint undefined at {y!r}: "
                f"{'maximum' if side == 'right' else 'minimum'} does not exist")
        mapping[y] = best
    try:
        g = MonotoneMap(cod, dom, mapping)
    except ValueError as exc:
        raise NoAdjoint(f"pointwise candidate is not monotone: {exc}") from exc
    for x in dom.elements:
        for y in cod.elements:
            if side == "right":
                law = cod.leq(f(x), y) == dom.leq(x, g(y))
            else:
                law = dom.leq(g(y), x) == cod.leq(y, f(x))
            if not law:
                raise NoAdjoint(f"adjunction law fails at ({x!r}, {y!r})")
    return g


# ------------------------------------------------------ random helpers

def random_poset(rng: Random, size: int) -> FinitePoset:
    elems = tuple(range(size))
    pairs = [
        (i, j)
        for i in range(size)
        for j in range(i + 1, size)
        if rng.random() < 0.4
    ]
    return FinitePoset.from_pairs(elems, pairs)


def random_monotone_map(rng: Random, dom: FinitePoset,
                        cod: FinitePoset) -> MonotoneMap:
    """Uniform-ish monotone map, built along a linear extension."""
    order = sorted(
        dom.elements,
        key=lambda x: (sum(dom.leq(y, x) for y in dom.elements), str(x)),
    )
    for _ in range(64):
        mapping: dict = {}
        ok = True
        for x in order:
            cand = [
                y for y in cod.elements
                if all(cod.leq(mapping[z], y)
                       for z in mapping if dom.leq(z, x))
            ]
            if not cand:
                ok = False
                break
            mapping[x] = rng.choice(cand)
        if ok:
            return MonotoneMap(dom, cod, mapping)
    const = cod.elements[0]
    return MonotoneMap(dom, cod, {x: const for x in dom.elements})
