"""Finite pointed posets and monotone maps: the wave-style instance.

Here the tensor is the cartesian product of carriers rather than disjoint
union: an element of an object is a tuple with one label per wire, ordered
componentwise, and the unit object has exactly one element, the empty tuple.
Feedback is computed by Kleene iteration from the bottom tuple, which is
exact and terminating on finite posets.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .contract import Instance
from .errors import SamplingError, ValidationError
from .objects import AtomicWire, ObjectExpr

MAX_SAMPLED_CARRIER = 400


def carrier(obj: ObjectExpr) -> tuple:
    """All tuples of the product carrier, in lexicographic payload order."""
    for w in obj.wires:
        if not w.ordered:
            raise ValidationError(f"wire {w.name!r} carries no order; this instance needs posets")
    return tuple(itertools.product(*(w.elements for w in obj.wires)))


def bottom_tuple(obj: ObjectExpr) -> tuple:
    return tuple(w.bottom for w in obj.wires)


def tuple_le(obj: ObjectExpr, s: tuple, t: tuple) -> bool:
    return all(w.le(a, b) for w, a, b in zip(obj.wires, s, t))


@dataclass
class MonotoneMap:
    """A total monotone function between product carriers."""

    dom: ObjectExpr
    cod: ObjectExpr
    table: dict[tuple, tuple]

    def __post_init__(self):
        dom_ts = carrier(self.dom)
        cod_set = set(carrier(self.cod))
        if set(self.table) != set(dom_ts):
            raise ValidationError("table is not total on the domain carrier")
        for v in self.table.values():
            if v not in cod_set:
                raise ValidationError(f"table value {v} outside the codomain carrier")
        check_monotone(self)

    def __call__(self, t: tuple) -> tuple:
        return self.table[t]


def check_monotone(f: MonotoneMap):
    ts = carrier(f.dom)
    for s in ts:
        for t in ts:
            if tuple_le(f.dom, s, t) and not tuple_le(f.cod, f.table[s], f.table[t]):
                raise ValidationError(f"not monotone: {s} <= {t} but images are not ordered")


def _raw(dom, cod, table):
    """Construct without re-validation (operations preserve the invariants)."""
    m = object.__new__(MonotoneMap)
    m.dom, m.cod, m.table = dom, cod, table
    return m


def lfp(f: MonotoneMap) -> tuple:
    """Least fixpoint of an endo map by Kleene iteration from bottom."""
    if f.dom != f.cod:
        raise ValidationError("least fixpoint needs an endo map")
    x = bottom_tuple(f.dom)
    for _ in range(len(carrier(f.dom)) + 1):
        y = f.table[x]
        if y == x:
            return x
        x = y
    raise ValidationError("iteration failed to stabilize; map is not monotone")


def trace_fixpoint(f: MonotoneMap, d_obj: ObjectExpr, e_obj: ObjectExpr,
                   a_obj: ObjectExpr) -> MonotoneMap:
    """Feedback through the last wires by solving the inner fixpoint."""
    if f.dom != d_obj.tensor(a_obj) or f.cod != e_obj.tensor(a_obj):
        from .errors import ShapeError

        raise ShapeError("fixpoint trace shape mismatch")
    ne = e_obj.n_wires
    bound = len(carrier(a_obj)) + 1
    table = {}
    for d in carrier(d_obj):
        a = bottom_tuple(a_obj)
        for _ in range(bound):
            a2 = f.table[d + a][ne:]
            if a2 == a:
                break
            a = a2
        else:
            raise ValidationError("inner fixpoint failed to stabilize")
        table[d] = f.table[d + a][:ne]
    return _raw(d_obj, e_obj, table)


def sample_poset_wire(name: str, n: int, rng: random.Random) -> AtomicWire:
    labels = tuple(f"p{i}" for i in range(n))
    pairs = {(a, a) for a in labels}
    pairs.update((labels[0], a) for a in labels)
    for i in range(1, n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                pairs.add((labels[i], labels[j]))
    # transitive closure (relations only point from lower to higher index)
    changed = True
    while changed:
        changed = False
        for a, b in list(pairs):
            for c, d in list(pairs):
                if b == c and (a, d) not in pairs:
                    pairs.add((a, d))
                    changed = True
    return AtomicWire(name, labels, frozenset(pairs), labels[0])


def sample_monotone(dom: ObjectExpr, cod: ObjectExpr, rng: random.Random) -> MonotoneMap:
    """Random monotone map: assign images along a linear extension, choosing
    uniformly among upper bounds of the already-assigned predecessors."""
    dom_ts = list(carrier(dom))
    cod_ts = list(carrier(cod))
    if len(dom_ts) > MAX_SAMPLED_CARRIER:
        raise SamplingError(f"domain carrier too large to sample ({len(dom_ts)} tuples)")

    heights = []
    for w in dom.wires:
        h = {}
        for a in w.elements:
            h[a] = sum(1 for b in w.elements if w.le(b, a) and b != a)
        heights.append(h)
    dom_ts.sort(key=lambda t: sum(h[a] for h, a in zip(heights, t)))

    for _ in range(60):
        table = {}
        ok = True
        for t in dom_ts:
            lower = [table[s] for s in table if tuple_le(dom, s, t)]
            cands = [c for c in cod_ts if all(tuple_le(cod, l, c) for l in lower)]
            if not cands:
                ok = False
                break
            table[t] = rng.choice(cands)
        if ok:
            return _raw(dom, cod, table)
    raise SamplingError("could not complete a monotone assignment")


class CpoInstance(Instance):
    name = "cpo"

    def identity(self, a):
        return _raw(a, a, {t: t for t in carrier(a)})

    def compose(self, f, g):
        self.check_composable(f, g)
        return _raw(f.dom, g.cod, {t: g.table[f.table[t]] for t in f.table})

    def tensor(self, f, g):
        nd = f.dom.n_wires
        dom = f.dom.tensor(g.dom)
        table = {t: f.table[t[:nd]] + g.table[t[nd:]] for t in carrier(dom)}
        return _raw(dom, f.cod.tensor(g.cod), table)

    def symmetry(self, a, b):
        na = a.n_wires
        dom = a.tensor(b)
        return _raw(dom, b.tensor(a), {t: t[na:] + t[:na] for t in carrier(dom)})

    def trace(self, f, a, b, u):
        self.check_trace_shape(f, a, b, u)
        return trace_fixpoint(f, a, b, u)

    def equal(self, f, g):
        return f.dom == g.dom and f.cod == g.cod and f.table == g.table

    def sample(self, dom, cod, rng):
        return sample_monotone(dom, cod, rng)

    def sample_object(self, rng):
        r = rng.random()
        n_wires = 0 if r < 0.12 else (1 if r < 0.72 else 2)
        wires = tuple(sample_poset_wire(f"p{i}", rng.randint(1, 3), rng)
                      for i in range(n_wires))
        return ObjectExpr(wires)

    def render(self, f):
        if not f.table:
            return "(empty)"
        lines = []
        for k in sorted(f.table):
            v = f.table[k]
            lines.append(f"({' '.join(k)}) -> ({' '.join(v)})")
        return "\n".join(lines)
