"""Finite-set instances: partial functions, partial injections, relations.

Tensor is disjoint union of element sets.  The partial-function trace walks a
token around the feedback wires and declares divergence on the first revisit
of a feedback element (sound and complete because the table is
deterministic); the relational trace is a reachability closure over the
feedback elements, equivalent to the union over all finite path lengths.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .contract import Instance
from .errors import ValidationError
from .objects import AtomicWire, El, ObjectExpr, shift


@dataclass
class PfnTable:
    """A partial function between objects, stored as a finite table."""

    dom: ObjectExpr
    cod: ObjectExpr
    table: dict[El, El]

    def __post_init__(self):
        for k, v in self.table.items():
            if not self.dom.contains_element(k):
                raise ValidationError(f"table key {k} is not an element of {self.dom.render()}")
            if not self.cod.contains_element(v):
                raise ValidationError(f"table value {v} is not an element of {self.cod.render()}")

    def __call__(self, el: El) -> El | None:
        return self.table.get(el)


class PInjTable(PfnTable):
    """A partial function certified injective on its domain of definition."""

    def __post_init__(self):
        super().__post_init__()
        seen: dict[El, El] = {}
        for k, v in self.table.items():
            if v in seen:
                a, b = sorted((k, seen[v]))
                raise ValidationError(f"not injective: {a} and {b} both map to {v}")
            seen[v] = k


@dataclass
class RelTable:
    """A finite relation between the elements of two objects."""

    dom: ObjectExpr
    cod: ObjectExpr
    pairs: frozenset[tuple[El, El]]

    def __post_init__(self):
        for x, y in self.pairs:
            if not self.dom.contains_element(x) or not self.cod.contains_element(y):
                raise ValidationError(f"pair ({x}, {y}) falls outside {self.dom.render()} x {self.cod.render()}")


def pinj_validate(f: PfnTable) -> PInjTable:
    """Certify a partial-function table injective, naming a collision if not."""
    return PInjTable(f.dom, f.cod, dict(f.table))


def _pfn_identity(a: ObjectExpr) -> dict[El, El]:
    return {e: e for e in a.elements()}


def _pfn_compose(f: PfnTable, g: PfnTable) -> dict[El, El]:
    out = {}
    for x, y in f.table.items():
        z = g.table.get(y)
        if z is not None:
            out[x] = z
    return out


def _pfn_tensor(f: PfnTable, g: PfnTable) -> dict[El, El]:
    nd, nc = f.dom.n_wires, f.cod.n_wires
    out = dict(f.table)
    for x, y in g.table.items():
        out[shift(x, nd)] = shift(y, nc)
    return out


def _sym_table(a: ObjectExpr, b: ObjectExpr) -> dict[El, El]:
    na, nb = a.n_wires, b.n_wires
    out = {e: shift(e, nb) for e in a.elements()}
    for e in b.elements():
        out[shift(e, na)] = e
    return out


def token_trace(table: dict[El, El], a: ObjectExpr, b: ObjectExpr, u: ObjectExpr,
                log: list | None = None) -> dict[El, El]:
    """Trace of a deterministic table by token circulation.

    For each element of ``a`` the token runs through the table; outputs that
    land in the ``u`` block feed back in as inputs.  A second visit to the
    same feedback element means the token is trapped in a cycle, so the
    result is undefined there.  When ``log`` is given, the visited feedback
    elements of each input are appended to it as ``(x, path, exit_or_None)``.
    """
    na, nb = a.n_wires, b.n_wires
    out = {}
    for x in a.elements():
        cur = x
        visited: set[El] = set()
        path: list[El] = []
        result = None
        while True:
            y = table.get(cur)
            if y is None:
                break
            if y[0] < nb:
                result = y
                break
            u_el = (y[0] - nb, y[1])
            if u_el in visited:
                break
            visited.add(u_el)
            path.append(u_el)
            cur = (na + u_el[0], u_el[1])
        if log is not None:
            log.append((x, tuple(path), result))
        if result is not None:
            out[x] = result
    return out


def _rel_closure(pairs: frozenset, a: ObjectExpr, b: ObjectExpr, u: ObjectExpr) -> frozenset:
    na, nb = a.n_wires, b.n_wires
    direct = set()
    into_u: dict[El, set[El]] = {}
    u_step: dict[El, set[El]] = {}
    out_of_u: dict[El, set[El]] = {}
    for x, y in pairs:
        x_in_a = x[0] < na
        y_in_b = y[0] < nb
        xs = x if x_in_a else (x[0] - na, x[1])
        ys = y if y_in_b else (y[0] - nb, y[1])
        if x_in_a and y_in_b:
            direct.add((x, y))
        elif x_in_a:
            into_u.setdefault(x, set()).add(ys)
        elif y_in_b:
            out_of_u.setdefault(xs, set()).add(y)
        else:
            u_step.setdefault(xs, set()).add(ys)
    # reflexive-transitive closure of the feedback step, per start element
    reach: dict[El, set[El]] = {}
    for u0 in u.elements():
        seen = {u0}
        stack = [u0]
        while stack:
            v = stack.pop()
            for w in u_step.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        reach[u0] = seen
    for x, firsts in into_u.items():
        for u0 in firsts:
            for v in reach[u0]:
                for y in out_of_u.get(v, ()):
                    direct.add((x, y))
    return frozenset(direct)


_WIRE_WEIGHTS = ((0, 0.08), (1, 0.32), (2, 0.30), (3, 0.18), (4, 0.12))
_LABELS = ("a", "b", "c", "d", "e")


def sample_finite_object(rng: random.Random, max_wires: int = 4, max_elems: int = 5) -> ObjectExpr:
    r = rng.random()
    n = max_wires
    acc = 0.0
    for k, w in _WIRE_WEIGHTS[: max_wires + 1]:
        acc += w
        if r <= acc:
            n = k
            break
    wires = []
    for i in range(n):
        k = rng.randint(1, max_elems)
        wires.append(AtomicWireCache.get(f"w{i}", _LABELS[:k]))
    return ObjectExpr(tuple(wires))


class AtomicWireCache:
    """Interns sampled wires so repeated sampling reuses identical objects."""

    _cache: dict = {}

    @classmethod
    def get(cls, name, elements):
        key = (name, tuple(elements))
        if key not in cls._cache:
            cls._cache[key] = AtomicWire(name, tuple(elements))
        return cls._cache[key]


def _render_el(e: El) -> str:
    return f"{e[0]}:{e[1]}"


class PfnInstance(Instance):
    name = "pfn"
    table_cls = PfnTable

    def _make(self, dom, cod, table):
        return self.table_cls(dom, cod, table)

    def identity(self, a):
        return self._make(a, a, _pfn_identity(a))

    def compose(self, f, g):
        self.check_composable(f, g)
        return self._make(f.dom, g.cod, _pfn_compose(f, g))

    def tensor(self, f, g):
        return self._make(f.dom.tensor(g.dom), f.cod.tensor(g.cod), _pfn_tensor(f, g))

    def symmetry(self, a, b):
        return self._make(a.tensor(b), b.tensor(a), _sym_table(a, b))

    def trace(self, f, a, b, u):
        self.check_trace_shape(f, a, b, u)
        return self._make(a, b, token_trace(f.table, a, b, u))

    def equal(self, f, g):
        return f.dom == g.dom and f.cod == g.cod and f.table == g.table

    def sample(self, dom, cod, rng):
        cod_els = cod.elements()
        table = {}
        for x in dom.elements():
            if cod_els and rng.random() >= 0.25:
                table[x] = rng.choice(cod_els)
        return self._make(dom, cod, table)

    def sample_object(self, rng):
        return sample_finite_object(rng)

    def render(self, f):
        if not f.table:
            return "(empty)"
        lines = [f"{_render_el(k)} -> {_render_el(v)}" for k, v in sorted(f.table.items())]
        return "\n".join(lines)


class PInjInstance(PfnInstance):
    name = "pinj"
    table_cls = PInjTable

    def sample(self, dom, cod, rng):
        free = list(cod.elements())
        table = {}
        order = list(dom.elements())
        rng.shuffle(order)
        for x in order:
            if free and rng.random() >= 0.25:
                y = free.pop(rng.randrange(len(free)))
                table[x] = y
        return self._make(dom, cod, table)


class RelInstance(Instance):
    name = "rel"

    def identity(self, a):
        return RelTable(a, a, frozenset((e, e) for e in a.elements()))

    def compose(self, f, g):
        self.check_composable(f, g)
        by_left: dict[El, set[El]] = {}
        for y, z in g.pairs:
            by_left.setdefault(y, set()).add(z)
        pairs = frozenset((x, z) for x, y in f.pairs for z in by_left.get(y, ()))
        return RelTable(f.dom, g.cod, pairs)

    def tensor(self, f, g):
        nd, nc = f.dom.n_wires, f.cod.n_wires
        pairs = set(f.pairs)
        pairs.update((shift(x, nd), shift(y, nc)) for x, y in g.pairs)
        return RelTable(f.dom.tensor(g.dom), f.cod.tensor(g.cod), frozenset(pairs))

    def symmetry(self, a, b):
        return RelTable(a.tensor(b), b.tensor(a), frozenset(_sym_table(a, b).items()))

    def trace(self, f, a, b, u):
        self.check_trace_shape(f, a, b, u)
        return RelTable(a, b, _rel_closure(f.pairs, a, b, u))

    def equal(self, f, g):
        return f.dom == g.dom and f.cod == g.cod and f.pairs == g.pairs

    def sample(self, dom, cod, rng):
        pairs = set()
        for x in dom.elements():
            for y in cod.elements():
                if rng.random() < 0.3:
                    pairs.add((x, y))
        return RelTable(dom, cod, frozenset(pairs))

    def sample_object(self, rng):
        return sample_finite_object(rng)

    def render(self, f):
        if not f.pairs:
            return "(empty)"
        return "\n".join(f"{_render_el(x)} ~ {_render_el(y)}" for x, y in sorted(f.pairs))


def graph_of(f: PfnTable) -> RelTable:
    """The relation underlying a partial-function table."""
    return RelTable(f.dom, f.cod, frozenset(f.table.items()))
