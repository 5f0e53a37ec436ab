"""Finite-state transducers with series, parallel and feedback composition.

A transducer is a Mealy-style machine with a partial transition table; it is
the finite presentation of a stateful input/output behaviour.  Two machines
are considered the same morphism when they are bisimilar, i.e. when their
step-by-step unfoldings agree; ``bisim_equiv`` decides this by partition
refinement and produces a shortest distinguishing input word otherwise.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .contract import Instance
from .errors import ShapeError, ValidationError
from .finfun import PfnTable, sample_finite_object
from .objects import El, ObjectExpr, shift

State = object
Delta = dict  # (state, input element) -> (output element, state)


@dataclass
class Transducer:
    dom: ObjectExpr
    cod: ObjectExpr
    states: tuple
    initial: State
    delta: Delta

    def __post_init__(self):
        sts = set(self.states)
        if self.initial not in sts:
            raise ValidationError(f"initial state {self.initial!r} not in state set")
        for (q, x), (y, q2) in self.delta.items():
            if q not in sts or q2 not in sts:
                raise ValidationError(f"transition ({q!r}, {x}) mentions unknown state")
            if not self.dom.contains_element(x):
                raise ValidationError(f"transition input {x} outside {self.dom.render()}")
            if not self.cod.contains_element(y):
                raise ValidationError(f"transition output {y} outside {self.cod.render()}")

    @property
    def n_states(self) -> int:
        return len(self.states)


@dataclass
class Orbit:
    """The run of a machine on an input word; ``halted`` marks an early stop
    on an undefined transition."""

    states: tuple
    steps: tuple  # (input, output) pairs actually taken
    halted: bool

    @property
    def outputs(self):
        return tuple(y for _, y in self.steps)


def orbit(t: Transducer, inputs) -> Orbit:
    q = t.initial
    states = [q]
    steps = []
    for x in inputs:
        if not t.dom.contains_element(x):
            raise ValidationError(f"input {x} outside {t.dom.render()}")
        tr = t.delta.get((q, x))
        if tr is None:
            return Orbit(tuple(states), tuple(steps), True)
        y, q = tr
        steps.append((x, y))
        states.append(q)
    return Orbit(tuple(states), tuple(steps), False)


def _reachable(t: Transducer) -> Transducer:
    seen = {t.initial}
    order = [t.initial]
    queue = deque([t.initial])
    inputs = t.dom.elements()
    while queue:
        q = queue.popleft()
        for x in inputs:
            tr = t.delta.get((q, x))
            if tr and tr[1] not in seen:
                seen.add(tr[1])
                order.append(tr[1])
                queue.append(tr[1])
    delta = {k: v for k, v in t.delta.items() if k[0] in seen}
    return Transducer(t.dom, t.cod, tuple(order), t.initial, delta)


def identity_td(a: ObjectExpr) -> Transducer:
    return Transducer(a, a, ("*",), "*", {(("*"), e): (e, "*") for e in a.elements()})


def symmetry_td(a: ObjectExpr, b: ObjectExpr) -> Transducer:
    from .finfun import _sym_table

    table = _sym_table(a, b)
    return Transducer(a.tensor(b), b.tensor(a), ("*",), "*",
                      {("*", x): (y, "*") for x, y in table.items()})


def compose_td(f: Transducer, g: Transducer) -> Transducer:
    if f.cod != g.dom:
        raise ShapeError(f"transducer: cod {f.cod.render()} != dom {g.dom.render()}")
    delta = {}
    start = (f.initial, g.initial)
    seen = {start}
    order = [start]
    queue = deque([start])
    inputs = f.dom.elements()
    while queue:
        qf, qg = queue.popleft()
        for x in inputs:
            step_f = f.delta.get((qf, x))
            if step_f is None:
                continue
            y, qf2 = step_f
            step_g = g.delta.get((qg, y))
            if step_g is None:
                continue
            z, qg2 = step_g
            nxt = (qf2, qg2)
            delta[((qf, qg), x)] = (z, nxt)
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return Transducer(f.dom, g.cod, tuple(order), start, delta)


def tensor_td(f: Transducer, g: Transducer) -> Transducer:
    dom = f.dom.tensor(g.dom)
    cod = f.cod.tensor(g.cod)
    nfd, nfc = f.dom.n_wires, f.cod.n_wires
    delta = {}
    start = (f.initial, g.initial)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        qf, qg = queue.popleft()
        for x in dom.elements():
            if x[0] < nfd:
                step = f.delta.get((qf, x))
                if step is None:
                    continue
                y, qf2 = step
                nxt = (qf2, qg)
                out = y
            else:
                step = g.delta.get((qg, (x[0] - nfd, x[1])))
                if step is None:
                    continue
                y, qg2 = step
                nxt = (qf, qg2)
                out = shift(y, nfc)
            delta[((qf, qg), x)] = (out, nxt)
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return Transducer(dom, cod, tuple(order), start, delta)


def trace_td(f: Transducer, a: ObjectExpr, b: ObjectExpr, u: ObjectExpr) -> Transducer:
    """Feedback: outputs in the u block are fed back in as inputs until an
    exit output appears.  A repeated (state, feedback element) configuration
    during one circulation means the token can never exit; the entry is then
    simply absent."""
    if f.dom != a.tensor(u) or f.cod != b.tensor(u):
        raise ShapeError("transducer trace shape mismatch")
    na, nb = a.n_wires, b.n_wires
    delta = {}
    start = f.initial
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for x in a.elements():
            cur = x
            state = q
            visited = set()
            result = None
            while True:
                step = f.delta.get((state, cur))
                if step is None:
                    break
                y, state2 = step
                if y[0] < nb:
                    result = (y, state2)
                    break
                u_el = (y[0] - nb, y[1])
                if (state2, u_el) in visited:
                    break
                visited.add((state2, u_el))
                state = state2
                cur = (na + u_el[0], u_el[1])
            if result is not None:
                delta[(q, x)] = result
                if result[1] not in seen:
                    seen.add(result[1])
                    order.append(result[1])
                    queue.append(result[1])
    return Transducer(a, b, tuple(order), start, delta)


def _partition(machines) -> dict:
    """Coarsest one-step-respecting partition of the given machines' states.

    ``machines`` is a list of transducers over identical dom/cod objects;
    states are tagged with the machine index.  Returns state -> block id.
    """
    inputs = machines[0].dom.elements()
    tagged = [(i, q) for i, t in enumerate(machines) for q in t.states]
    block = {s: 0 for s in tagged}
    n_blocks = 1
    while True:
        sigs = {}
        for s in tagged:
            i, q = s
            sig = []
            for x in inputs:
                tr = machines[i].delta.get((q, x))
                sig.append(None if tr is None else (tr[0], block[(i, tr[1])]))
            sigs[s] = (block[s], tuple(sig))
        ids = {}
        new_block = {}
        for s in tagged:
            key = sigs[s]
            if key not in ids:
                ids[key] = len(ids)
            new_block[s] = ids[key]
        if len(ids) == n_blocks:
            return new_block
        block = new_block
        n_blocks = len(ids)


@dataclass
class BisimResult:
    equivalent: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.equivalent


def bisim_equiv(f: Transducer, g: Transducer) -> BisimResult:
    """Decide behavioural equivalence; on failure give a shortest input word
    on which the unfoldings differ."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeError("bisimulation requires identical input and output objects")
    block = _partition([f, g])
    if block[(0, f.initial)] == block[(1, g.initial)]:
        return BisimResult(True)
    # breadth-first search over state pairs for the shortest distinguishing word
    inputs = f.dom.elements()
    start = (f.initial, g.initial)
    queue = deque([(start, ())])
    seen = {start}
    while queue:
        (qf, qg), word = queue.popleft()
        for x in inputs:
            tf = f.delta.get((qf, x))
            tg = g.delta.get((qg, x))
            if (tf is None) != (tg is None) or (tf and tg and tf[0] != tg[0]):
                return BisimResult(False, word + (x,))
            if tf and tg:
                nxt = (tf[1], tg[1])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, word + (x,)))
    raise AssertionError("partition refinement and product search disagree")


def minimize(t: Transducer) -> Transducer:
    """The canonical quotient: reachable states merged up to bisimilarity,
    renamed 0..n-1 in breadth-first order."""
    r = _reachable(t)
    block = _partition([r])
    inputs = r.dom.elements()
    rep = {}
    for q in r.states:
        rep.setdefault(block[(0, q)], q)
    start_block = block[(0, r.initial)]
    names = {start_block: 0}
    order = [start_block]
    queue = deque([start_block])
    delta = {}
    while queue:
        b = queue.popleft()
        q = rep[b]
        for x in inputs:
            tr = r.delta.get((q, x))
            if tr is None:
                continue
            b2 = block[(0, tr[1])]
            if b2 not in names:
                names[b2] = len(names)
                order.append(b2)
                queue.append(b2)
            delta[(names[b], x)] = (tr[0], names[b2])
    return Transducer(r.dom, r.cod, tuple(range(len(names))), 0, delta)


def plays(t: Transducer, depth: int) -> frozenset:
    """All alternating input/output sequences of at most ``depth`` rounds
    realized from the initial state (even-length, prefix-closed)."""
    acc = {()}
    frontier = [((), t.initial)]
    inputs = t.dom.elements()
    for _ in range(depth):
        nxt = []
        for seq, q in frontier:
            for x in inputs:
                tr = t.delta.get((q, x))
                if tr is not None:
                    seq2 = seq + (x, tr[0])
                    acc.add(seq2)
                    nxt.append((seq2, tr[1]))
        frontier = nxt
        if not frontier:
            break
    return frozenset(acc)


def canonical(t: Transducer) -> Transducer:
    """Rename states 0..n-1 in breadth-first order (reachable part only);
    used for stable rendering and serialization."""
    r = _reachable(t)
    names = {q: i for i, q in enumerate(r.states)}
    delta = {(names[q], x): (y, names[q2]) for (q, x), (y, q2) in r.delta.items()}
    return Transducer(r.dom, r.cod, tuple(range(len(names))), 0, delta)


def from_pfn(f: PfnTable) -> Transducer:
    """A partial function as a one-state machine."""
    return Transducer(f.dom, f.cod, ("*",), "*",
                      {("*", x): (y, "*") for x, y in f.table.items()})


def to_pfn(t: Transducer) -> PfnTable:
    if t.n_states != 1:
        raise ValidationError("only one-state machines collapse to a table")
    q = t.states[0]
    return PfnTable(t.dom, t.cod, {x: y for (q2, x), (y, _) in t.delta.items() if q2 == q})


class TransducerInstance(Instance):
    name = "transducer"

    def __init__(self, max_states: int = 4):
        self.max_states = max_states

    def identity(self, a):
        return identity_td(a)

    def compose(self, f, g):
        return compose_td(f, g)

    def tensor(self, f, g):
        return tensor_td(f, g)

    def symmetry(self, a, b):
        return symmetry_td(a, b)

    def trace(self, f, a, b, u):
        return trace_td(f, a, b, u)

    def equal(self, f, g):
        return bool(bisim_equiv(f, g))

    def sample(self, dom, cod, rng):
        n = rng.randint(1, self.max_states)
        cod_els = cod.elements()
        delta = {}
        for q in range(n):
            for x in dom.elements():
                if cod_els and rng.random() >= 0.25:
                    delta[(q, x)] = (rng.choice(cod_els), rng.randrange(n))
        return Transducer(dom, cod, tuple(range(n)), 0, delta)

    def sample_object(self, rng):
        return sample_finite_object(rng)

    def render(self, f):
        c = canonical(f)
        lines = [f"states: {c.n_states}", f"initial: {c.initial}"]
        for (q, x), (y, q2) in sorted(c.delta.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            lines.append(f"{q} --{x[0]}:{x[1]}/{y[0]}:{y[1]}--> {q2}")
        return "\n".join(lines)
