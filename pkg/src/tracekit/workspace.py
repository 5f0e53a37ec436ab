"""Workspaces: named objects and generators, plus term evaluation.

A workspace document is JSON::

    {
      "instance": "pfn",
      "objects":  {"X": [ {"name": "X", "elements": ["a", "b"]}, ... ]},
      "generators": {"f": { "dom": ["X"], "cod": ["X"], ...payload... }}
    }

Objects are arrays of wires.  Order-carrying wires add ``"leq"`` (an array
of label pairs; reflexive pairs may be omitted) and ``"bottom"``.  Generator
``dom``/``cod`` are arrays of object names, concatenated left to right (a
bare string is shorthand for a one-entry array).

Morphism payloads by instance, with elements written ``[wire, "label"]``:

* ``pfn`` / ``pinj``: ``"map": [[el, el], ...]``
* ``rel``:            ``"pairs": [[el, el], ...]``
* ``stoch``:          ``"entries": [[row], ...]`` over the element enumerations
* ``transducer``:     ``"states": [...], "initial": s, "delta": [[q, el, el, q], ...]``
  (standalone files may carry ``"input"``/``"output"`` wire arrays instead
  of ``dom``/``cod`` names)
* ``cpo``:            ``"table": [[[labels...], [labels...]], ...]``

Real numbers are rendered with 17 significant digits; all renderings sort
their keys, so serialized forms are stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .contract import Instance
from .cpo import CpoInstance, MonotoneMap
from .errors import ShapeError, WorkspaceError
from .finfun import PfnInstance, PInjInstance, PfnTable, PInjTable, RelInstance, RelTable
from .objects import UNIT, AtomicWire, ObjectExpr
from .stoch import StochInstance, SubstochMatrix
from .terms import Gen, Id, Seq, Sym, Tensor, Trace
from .transducer import Transducer, TransducerInstance, canonical, orbit

INSTANCES = {
    "pfn": PfnInstance,
    "pinj": PInjInstance,
    "rel": RelInstance,
    "stoch": StochInstance,
    "cpo": CpoInstance,
    "transducer": TransducerInstance,
}


def make_instance(name: str) -> Instance:
    try:
        return INSTANCES[name]()
    except KeyError:
        raise WorkspaceError(
            f"unknown instance {name!r}; known: {', '.join(sorted(INSTANCES))}"
        ) from None


# ---------------------------------------------------------------- objects

def wire_from_json(data) -> AtomicWire:
    if not isinstance(data, dict) or "name" not in data or "elements" not in data:
        raise WorkspaceError(f"a wire needs 'name' and 'elements': {data!r}")
    leq = None
    bottom = data.get("bottom")
    if "leq" in data:
        pairs = {(a, b) for a, b in data["leq"]}
        pairs.update((e, e) for e in data["elements"])
        leq = frozenset(pairs)
    try:
        return AtomicWire(data["name"], tuple(data["elements"]), leq, bottom)
    except Exception as exc:
        raise WorkspaceError(f"bad wire {data.get('name')!r}: {exc}") from exc


def object_from_json(data) -> ObjectExpr:
    if not isinstance(data, list):
        raise WorkspaceError(f"an object is an array of wires, got {data!r}")
    return ObjectExpr(tuple(wire_from_json(w) for w in data))


def wire_to_json(w: AtomicWire) -> dict:
    out = {"name": w.name, "elements": list(w.elements)}
    if w.ordered:
        out["leq"] = sorted([a, b] for a, b in w.leq if a != b)
        out["bottom"] = w.bottom
    return out


def object_to_json(obj: ObjectExpr) -> list:
    return [wire_to_json(w) for w in obj.wires]


# ---------------------------------------------------------------- morphisms

def _el_from_json(e):
    if not (isinstance(e, list) and len(e) == 2 and isinstance(e[0], int)):
        raise WorkspaceError(f"an element is [wire, label], got {e!r}")
    return (e[0], str(e[1]))


def _el_to_json(e):
    return [e[0], e[1]]


def _resolve_endpoint(data, key, objects, alt=None):
    """An endpoint is a name, an array of names, or an inline wire array."""
    if alt and alt in data:
        return object_from_json(data[alt])
    spec = data.get(key)
    if spec is None:
        raise WorkspaceError(f"morphism payload needs {key!r}")
    if isinstance(spec, str):
        spec = [spec]
    if isinstance(spec, list) and all(isinstance(x, dict) for x in spec):
        return object_from_json(spec)
    out = UNIT
    for n in spec:
        if not isinstance(n, str) or n not in objects:
            raise WorkspaceError(f"unknown object name {n!r} in {key}")
        out = out.tensor(objects[n])
    return out


def morphism_from_json(instance: Instance, data, objects=None):
    objects = objects or {}
    kind = instance.name
    if kind == "transducer":
        dom = _resolve_endpoint(data, "dom", objects, alt="input")
        cod = _resolve_endpoint(data, "cod", objects, alt="output")
    else:
        dom = _resolve_endpoint(data, "dom", objects)
        cod = _resolve_endpoint(data, "cod", objects)
    try:
        if kind in ("pfn", "pinj"):
            table = {_el_from_json(k): _el_from_json(v) for k, v in data["map"]}
            cls = PInjTable if kind == "pinj" else PfnTable
            return cls(dom, cod, table)
        if kind == "rel":
            pairs = frozenset((_el_from_json(x), _el_from_json(y)) for x, y in data["pairs"])
            return RelTable(dom, cod, pairs)
        if kind == "stoch":
            return SubstochMatrix(dom, cod, np.array(data["entries"], dtype=float).reshape(
                dom.n_elements, cod.n_elements))
        if kind == "transducer":
            delta = {}
            for q, x, y, q2 in data["delta"]:
                delta[(q, _el_from_json(x))] = (_el_from_json(y), q2)
            return Transducer(dom, cod, tuple(data["states"]), data["initial"], delta)
        if kind == "cpo":
            table = {tuple(k): tuple(v) for k, v in data["table"]}
            return MonotoneMap(dom, cod, table)
    except WorkspaceError:
        raise
    except KeyError as exc:
        raise WorkspaceError(f"{kind} payload is missing field {exc}") from exc
    except Exception as exc:
        raise WorkspaceError(f"bad {kind} payload: {exc}") from exc
    raise WorkspaceError(f"no payload schema for instance {kind!r}")


def morphism_to_json(instance: Instance, m) -> dict:
    kind = instance.name
    out = {"instance": kind, "dom": object_to_json(m.dom), "cod": object_to_json(m.cod)}
    if kind in ("pfn", "pinj"):
        out["map"] = [[_el_to_json(k), _el_to_json(v)] for k, v in sorted(m.table.items())]
    elif kind == "rel":
        out["pairs"] = [[_el_to_json(x), _el_to_json(y)] for x, y in sorted(m.pairs)]
    elif kind == "stoch":
        out["entries"] = [[float(v) for v in row] for row in m.entries]
    elif kind == "transducer":
        c = canonical(m)
        out["states"] = list(c.states)
        out["initial"] = c.initial
        out["delta"] = [[q, _el_to_json(x), _el_to_json(y), q2]
                        for (q, x), (y, q2) in sorted(c.delta.items())]
    elif kind == "cpo":
        out["table"] = [[list(k), list(v)] for k, v in sorted(m.table.items())]
    else:
        raise WorkspaceError(f"no payload schema for instance {kind!r}")
    return out


def canonical_json(data) -> str:
    """Deterministic rendering: sorted keys, reals with 17 significant digits."""

    def enc(v):
        if isinstance(v, float):
            return format(v, ".17g")
        if isinstance(v, bool) or v is None:
            return json.dumps(v)
        if isinstance(v, (int, str)):
            return json.dumps(v)
        if isinstance(v, (list, tuple)):
            return "[" + ",".join(enc(x) for x in v) + "]"
        if isinstance(v, dict):
            items = sorted(v.items())
            return "{" + ",".join(f"{json.dumps(str(k))}:{enc(x)}" for k, x in items) + "}"
        raise TypeError(f"cannot serialize {type(v).__name__}")

    return enc(data)


# ---------------------------------------------------------------- workspace

@dataclass
class Workspace:
    instance: Instance
    objects: dict = field(default_factory=dict)
    generators: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, data, instance_name: str | None = None) -> "Workspace":
        if not isinstance(data, dict):
            raise WorkspaceError("a workspace is a JSON object")
        declared = data.get("instance")
        if instance_name and declared and instance_name != declared:
            raise WorkspaceError(
                f"workspace declares instance {declared!r} but {instance_name!r} was requested"
            )
        name = instance_name or declared
        if not name:
            raise WorkspaceError("no instance selected (pass one or declare it in the workspace)")
        inst = make_instance(name)
        objects = {}
        for oname, spec in data.get("objects", {}).items():
            objects[oname] = object_from_json(spec)
        generators = {}
        for gname, spec in data.get("generators", {}).items():
            try:
                generators[gname] = morphism_from_json(inst, spec, objects)
            except WorkspaceError as exc:
                raise WorkspaceError(f"generator {gname!r}: {exc}") from exc
        return cls(inst, objects, generators)

    def object(self, name: str, where=None) -> ObjectExpr:
        if name not in self.objects:
            raise ShapeError(f"unknown object {name!r}{_at(where)}")
        return self.objects[name]


def _at(pos):
    return f" at {pos[0]}:{pos[1]}" if pos else ""


def shape_check(term, ws: Workspace):
    """Bottom-up endpoint computation; raises ShapeError at the offending subterm."""
    if isinstance(term, Id):
        o = ws.object(term.obj, term.pos)
        return o, o
    if isinstance(term, Sym):
        a = ws.object(term.left, term.pos)
        b = ws.object(term.right, term.pos)
        return a.tensor(b), b.tensor(a)
    if isinstance(term, Gen):
        if term.name not in ws.generators:
            raise ShapeError(f"unbound generator {term.name!r}{_at(term.pos)}")
        g = ws.generators[term.name]
        return g.dom, g.cod
    if isinstance(term, Seq):
        d1, c1 = shape_check(term.first, ws)
        d2, c2 = shape_check(term.second, ws)
        if c1 != d2:
            raise ShapeError(
                f"composition mismatch{_at(term.pos)}: {c1.render()} vs {d2.render()}"
            )
        return d1, c2
    if isinstance(term, Tensor):
        d1, c1 = shape_check(term.left, ws)
        d2, c2 = shape_check(term.right, ws)
        return d1.tensor(d2), c1.tensor(c2)
    if isinstance(term, Trace):
        u = ws.object(term.over, term.pos)
        d, c = shape_check(term.body, ws)
        if not d.has_suffix(u):
            raise ShapeError(
                f"trace{_at(term.pos)}: domain {d.render()} does not end with {u.render()}"
            )
        if not c.has_suffix(u):
            raise ShapeError(
                f"trace{_at(term.pos)}: codomain {c.render()} does not end with {u.render()}"
            )
        return d.strip_suffix(u), c.strip_suffix(u)
    raise TypeError(f"not a term: {term!r}")


def eval_term(term, ws: Workspace):
    """Structural recursion into the instance operations; assumes shape_check passed."""
    inst = ws.instance
    if isinstance(term, Id):
        return inst.identity(ws.object(term.obj, term.pos))
    if isinstance(term, Sym):
        return inst.symmetry(ws.object(term.left, term.pos), ws.object(term.right, term.pos))
    if isinstance(term, Gen):
        return ws.generators[term.name]
    if isinstance(term, Seq):
        return inst.compose(eval_term(term.first, ws), eval_term(term.second, ws))
    if isinstance(term, Tensor):
        return inst.tensor(eval_term(term.left, ws), eval_term(term.right, ws))
    if isinstance(term, Trace):
        u = ws.object(term.over, term.pos)
        f = eval_term(term.body, ws)
        return inst.trace(f, f.dom.strip_suffix(u), f.cod.strip_suffix(u), u)
    raise TypeError(f"not a term: {term!r}")


def render_morphism(instance: Instance, m) -> str:
    """Text form with endpoint header; bit-stable for goldens."""
    return f"dom: {m.dom.render()}\ncod: {m.cod.render()}\n{instance.render(m)}"


# ---------------------------------------------------------------- running

def token_log(term, ws: Workspace) -> list[str]:
    """Token paths through a feedback: one line per domain element, listing
    the visited feedback elements and the exit (or the lack of one).  Only
    meaningful for the deterministic token instances."""
    if ws.instance.name not in ("pfn", "pinj"):
        raise WorkspaceError(
            f"token logging works on the pfn/pinj instances, not {ws.instance.name!r}"
        )
    if not isinstance(term, Trace):
        raise WorkspaceError("token logging needs a term of the form tr[U](...)")
    from .finfun import token_trace

    u = ws.object(term.over, term.pos)
    f = eval_term(term.body, ws)
    a, b = f.dom.strip_suffix(u), f.cod.strip_suffix(u)
    log = []
    token_trace(f.table, a, b, u, log)
    lines = []
    for x, path, result in log:
        steps = [f"{x[0]}:{x[1]}"] + [f"{u_el[0]}:{u_el[1]}" for u_el in path]
        steps.append(f"{result[0]}:{result[1]}" if result else "(no exit)")
        lines.append(" -> ".join(steps))
    return lines


def run_morphism(instance: Instance, m, inputs):
    """Apply a morphism to concrete inputs; the encoding depends on the instance."""
    kind = instance.name
    if kind in ("pfn", "pinj"):
        out = []
        for e in inputs:
            y = m.table.get(_el_from_json(e))
            out.append(None if y is None else _el_to_json(y))
        return out
    if kind == "rel":
        out = []
        for e in inputs:
            x = _el_from_json(e)
            out.append(sorted(_el_to_json(y) for x2, y in m.pairs if x2 == x))
        return out
    if kind == "stoch":
        idx = m.dom.element_index()
        out = []
        for e in inputs:
            x = _el_from_json(e)
            if x not in idx:
                raise WorkspaceError(f"input {e!r} is not an element of {m.dom.render()}")
            out.append([float(v) for v in m.entries[idx[x]]])
        return out
    if kind == "transducer":
        word = [_el_from_json(e) for e in inputs]
        orb = orbit(m, word)
        return {"outputs": [_el_to_json(y) for y in orb.outputs], "halted": orb.halted}
    if kind == "cpo":
        out = []
        for e in inputs:
            key = tuple(e)
            if key not in m.table:
                raise WorkspaceError(f"input {e!r} is not in the domain carrier")
            out.append(list(m.table[key]))
        return out
    raise WorkspaceError(f"run is not supported for instance {kind!r}")
