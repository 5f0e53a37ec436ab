"""Independent oracles used by the tests.

These deliberately recompute results along different routes than the
production code: the per-iteration feedback formula as literal table
algebra, relational feedback as explicit path enumeration, and polarized
composition as a direct token walk.
"""

from __future__ import annotations

from tracekit.finfun import PfnTable, RelTable
from tracekit.objects import El, ObjectExpr


def pfn_compose_tables(f: dict, g: dict) -> dict:
    return {x: g[y] for x, y in f.items() if y in g}


def pfn_trace_per_k(f: PfnTable, a: ObjectExpr, b: ObjectExpr, u: ObjectExpr) -> dict:
    """Union over k of: enter on the left, loop exactly k times, exit on the
    left of the codomain.  Built from the three bracket tables verbatim."""
    na, nb = a.n_wires, b.n_wires
    inl = {x: x for x in a.elements()}
    # undefined on the exit block, feedback block re-entered on the right
    zero_inr = {(nb + j, lab): (na + j, lab) for (j, lab) in u.elements()}
    id_zero = {y: y for y in b.elements()}
    out: dict[El, El] = {}
    for k in range(u.n_elements + 1):
        step = dict(inl)
        for _ in range(k):
            step = pfn_compose_tables(step, pfn_compose_tables(f.table, zero_inr))
        f_k = pfn_compose_tables(pfn_compose_tables(step, f.table), id_zero)
        for x, y in f_k.items():
            out.setdefault(x, y)
    return out


def rel_trace_paths(f: RelTable, a: ObjectExpr, b: ObjectExpr, u: ObjectExpr) -> frozenset:
    """All (x, y) connected by a path of any length up to the feedback size."""
    na, nb = a.n_wires, b.n_wires
    f_xy, f_xu, f_uu, f_uy = set(), set(), set(), set()
    for x, y in f.pairs:
        xa, yb = x[0] < na, y[0] < nb
        xs = x if xa else (x[0] - na, x[1])
        ys = y if yb else (y[0] - nb, y[1])
        if xa and yb:
            f_xy.add((x, y))
        elif xa:
            f_xu.add((x, ys))
        elif yb:
            f_uy.add((xs, y))
        else:
            f_uu.add((xs, ys))
    out = set(f_xy)
    for x in a.elements():
        layer = {u0 for (x2, u0) in f_xu if x2 == x}
        for _k in range(u.n_elements + 1):
            for u0 in layer:
                out.update((x, y) for (u2, y) in f_uy if u2 == u0)
            layer = {u1 for u0 in layer for (u2, u1) in f_uu if u2 == u0}
    return frozenset(out)


def token_walk_compose(f, g):
    """Polarized composition of two deterministic tables by walking each
    token through the pair until it exits (or provably never does).

    ``f``: core table of a morphism a -> b, ``g``: core table of b -> c.
    Returns the composite core's table over the combined endpoints.
    """
    a, b = f["src"], f["dst"]
    b2, c = g["src"], g["dst"]
    assert b == b2
    na_p, na_n = a.pos.n_wires, a.neg.n_wires
    nb_p, nb_n = b.pos.n_wires, b.neg.n_wires
    nc_p = c.pos.n_wires
    out = {}
    dom = a.pos.tensor(c.neg)
    for start in dom.elements():
        if start[0] < na_p:
            pos = ("f", start)  # element of a.pos (x) b.neg, same index
        else:
            pos = ("g", (start[0] - na_p + nb_p, start[1]))  # into b.pos (x) c.neg
        visited = set()
        result = None
        while pos is not None and pos not in visited:
            visited.add(pos)
            side, el = pos
            if side == "f":
                y = f["table"].get(el)
                if y is None:
                    break
                if y[0] < na_n:
                    result = y  # exits at a.neg, same index in a.neg (x) c.pos
                    break
                pos = ("g", (y[0] - na_n, y[1]))  # b.pos block of g's domain
            else:
                y = g["table"].get(el)
                if y is None:
                    break
                if y[0] < nb_n:
                    pos = ("f", (na_p + y[0], y[1]))  # b.neg block of f's domain
                else:
                    result = (y[0] - nb_n + na_n, y[1])  # c.pos block of the cod
                    break
        if result is not None:
            out[start] = result
    return out
