"""Substochastic kernels over finite spaces.

A morphism is a matrix of nonnegative transition weights with row mass at
most one ("partial" probabilistic transitions).  Composition is matrix
product (integration against point masses), tensor is block-diagonal
placement, and feedback sums the mass over all finite excursions through the
feedback block.  Boundedness of the partial sums follows from
substochasticity: the mass that has exited by step k never exceeds 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .contract import Instance
from .errors import DivergenceError, SingularityError, ValidationError
from .finfun import PfnTable, _sym_table, sample_finite_object
from .objects import ObjectExpr

ROW_SLACK = 1e-12
MAX_SERIES_ITER = 10**6


@dataclass
class SubstochMatrix:
    """A substochastic kernel, stored dense over the element enumerations."""

    dom: ObjectExpr
    cod: ObjectExpr
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        self.entries = m
        if m.shape != (self.dom.n_elements, self.cod.n_elements):
            raise ValidationError(
                f"entry matrix shape {m.shape} does not match "
                f"{self.dom.n_elements} x {self.cod.n_elements}"
            )
        if m.size and m.min() < -ROW_SLACK:
            raise ValidationError("negative transition weight")
        if m.size and m.sum(axis=1).max() > 1.0 + ROW_SLACK:
            raise ValidationError("row mass exceeds 1")


def _blocks(f: SubstochMatrix, a: ObjectExpr, b: ObjectExpr):
    na, nb = a.n_elements, b.n_elements
    m = f.entries
    return m[:na, :nb], m[:na, nb:], m[na:, :nb], m[na:, nb:]


def _can_exit(f_uy: np.ndarray, f_uu: np.ndarray) -> np.ndarray:
    """Boolean mask of feedback states with some path to an exit."""
    nu = f_uu.shape[0]
    alive = f_uy.sum(axis=1) > 0 if f_uy.size else np.zeros(nu, dtype=bool)
    changed = True
    while changed:
        changed = False
        feeds = (f_uu[:, alive].sum(axis=1) > 0) & ~alive
        if feeds.any():
            alive |= feeds
            changed = True
    return alive


def trace_series(f: SubstochMatrix, a: ObjectExpr, b: ObjectExpr, u: ObjectExpr,
                 epsilon: float = 1e-12, max_iter: int = MAX_SERIES_ITER) -> SubstochMatrix:
    """Feedback by accumulating the per-traversal exit masses.

    The k-th added term is exactly the probability of exiting after k
    traversals of the feedback block.  Mass sitting on feedback states with
    no path to an exit contributes nothing to any term, so it is dropped
    from the residual; the remaining residual decays geometrically and the
    stopping rule ``residual < epsilon`` terminates.
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    f_xy, f_xu, f_uy, f_uu = _blocks(f, a, b)
    total = f_xy.copy()
    if f_uu.shape[0] == 0 or f_xu.shape[0] == 0:
        return SubstochMatrix(a, b, total)
    alive = _can_exit(f_uy, f_uu)
    q = f_uu[np.ix_(alive, alive)]
    r = f_uy[alive]
    mu = f_xu[:, alive]
    for _ in range(max_iter):
        if mu.size == 0:
            break
        total += mu @ r
        mu = mu @ q
        residual = mu.sum(axis=1).max() if mu.size else 0.0
        if residual < epsilon:
            break
    else:
        raise DivergenceError(
            f"feedback series did not reach residual {epsilon} within {max_iter} iterations",
            residual=float(mu.sum(axis=1).max()),
        )
    return SubstochMatrix(a, b, total)


def trace_exact(f: SubstochMatrix, a: ObjectExpr, b: ObjectExpr, u: ObjectExpr) -> SubstochMatrix:
    """Closed form of the path sum via a linear solve (no explicit inverse)."""
    f_xy, f_xu, f_uy, f_uu = _blocks(f, a, b)
    nu = f_uu.shape[0]
    if nu == 0:
        return SubstochMatrix(a, b, f_xy.copy())
    sys = np.eye(nu) - f_uu
    try:
        solved = np.linalg.solve(sys, f_uy)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(f"feedback system is singular: {exc}") from exc
    return SubstochMatrix(a, b, f_xy + f_xu @ solved)


def from_pfn(f: PfnTable) -> SubstochMatrix:
    """The 0/1 kernel whose support is a partial-function graph."""
    m = np.zeros((f.dom.n_elements, f.cod.n_elements))
    di, ci = f.dom.element_index(), f.cod.element_index()
    for x, y in f.table.items():
        m[di[x], ci[y]] = 1.0
    return SubstochMatrix(f.dom, f.cod, m)


class StochInstance(Instance):
    name = "stoch"

    def __init__(self, tol: float = 1e-9):
        self.tol = tol

    def identity(self, a):
        return SubstochMatrix(a, a, np.eye(a.n_elements))

    def compose(self, f, g):
        self.check_composable(f, g)
        return SubstochMatrix(f.dom, g.cod, f.entries @ g.entries)

    def tensor(self, f, g):
        nd = f.dom.n_elements + g.dom.n_elements
        nc = f.cod.n_elements + g.cod.n_elements
        m = np.zeros((nd, nc))
        m[: f.entries.shape[0], : f.entries.shape[1]] = f.entries
        m[f.entries.shape[0]:, f.entries.shape[1]:] = g.entries
        return SubstochMatrix(f.dom.tensor(g.dom), f.cod.tensor(g.cod), m)

    def symmetry(self, a, b):
        dom = a.tensor(b)
        cod = b.tensor(a)
        m = np.zeros((dom.n_elements, cod.n_elements))
        ci = cod.element_index()
        di = dom.element_index()
        for x, y in _sym_table(a, b).items():
            m[di[x], ci[y]] = 1.0
        return SubstochMatrix(dom, cod, m)

    def trace(self, f, a, b, u):
        self.check_trace_shape(f, a, b, u)
        try:
            return trace_exact(f, a, b, u)
        except SingularityError:
            return trace_series(f, a, b, u)

    def equal(self, f, g):
        if f.dom != g.dom or f.cod != g.cod:
            return False
        if f.entries.size == 0:
            return True
        return bool(np.max(np.abs(f.entries - g.entries)) <= self.tol)

    def sample(self, dom, cod, rng):
        nd, nc = dom.n_elements, cod.n_elements
        m = np.zeros((nd, nc))
        for i in range(nd):
            if nc == 0:
                continue
            weights = [-np.log(max(rng.random(), 1e-300)) for _ in range(nc)]
            s = sum(weights)
            leak = 0.5 + 0.5 * rng.random()
            m[i] = [w / s * leak for w in weights]
        return SubstochMatrix(dom, cod, m)

    def sample_object(self, rng):
        return sample_finite_object(rng)

    def render(self, f):
        if f.entries.size == 0 and f.dom.n_elements == 0:
            return "(empty)"
        lines = []
        for i, e in enumerate(f.dom.elements()):
            row = " ".join(format(v, ".17g") for v in f.entries[i])
            lines.append(f"{e[0]}:{e[1]} | {row}" if row else f"{e[0]}:{e[1]} |")
        return "\n".join(lines)
