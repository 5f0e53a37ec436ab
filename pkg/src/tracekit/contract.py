"""The operations contract every category instance implements.

An instance supplies identity, composition, tensor, symmetry, a feedback
trace, an instance-appropriate equality, and seeded samplers for objects and
morphisms.  Every morphism value carries ``dom`` and ``cod`` ObjectExprs.
All values are immutable after construction and all operations are pure, so
independent calls may run concurrently.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod

from .errors import ShapeError
from .objects import ObjectExpr


class Instance(ABC):
    """A traced symmetric monoidal category presented operationally."""

    name: str = "?"

    @abstractmethod
    def identity(self, a: ObjectExpr):
        ...

    @abstractmethod
    def compose(self, f, g):
        """Sequential composite f;g.  Requires cod(f) = dom(g)."""

    @abstractmethod
    def tensor(self, f, g):
        """Parallel composite acting as f on the left wires, g on the right."""

    @abstractmethod
    def symmetry(self, a: ObjectExpr, b: ObjectExpr):
        """The braiding a (x) b -> b (x) a."""

    @abstractmethod
    def trace(self, f, a: ObjectExpr, b: ObjectExpr, u: ObjectExpr):
        """Feedback over u: turns f : a (x) u -> b (x) u into a -> b."""

    @abstractmethod
    def equal(self, f, g) -> bool:
        ...

    @abstractmethod
    def sample(self, dom: ObjectExpr, cod: ObjectExpr, rng: random.Random):
        """A random morphism dom -> cod, deterministic given the rng state."""

    @abstractmethod
    def sample_object(self, rng: random.Random) -> ObjectExpr:
        """A random object within this instance's desk-scale size budget."""

    @abstractmethod
    def render(self, f) -> str:
        """Canonical text form of a morphism (stable under re-rendering)."""

    def check_composable(self, f, g):
        if f.cod != g.dom:
            raise ShapeError(
                f"{self.name}: cannot compose, cod {f.cod.render()} != dom {g.dom.render()}"
            )

    def check_trace_shape(self, f, a, b, u):
        if f.dom != a.tensor(u):
            raise ShapeError(
                f"{self.name}: trace domain mismatch, expected {a.tensor(u).render()}, got {f.dom.render()}"
            )
        if f.cod != b.tensor(u):
            raise ShapeError(
                f"{self.name}: trace codomain mismatch, expected {b.tensor(u).render()}, got {f.cod.render()}"
            )
