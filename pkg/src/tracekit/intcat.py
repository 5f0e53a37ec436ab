"""The polarized-pair construction over any traced instance.

Objects become pairs of base objects (moves owed by each side of an
interaction); a morphism (a, b) -> (c, d) is a base morphism a (x) d ->
b (x) c, and composition plugs two such morphisms together and feeds the
shared middle wires back through the base trace.  The result is compact
closed: duality swaps polarities, and the internal hom is dual (x) target.

Under strict tensors the rewiring isomorphisms needed by composition are
plain block permutations; ``block_permutation`` realizes any permutation of
tensor blocks out of adjacent symmetries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .contract import Instance
from .errors import ShapeError
from .objects import UNIT, ObjectExpr, tensor_all


@dataclass(frozen=True)
class IntObject:
    """A polarized pair: ``pos`` moves for the system, ``neg`` for the environment."""

    pos: ObjectExpr
    neg: ObjectExpr

    def dual(self) -> "IntObject":
        return IntObject(self.neg, self.pos)

    def tensor(self, other: "IntObject") -> "IntObject":
        return IntObject(self.pos.tensor(other.pos), self.neg.tensor(other.neg))

    def render(self) -> str:
        return f"({self.pos.render()} ; {self.neg.render()})"


INT_UNIT = IntObject(UNIT, UNIT)


@dataclass
class IntMorphism:
    src: IntObject
    dst: IntObject
    core: object  # base morphism src.pos (x) dst.neg -> src.neg (x) dst.pos

    def __post_init__(self):
        if self.core.dom != self.src.pos.tensor(self.dst.neg):
            raise ShapeError("core domain does not match the polarized endpoints")
        if self.core.cod != self.src.neg.tensor(self.dst.pos):
            raise ShapeError("core codomain does not match the polarized endpoints")


def block_permutation(instance: Instance, blocks, perm):
    """The base morphism permuting tensor blocks: output slot i receives
    input block perm[i].  Built from adjacent symmetries by selection sort,
    so it works uniformly in every instance."""
    blocks = list(blocks)
    n = len(blocks)
    if sorted(perm) != list(range(n)):
        raise ShapeError(f"{perm} is not a permutation of 0..{n - 1}")
    cur = list(range(n))
    result = instance.identity(tensor_all(blocks))
    for i in range(n):
        j = cur.index(perm[i])
        while j > i:
            left = tensor_all(blocks[cur[k]] for k in range(j - 1))
            right = tensor_all(blocks[cur[k]] for k in range(j + 1, n))
            swap = instance.symmetry(blocks[cur[j - 1]], blocks[cur[j]])
            step = instance.tensor(instance.tensor(instance.identity(left), swap),
                                   instance.identity(right))
            result = instance.compose(result, step)
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            j -= 1
    return result


class IntCategory:
    """The construction, packaged with the base instance it is built over."""

    def __init__(self, instance: Instance):
        self.base = instance

    def identity(self, a: IntObject) -> IntMorphism:
        return IntMorphism(a, a, self.base.symmetry(a.pos, a.neg))

    def compose(self, f: IntMorphism, g: IntMorphism) -> IntMorphism:
        if f.dst != g.src:
            raise ShapeError(
                f"cannot compose: {f.dst.render()} != {g.src.render()}"
            )
        a, b, c = f.src, f.dst, g.dst
        pre = block_permutation(self.base, [a.pos, c.neg, b.neg, b.pos], (0, 2, 3, 1))
        post = block_permutation(self.base, [a.neg, b.pos, b.neg, c.pos], (0, 3, 2, 1))
        body = self.base.compose(self.base.compose(pre, self.base.tensor(f.core, g.core)), post)
        core = self.base.trace(
            body,
            a.pos.tensor(c.neg),
            a.neg.tensor(c.pos),
            b.neg.tensor(b.pos),
        )
        return IntMorphism(a, c, core)

    def tensor(self, f: IntMorphism, g: IntMorphism) -> IntMorphism:
        a, b = f.src, f.dst
        c, d = g.src, g.dst
        src = a.tensor(c)
        dst = b.tensor(d)
        pre = block_permutation(self.base, [a.pos, c.pos, b.neg, d.neg], (0, 2, 1, 3))
        post = block_permutation(self.base, [a.neg, b.pos, c.neg, d.pos], (0, 2, 1, 3))
        core = self.base.compose(self.base.compose(pre, self.base.tensor(f.core, g.core)), post)
        return IntMorphism(src, dst, core)

    def dual(self, a: IntObject) -> IntObject:
        return a.dual()

    def dual_mor(self, f: IntMorphism) -> IntMorphism:
        a, b = f.src, f.dst
        pre = self.base.symmetry(b.neg, a.pos)
        post = self.base.symmetry(a.neg, b.pos)
        core = self.base.compose(self.base.compose(pre, f.core), post)
        return IntMorphism(b.dual(), a.dual(), core)

    def hom(self, a: IntObject, b: IntObject) -> IntObject:
        return a.dual().tensor(b)

    def unit_mor(self, a: IntObject) -> IntMorphism:
        """The coevaluation I -> a (x) a*."""
        return IntMorphism(INT_UNIT, a.tensor(a.dual()), self.base.symmetry(a.neg, a.pos))

    def counit_mor(self, a: IntObject) -> IntMorphism:
        """The evaluation a* (x) a -> I."""
        return IntMorphism(a.dual().tensor(a), INT_UNIT, self.base.symmetry(a.neg, a.pos))

    def embed(self, f) -> IntMorphism:
        """A base morphism as a polarized morphism with silent environment."""
        return IntMorphism(IntObject(f.dom, UNIT), IntObject(f.cod, UNIT), f)

    def equal(self, f: IntMorphism, g: IntMorphism) -> bool:
        return f.src == g.src and f.dst == g.dst and self.base.equal(f.core, g.core)

    def sample_object(self, rng: random.Random) -> IntObject:
        return IntObject(self.base.sample_object(rng), self.base.sample_object(rng))

    def sample(self, src: IntObject, dst: IntObject, rng: random.Random) -> IntMorphism:
        core = self.base.sample(src.pos.tensor(dst.neg), src.neg.tensor(dst.pos), rng)
        return IntMorphism(src, dst, core)
