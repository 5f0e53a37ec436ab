"""Objects of the wire calculus.

An object is an ordered list of atomic wires; tensor is concatenation and
the empty list is the unit.  Working with flat wire lists makes the monoidal
structure strict: associators are identities and never show up in code.

Elements of an object (for the instances whose tensor is disjoint union) are
addressed as ``(wire_index, label)`` pairs, which replaces nested inl/inr
tagging.  The instance-author mapping to binary tags: an element ``inl x`` of
``A + B`` is ``(i, x)`` with ``i < len(A.wires)``, and ``inr y`` is
``(len(A.wires) + j, y)`` where ``(j, y)`` addresses ``y`` in ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError

El = tuple[int, str]


@dataclass(frozen=True)
class AtomicWire:
    """A named atomic tensor factor carrying a finite set of element labels.

    Wires used by the order-theoretic instance additionally carry a partial
    order ``leq`` (a set of label pairs) and a least element ``bottom``.
    """

    name: str
    elements: tuple[str, ...]
    leq: frozenset[tuple[str, str]] | None = None
    bottom: str | None = None

    def __post_init__(self):
        if not self.name:
            raise ValidationError("wire name must be nonempty")
        if len(set(self.elements)) != len(self.elements):
            raise ValidationError(f"wire {self.name!r} has duplicate element labels")
        if (self.leq is None) != (self.bottom is None):
            raise ValidationError(
                f"wire {self.name!r} must carry both an order and a bottom, or neither"
            )
        if self.leq is not None:
            self._check_order()

    def _check_order(self):
        els = set(self.elements)
        if self.bottom not in els:
            raise ValidationError(f"wire {self.name!r}: bottom {self.bottom!r} not an element")
        for a, b in self.leq:
            if a not in els or b not in els:
                raise ValidationError(f"wire {self.name!r}: order mentions unknown label ({a!r}, {b!r})")
        leq = self.leq
        for a in els:
            if (a, a) not in leq:
                raise ValidationError(f"wire {self.name!r}: order not reflexive at {a!r}")
            if (self.bottom, a) not in leq:
                raise ValidationError(f"wire {self.name!r}: bottom not below {a!r}")
        for a, b in leq:
            if a != b and (b, a) in leq:
                raise ValidationError(f"wire {self.name!r}: order not antisymmetric on {a!r}, {b!r}")
            for c, d in leq:
                if c == b and (a, d) not in leq:
                    raise ValidationError(
                        f"wire {self.name!r}: order not transitive through {a!r} <= {b!r} <= {d!r}"
                    )

    @property
    def ordered(self) -> bool:
        return self.leq is not None

    def le(self, a: str, b: str) -> bool:
        if self.leq is None:
            raise ValidationError(f"wire {self.name!r} carries no order")
        return (a, b) in self.leq


@dataclass(frozen=True)
class ObjectExpr:
    """A strictified tensor of atomic wires; the empty tuple is the unit."""

    wires: tuple[AtomicWire, ...] = ()

    def tensor(self, other: "ObjectExpr") -> "ObjectExpr":
        return ObjectExpr(self.wires + other.wires)

    @property
    def n_wires(self) -> int:
        return len(self.wires)

    def elements(self) -> tuple[El, ...]:
        return tuple((i, lab) for i, w in enumerate(self.wires) for lab in w.elements)

    @property
    def n_elements(self) -> int:
        return sum(len(w.elements) for w in self.wires)

    def element_index(self) -> dict[El, int]:
        return {e: k for k, e in enumerate(self.elements())}

    def split(self, n_wires: int) -> tuple["ObjectExpr", "ObjectExpr"]:
        return ObjectExpr(self.wires[:n_wires]), ObjectExpr(self.wires[n_wires:])

    def has_suffix(self, other: "ObjectExpr") -> bool:
        n = other.n_wires
        return n == 0 or self.wires[-n:] == other.wires

    def strip_suffix(self, other: "ObjectExpr") -> "ObjectExpr":
        if not self.has_suffix(other):
            raise ValidationError("object does not end with the requested suffix")
        return ObjectExpr(self.wires[: self.n_wires - other.n_wires])

    def contains_element(self, el: El) -> bool:
        i, lab = el
        return 0 <= i < self.n_wires and lab in self.wires[i].elements

    def render(self) -> str:
        if not self.wires:
            return "I"
        return " ".join(f"{w.name}[{' '.join(w.elements)}]" for w in self.wires)


UNIT = ObjectExpr(())


def shift(el: El, by: int) -> El:
    return (el[0] + by, el[1])


def tensor_all(objs) -> ObjectExpr:
    out = UNIT
    for o in objs:
        out = out.tensor(o)
    return out
