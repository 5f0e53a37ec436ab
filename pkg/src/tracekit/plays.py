"""Extensional play sets for polarized transducer morphisms.

A move is a triple ``(component, sign, element)``: ``component`` numbers the
interface the move belongs to (1 = source end, 2 = target end of a morphism;
1/2/3 during a three-party interaction), ``sign`` is ``'+'`` for moves owed
by the morphism and ``'-'`` for moves owed to it, and ``element`` is a
``(wire, label)`` pair relative to that interface side.  A play is a tuple
of moves alternating environment/system, and a strategy is the prefix-closed
set of its even-length plays.

Text format (one play per line, blank line = the empty play)::

    <comp>:<sign>:<wire>.<label>  tokens separated by single spaces

``par_hide`` implements composition at the play level: interleave two play
sets over a shared middle interface, keeping only sequences whose adjacent
moves stay within neighbouring components, then erase the middle moves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ShapeError, ValidationError
from .intcat import IntObject
from .objects import El, ObjectExpr
from .transducer import Transducer

Move = tuple[int, str, El]
Play = tuple[Move, ...]


def dom_move(el: El, src: IntObject, dst: IntObject) -> Move:
    n = src.pos.n_wires
    if el[0] < n:
        return (1, "+", el)
    return (2, "-", (el[0] - n, el[1]))


def cod_move(el: El, src: IntObject, dst: IntObject) -> Move:
    n = src.neg.n_wires
    if el[0] < n:
        return (1, "-", el)
    return (2, "+", (el[0] - n, el[1]))


def dom_element(m: Move, src: IntObject, dst: IntObject) -> El:
    comp, sign, el = m
    if comp == 1 and sign == "+":
        return el
    if comp == 2 and sign == "-":
        return (el[0] + src.pos.n_wires, el[1])
    raise ValidationError(f"move {m} is not an environment move of this morphism")


def cod_element(m: Move, src: IntObject, dst: IntObject) -> El:
    comp, sign, el = m
    if comp == 1 and sign == "-":
        return el
    if comp == 2 and sign == "+":
        return (el[0] + src.neg.n_wires, el[1])
    raise ValidationError(f"move {m} is not a system move of this morphism")


def side_moves(game: IntObject, comp: int):
    out = [(comp, "+", e) for e in game.pos.elements()]
    out += [(comp, "-", e) for e in game.neg.elements()]
    return out


class PlaysBase:
    """Prefix-membership interface shared by explicit and machine-backed sets."""

    ends: tuple[IntObject, IntObject]

    def admits(self, seq: Play) -> bool:
        raise NotImplementedError

    def contains(self, play: Play) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class PlaySet(PlaysBase):
    """An explicit finite set of plays with a nominal depth bound."""

    ends: tuple[IntObject, IntObject]
    plays: frozenset
    depth: int | None = None
    _prefixes: frozenset = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        prefixes = set()
        for p in self.plays:
            for k in range(len(p) + 1):
                prefixes.add(p[:k])
        object.__setattr__(self, "_prefixes", frozenset(prefixes))

    def admits(self, seq):
        return seq in self._prefixes

    def contains(self, play):
        return play in self.plays

    @property
    def max_len(self):
        return max((len(p) for p in self.plays), default=0)

    def is_prefix_closed(self) -> bool:
        return all(p[:k] in self.plays for p in self.plays for k in range(0, len(p) + 1, 2))

    def is_deterministic(self) -> bool:
        responses = {}
        for p in self.plays:
            for k in range(1, len(p), 2):
                prefix, resp = p[:k], p[k]
                if responses.setdefault(prefix, resp) != resp:
                    return False
        return True


@dataclass
class StrategyPlays(PlaysBase):
    """The play set of a machine, queried lazily by replaying prefixes."""

    core: Transducer
    src: IntObject
    dst: IntObject

    def __post_init__(self):
        if self.core.dom != self.src.pos.tensor(self.dst.neg):
            raise ShapeError("machine domain does not match the polarized endpoints")
        if self.core.cod != self.src.neg.tensor(self.dst.pos):
            raise ShapeError("machine codomain does not match the polarized endpoints")

    @property
    def ends(self):
        return (self.src, self.dst)

    @property
    def n_states(self):
        return self.core.n_states

    def admits(self, seq):
        q = self.core.initial
        i = 0
        while i < len(seq):
            try:
                x = dom_element(seq[i], self.src, self.dst)
            except ValidationError:
                return False
            step = self.core.delta.get((q, x))
            if step is None:
                return False
            if i + 1 == len(seq):
                return True
            if cod_move(step[0], self.src, self.dst) != seq[i + 1]:
                return False
            q = step[1]
            i += 2
        return True

    def contains(self, play):
        return len(play) % 2 == 0 and self.admits(play)


def morphism_plays(core: Transducer, src: IntObject, dst: IntObject, depth: int) -> PlaySet:
    """Materialize the plays of a polarized machine to the given round depth."""
    lazy = StrategyPlays(core, src, dst)
    acc = {()}
    frontier = [((), core.initial)]
    for _ in range(depth):
        nxt = []
        for seq, q in frontier:
            for x in core.dom.elements():
                step = core.delta.get((q, x))
                if step is None:
                    continue
                seq2 = seq + (dom_move(x, src, dst), cod_move(step[0], src, dst))
                acc.add(seq2)
                nxt.append((seq2, step[1]))
        frontier = nxt
        if not frontier:
            break
    return PlaySet((src, dst), frozenset(acc), depth)


def copycat_plays(x: ObjectExpr, depth: int) -> PlaySet:
    """Plays of the echo strategy on the one-sided game over ``x``: each
    system move repeats the preceding environment move on the dual wire."""
    from .objects import UNIT

    game = IntObject(x, UNIT)
    acc = {()}
    frontier = [()]
    for _ in range(depth):
        nxt = []
        for seq in frontier:
            for e in x.elements():
                seq2 = seq + ((1, "+", e), (2, "+", e))
                acc.add(seq2)
                nxt.append(seq2)
        frontier = nxt
    return PlaySet((game, game), frozenset(acc), depth)


def interleaving_ok(seq) -> bool:
    """True when adjacent moves stay within neighbouring components.  Accepts
    either full moves or bare component numbers."""
    comps = [m[0] if isinstance(m, tuple) else m for m in seq]
    return all(abs(a - b) <= 1 for a, b in zip(comps, comps[1:]))


def _restrict_12(m: Move):
    return m if m[0] <= 2 else None


def _hidden_cap(s: PlaysBase, t: PlaysBase) -> int:
    caps = []
    if isinstance(s, StrategyPlays) and isinstance(t, StrategyPlays):
        b = s.ends[1]
        n_b = b.pos.n_elements + b.neg.n_elements
        caps.append(2 * s.n_states * t.n_states * max(n_b, 1) + 2)
    if isinstance(s, PlaySet):
        caps.append(s.max_len)
    if isinstance(t, PlaySet):
        caps.append(t.max_len)
    if not caps:
        raise ValidationError("cannot infer a hidden-run bound; pass max_hidden")
    return min(caps)


def par_hide(s: PlaysBase, t: PlaysBase, depth: int, max_hidden: int | None = None) -> PlaySet:
    """Parallel composition plus hiding.

    Interleaves the two play sets over components (1, 2, 3) where 2 is the
    shared middle interface, keeps sequences whose (1,2)- and (2,3)-
    restrictions are admitted, and projects completed interactions to the
    outer components.  The result is tagged (1, 2) as the play set of the
    composite morphism.

    The component-adjacency condition (see ``interleaving_ok``) expresses
    that the information token cannot jump between the outer ends without
    passing through the middle; it applies while a token is in flight, i.e.
    at mid-round positions.  Interactions are single-threaded: a new
    environment question may open only at quiescent positions (an even
    number of visible moves, every question answered, no token in flight),
    and there it may open on either outer end.

    ``max_hidden`` bounds consecutive middle moves; the default is safe for
    the given inputs (a deterministic middle dialogue longer than the bound
    must repeat a configuration and can never complete).
    """
    a, b = s.ends
    b2, c = t.ends
    if b != b2:
        raise ShapeError("middle interfaces do not match")
    if max_hidden is None:
        max_hidden = _hidden_cap(s, t)

    moves = side_moves(a, 1) + side_moves(b, 2) + side_moves(c, 3)
    out = set()
    # search state: last component, restrictions in each machine's own frame,
    # visible projection, current run of middle moves
    start = (0, (), (), (), 0)
    stack = [start]
    seen = {start}
    while stack:
        last, r1, r2, proj, hidden = stack.pop()
        if len(r1) % 2 == 0 and len(r2) % 2 == 0 and s.contains(r1) and t.contains(r2):
            out.add(proj)
        for m in moves:
            comp, sign = m[0], m[1]
            mid_round = len(proj) % 2 == 1
            if comp == 2:
                # hidden move: only while a token is in flight
                if not mid_round or hidden >= max_hidden:
                    continue
            elif (comp == 1) == (sign == "+"):
                # environment question: only at quiescence, within the depth
                if mid_round or len(proj) >= 2 * depth:
                    continue
            else:
                # system answer: closes the open round, token-local
                if not mid_round or abs(comp - last) > 1:
                    continue
            n_r1, n_r2, n_proj = r1, r2, proj
            if comp <= 2:
                n_r1 = r1 + (m,)
                if not s.admits(n_r1):
                    continue
            if comp >= 2:
                retag = (m[0] - 1, m[1], m[2])
                n_r2 = r2 + (retag,)
                if not t.admits(n_r2):
                    continue
            if comp != 2:
                n_proj = proj + ((1 if comp == 1 else 2, m[1], m[2]),)
            node = (comp, n_r1, n_r2, n_proj, hidden + 1 if comp == 2 else 0)
            if node not in seen:
                seen.add(node)
                stack.append(node)
    return PlaySet((a, c), frozenset(out), depth)


@dataclass
class SafetyResult:
    holds: bool
    witness: Play | None = None

    def __bool__(self):
        return self.holds


def safety_check(s: PlaySet, prop: PlaySet) -> SafetyResult:
    """Containment of a strategy's plays in a prefix-closed property."""
    if s.ends != prop.ends:
        raise ShapeError("safety property is over different interfaces")
    bad = [p for p in s.plays if p not in prop.plays]
    if not bad:
        return SafetyResult(True)
    return SafetyResult(False, min(bad, key=lambda p: (len(p), p)))


def format_move(m: Move) -> str:
    comp, sign, (w, lab) = m
    return f"{comp}:{sign}:{w}.{lab}"


def parse_move(tok: str) -> Move:
    try:
        comp, sign, el = tok.split(":")
        w, lab = el.split(".", 1)
        if sign not in "+-":
            raise ValueError(sign)
        return (int(comp), sign, (int(w), lab))
    except ValueError as exc:
        raise ValidationError(f"bad move token {tok!r}") from exc


def format_playset(ps: PlaySet) -> str:
    lines = []
    for p in sorted(ps.plays, key=lambda p: (len(p), p)):
        lines.append(" ".join(format_move(m) for m in p))
    return "\n".join(lines)


def parse_plays(text: str) -> frozenset:
    plays = {()}  # prefix-closed sets always contain the empty play
    for line in text.splitlines():
        line = line.strip()
        if line:
            plays.add(tuple(parse_move(tok) for tok in line.split()))
    return frozenset(plays)
