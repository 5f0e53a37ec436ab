"""The term language for wiring diagrams.

Grammar::

    term   :=  tens (';' tens)*              sequential composition
    tens   :=  atom ('*' atom)*              parallel composition
    atom   :=  'id' '[' NAME ']'
            |  'sym' '[' NAME ',' NAME ']'
            |  'tr' '[' NAME ']' '(' term ')'
            |  NAME                           a named generator
            |  '(' term ')'

``;`` binds looser than ``*``; both associate to the left.  Names refer to
workspace objects (inside brackets) or generators (bare) and may contain
letters, digits, ``_`` and interior ``-``.  ``tr[U]`` feeds back a suffix
``U`` of the body's endpoints; feeding back other wires takes an explicit
``sym`` first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError

Pos = tuple[int, int]


@dataclass(frozen=True)
class Id:
    obj: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Sym:
    left: str
    right: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Gen:
    name: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Seq:
    first: object
    second: object
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Trace:
    over: str
    body: object
    pos: Pos = field(default=(0, 0), compare=False)


_PUNCT = ";*()[],"


def _tokenize(text: str):
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch in _PUNCT:
            toks.append((ch, ch, (line, col)))
            col += 1
            i += 1
        elif ch.isalnum() or ch == "_":
            start = i
            start_col = col
            while i < len(text) and (text[i].isalnum() or text[i] in "_-"):
                i += 1
                col += 1
            name = text[start:i]
            if name.endswith("-"):
                raise ParseError(f"name {name!r} may not end with '-'", line, start_col)
            toks.append(("name", name, (line, start_col)))
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(("eof", "", (line, col)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            shown = tok[1] or "end of input"
            raise ParseError(f"expected {kind!r}, found {shown!r}", *tok[2])
        return tok

    def term(self):
        t = self.tens()
        while self.peek()[0] == ";":
            pos = self.next()[2]
            t = Seq(t, self.tens(), pos)
        return t

    def tens(self):
        t = self.atom()
        while self.peek()[0] == "*":
            pos = self.next()[2]
            t = Tensor(t, self.atom(), pos)
        return t

    def atom(self):
        kind, val, pos = self.next()
        if kind == "(":
            t = self.term()
            self.expect(")")
            return t
        if kind != "name":
            shown = val or "end of input"
            raise ParseError(f"expected a term, found {shown!r}", *pos)
        if val == "id" and self.peek()[0] == "[":
            self.next()
            obj = self.expect("name")[1]
            self.expect("]")
            return Id(obj, pos)
        if val == "sym" and self.peek()[0] == "[":
            self.next()
            a = self.expect("name")[1]
            self.expect(",")
            b = self.expect("name")[1]
            self.expect("]")
            return Sym(a, b, pos)
        if val == "tr" and self.peek()[0] == "[":
            self.next()
            over = self.expect("name")[1]
            self.expect("]")
            self.expect("(")
            body = self.term()
            self.expect(")")
            return Trace(over, body, pos)
        return Gen(val, pos)


def parse_term(text: str):
    p = _Parser(text)
    t = p.term()
    tok = p.peek()
    if tok[0] != "eof":
        shown = tok[1] or "end of input"
        raise ParseError(f"trailing input starting at {shown!r}", *tok[2])
    return t


def print_term(t) -> str:
    """Canonical rendering; reparses to an equal tree."""
    if isinstance(t, Id):
        return f"id[{t.obj}]"
    if isinstance(t, Sym):
        return f"sym[{t.left},{t.right}]"
    if isinstance(t, Gen):
        return t.name
    if isinstance(t, Trace):
        return f"tr[{t.over}]({print_term(t.body)})"
    if isinstance(t, Seq):
        second = print_term(t.second)
        if isinstance(t.second, Seq):
            second = f"({second})"
        return f"{print_term(t.first)} ; {second}"
    if isinstance(t, Tensor):
        left = print_term(t.left)
        right = print_term(t.right)
        if isinstance(t.left, Seq):
            left = f"({left})"
        if isinstance(t.right, (Seq, Tensor)):
            right = f"({right})"
        return f"{left} * {right}"
    raise TypeError(f"not a term: {t!r}")
