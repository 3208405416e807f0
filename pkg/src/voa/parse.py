"""Reading and printing states in the text notation used by the CLI.

    state  := '0' | ['-'] term (('+' | '-') term)*
    term   := [rational ['*']] factor* '|0>'
    factor := name '(' args ')' ['^' posint]
    args   := int | idx ',' int | rational (',' rational)*

Factors act right to left on the lowest vector of the target space:
``b(i,n)`` are Heisenberg modes, ``L(n)`` Virasoro modes, ``x(n)`` affine
currents for each basis element ``x`` of the Lie algebra, and ``E(v)``
(rightmost only) picks the lattice vector ``v`` in lattice coordinates.
Whitespace is ignored and U+2212 is accepted as a minus sign.
"""

from __future__ import annotations

from .core import Space, State, VoaError, add_scaled
from .formal import Q
from .heisenberg import heis_mode


class ParseError(VoaError):
    """Syntax or vocabulary error at a 1-based column of the input."""

    def __init__(self, message: str, column: int, text: str = ""):
        super().__init__(f"column {column}: {message}")
        self.message = message
        self.column = column
        self.text = text


class _Reader:
    def __init__(self, text: str):
        self.text = text.replace("−", "-")
        self.pos = 0

    def error(self, message, pos=None):
        return ParseError(message, (self.pos if pos is None else pos) + 1, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at(self, literal: str) -> bool:
        self.skip()
        return self.text.startswith(literal, self.pos)

    def expect(self, literal: str):
        if not self.at(literal):
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            raise self.error(f"expected {literal!r}, found {found}")
        self.pos += len(literal)

    def integer(self) -> int:
        self.skip()
        start = self.pos
        sign = ""
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            sign = self.text[self.pos]
            self.pos += 1
            self.skip()
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            raise self.error("expected an integer")
        return int(sign + self.text[digits:self.pos])

    def rational(self) -> Q:
        num = self.integer()
        if self.at("/"):
            self.pos += 1
            self.skip()
            pos = self.pos
            den = self.integer()
            if den <= 0:
                raise self.error("denominator must be positive", pos)
            return Q(num, den)
        return Q(num)

    def name(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a generator name or '|0>'")
        return self.text[start:self.pos]


def _number_ahead(r: _Reader) -> bool:
    c = r.peek()
    return c.isdigit()


def parse_state(text: str, space: Space) -> State:
    """Parse ``text`` into a canonical state of ``space``."""
    r = _Reader(text)
    if r.text.strip() == "0":
        return space.zero()
    acc: dict = {}
    sign = 1
    if r.at("-"):
        r.pos += 1
        sign = -1
    elif r.at("+"):
        r.pos += 1
    while True:
        add_scaled(acc, _term(r, space), sign)
        r.skip()
        if r.pos >= len(r.text):
            break
        if r.at("+"):
            sign = 1
        elif r.at("-"):
            sign = -1
        else:
            raise r.error(f"expected '+', '-' or end of input, found {r.text[r.pos]!r}")
        r.pos += 1
        if not r.peek():
            raise r.error("expected a term")
    return State(space, acc)


def _term(r: _Reader, space: Space) -> dict:
    coeff = Q(1)
    if _number_ahead(r):
        coeff = r.rational()
        if r.at("*"):
            r.pos += 1
    factors = []
    while not r.at("|0>"):
        if not r.peek():
            raise r.error("expected a factor or '|0>'")
        r.skip()
        start = r.pos
        name = r.name()
        r.expect("(")
        args = [r.rational()]
        while r.at(","):
            r.pos += 1
            args.append(r.rational())
        r.expect(")")
        power = 1
        if r.at("^"):
            r.pos += 1
            r.skip()
            pos = r.pos
            power = r.integer()
            if power < 1:
                raise r.error("exponent must be a positive integer", pos)
        factors.append((name, args, power, start))
    r.expect("|0>")
    return _build(r, space, coeff, factors)


def _build(r: _Reader, space: Space, coeff, factors) -> dict:
    voa = space.voa
    construction = voa.construction
    top = space.top_mono
    if factors and factors[-1][0] == "E":
        name, args, power, pos = factors.pop()
        if construction != "lattice":
            raise r.error("E(...) is only available for lattice constructions", pos)
        if power != 1:
            raise r.error("E(...) cannot be raised to a power", pos)
        if len(args) != space.rank:
            raise r.error(f"E(...) needs {space.rank} coordinates", pos)
        vec = tuple(Q(a) for a in args)
        diff = [a - s for a, s in zip(vec, space.shift)]
        if any(d.denominator != 1 for d in diff):
            raise r.error("lattice vector is not in this space's coset", pos)
        top = ((), vec)
    elif construction == "lattice" and any(space.shift):
        raise r.error("this module has no zero vector; name the lattice vector with E(...)")
    terms: dict = {top: Q(coeff)}
    for name, args, power, pos in reversed(factors):
        op = _operator(r, space, name, args, pos)
        for _ in range(power):
            new: dict = {}
            for m, c in terms.items():
                add_scaled(new, op(m), c)
            terms = new
    return terms


def _mode_arg(r, x, pos) -> int:
    if x.denominator != 1:
        raise r.error("mode indices must be integers", pos)
    return int(x)


def _operator(r: _Reader, space: Space, name: str, args, pos):
    voa = space.voa
    construction = voa.construction
    if name == "E":
        raise r.error("E(...) must be the rightmost factor", pos)
    if construction in ("heisenberg", "lattice") and name == "b":
        if len(args) != 2:
            raise r.error("b(i,n) takes an index and a mode", pos)
        i = _mode_arg(r, args[0], pos)
        if not 1 <= i <= space.rank:
            raise r.error(f"index {i} is out of range 1..{space.rank}", pos)
        n = _mode_arg(r, args[1], pos)
        return lambda m: heis_mode(space.gram, i - 1, n, m)
    if construction == "virasoro" and name == "L":
        if len(args) != 1:
            raise r.error("L(n) takes one mode index", pos)
        n = _mode_arg(r, args[0], pos)
        return lambda m: space.apply_l(n, m)
    if construction == "affine" and name in voa.spec.basis:
        if len(args) != 1:
            raise r.error(f"{name}(n) takes one mode index", pos)
        n = _mode_arg(r, args[0], pos)
        x = voa.spec.index(name)
        return lambda m: voa.apply_x(x, n, m)
    raise r.error(f"unknown generator {name!r} for the {construction} construction", pos)


def format_state(state: State) -> str:
    return state.space.format_state(state)
