"""Graded sparse states and the generic vertex-operator mode evaluator.

A *space* is a graded vector space with a canonical monomial basis on which
the generator fields of a vertex operator algebra act (the algebra itself or
one of its modules). A :class:`VoaContext` is a space that additionally knows
how to peel a basis monomial into ``g_a rest``, which drives the recursive
evaluation of composite vertex operators through the iterate formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping

from .formal import Q, format_rational, int_binom, rational

Monomial = Hashable


class VoaError(Exception):
    """Base class for all errors raised by the package."""


class WeightCapExceeded(VoaError):
    def __init__(self, weight, cap):
        super().__init__(f"weight {format_rational(weight)} exceeds weight cap {format_rational(cap)}")
        self.weight = weight
        self.cap = cap


class UnknownMonomial(VoaError):
    pass


class ZeroStateError(VoaError):
    pass


class _Inhomogeneous:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inhomogeneous"

    __str__ = __repr__


INHOMOGENEOUS = _Inhomogeneous()


def floor_q(x) -> int:
    x = Q(x)
    return int(x.numerator // x.denominator)


@dataclass(frozen=True)
class TruncationPolicy:
    """Weight cap on every intermediate state and a default mode window."""

    weight_cap: object = Q(30)
    mode_window: int = 4

    def __post_init__(self):
        cap = rational(self.weight_cap)
        if cap < 0 or self.mode_window < 0:
            raise ValueError("truncation bounds must be nonnegative")
        object.__setattr__(self, "weight_cap", cap)


# ---------------------------------------------------------------------------
# raw sparse dictionaries

def add_scaled(acc: dict, terms: Mapping, scale=1) -> None:
    """``acc += scale * terms`` in place, dropping cancelled entries."""
    if not scale:
        return
    get = acc.get
    if scale == 1:
        for m, c in terms.items():
            v = get(m, 0) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return
    for m, c in terms.items():
        v = get(m, 0) + scale * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def compact(terms: dict) -> dict:
    """Store integral coefficients as ``int``, which is faster to combine."""
    return {m: (int(c) if c.denominator == 1 else c) for m, c in terms.items() if c}


def scaled(terms: Mapping, scale) -> dict:
    if scale == 0:
        return {}
    return {m: scale * c for m, c in terms.items()}


class State:
    """Finite sparse linear combination of basis monomials of one space."""

    __slots__ = ("space", "terms")

    def __init__(self, space: "Space", terms: Mapping | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Q(c)
            if c:
                clean[m] = c
        self.space = space
        self.terms = clean

    @classmethod
    def _raw(cls, space, terms: dict) -> "State":
        s = object.__new__(cls)
        s.space = space
        s.terms = {m: Q(c) for m, c in terms.items() if c}
        return s

    @classmethod
    def basis(cls, space, mono) -> "State":
        return cls._raw(space, {mono: 1})

    def _same(self, other: "State"):
        if not isinstance(other, State):
            raise TypeError("expected a State")
        if other.space is not self.space:
            raise VoaError("states belong to different spaces")

    def __add__(self, other):
        self._same(other)
        acc = dict(self.terms)
        add_scaled(acc, other.terms)
        return State._raw(self.space, acc)

    def __sub__(self, other):
        self._same(other)
        acc = dict(self.terms)
        add_scaled(acc, other.terms, -1)
        return State._raw(self.space, acc)

    def __neg__(self):
        return State._raw(self.space, scaled(self.terms, -1))

    def __mul__(self, scalar):
        if isinstance(scalar, State):
            return NotImplemented
        return State._raw(self.space, scaled(self.terms, rational(scalar)))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, State):
            return NotImplemented
        return self.space is other.space and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def coefficient(self, mono) -> Q:
        return self.terms.get(mono, Q(0))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: self.space.sort_key(mc[0]))

    def components(self) -> dict:
        """Split into homogeneous components keyed by weight."""
        parts: dict = {}
        for m, c in self.terms.items():
            parts.setdefault(self.space.weight(m), {})[m] = c
        return {w: State._raw(self.space, t) for w, t in sorted(parts.items())}

    def max_weight(self):
        return max(self.space.weight(m) for m in self.terms) if self.terms else None

    def __str__(self):
        return self.space.format_state(self)

    def __repr__(self):
        return f"State({self})"


def weight(v: State):
    """Common L(0)-eigenvalue of the terms of ``v`` or :data:`INHOMOGENEOUS`."""
    if v.is_zero():
        raise ZeroStateError("the zero state has no weight")
    weights = {v.space.weight(m) for m in v.terms}
    if len(weights) > 1:
        return INHOMOGENEOUS
    return weights.pop()


# ---------------------------------------------------------------------------
# spaces

class Space:
    """A graded space with a canonical monomial basis acted on by generator modes.

    Subclasses implement ``weight``, ``basis_of_weight``, ``_generator_mode``,
    ``format_mono`` and ``sort_key``; ``voa`` is the algebra acting.
    """

    name = "space"
    min_weight = Q(0)
    voa: "VoaContext"
    top_mono: Monomial = None
    mode_evaluator = None

    def __init__(self):
        self._gen_cache: dict = {}
        self._mode_cache: dict = {}
        self.use_cache = True

    # -- grading ------------------------------------------------------------
    def weight(self, mono) -> Q:
        raise NotImplementedError

    def basis_of_weight(self, w) -> list:
        raise NotImplementedError

    def weights_upto(self, cap) -> list:
        """Occurring weights ``min_weight + k <= cap``."""
        out, w = [], Q(self.min_weight)
        while w <= cap:
            out.append(w)
            w += 1
        return out

    def basis_upto(self, cap) -> list:
        return [m for w in self.weights_upto(cap) for m in self.basis_of_weight(w)]

    def graded_dimension(self, w) -> int:
        return len(self.basis_of_weight(Q(w)))

    def check_mono(self, mono) -> None:
        """Raise :class:`UnknownMonomial` unless ``mono`` is a canonical basis element."""
        try:
            w = self.weight(mono)
        except Exception as exc:  # malformed tuples and the like
            raise UnknownMonomial(f"{mono!r} is not a monomial of {self.name}") from exc
        if mono not in set(self.basis_of_weight(w)):
            raise UnknownMonomial(f"{mono!r} is not a canonical monomial of {self.name}")

    @property
    def cap(self):
        return self.voa.truncation.weight_cap

    # -- states -------------------------------------------------------------
    def state(self, terms: Mapping | None = None) -> State:
        return State(self, terms)

    def mono_state(self, mono) -> State:
        return State.basis(self, mono)

    def top(self) -> State:
        return State.basis(self, self.top_mono)

    def zero(self) -> State:
        return State._raw(self, {})

    def sort_key(self, mono):
        return (self.weight(mono), mono)

    def format_mono(self, mono) -> str:
        raise NotImplementedError

    def format_state(self, s: State) -> str:
        if s.is_zero():
            return "0"
        pieces = []
        for mono, c in s.sorted_terms():
            neg = c < 0
            a = -c if neg else c
            body = self.format_mono(mono)
            text = body if a == 1 else f"{format_rational(a)} * {body}"
            if not pieces:
                pieces.append(f"-{text}" if neg else text)
            else:
                pieces.append(f" - {text}" if neg else f" + {text}")
        return "".join(pieces)

    # -- generator actions --------------------------------------------------
    def generator_mode(self, gen, n, mono) -> dict:
        """``gen_n`` applied to a basis monomial; result must not be mutated."""
        key = (gen, n, mono)
        if self.use_cache:
            hit = self._gen_cache.get(key)
            if hit is not None:
                return hit
        target = self.voa.gen_weight(gen) + self.weight(mono) - n - 1
        if target < self.min_weight:
            res = {}
        else:
            if target > self.cap:
                raise WeightCapExceeded(target, self.cap)
            res = compact(self._generator_mode(gen, n, mono))
        if self.use_cache:
            self._gen_cache[key] = res
        return res

    def _generator_mode(self, gen, n, mono) -> dict:
        raise NotImplementedError

    def apply_generator(self, gen, n, terms: Mapping) -> dict:
        acc: dict = {}
        for m, c in terms.items():
            add_scaled(acc, self.generator_mode(gen, n, m), c)
        return acc

    def clear_caches(self):
        self._gen_cache.clear()
        self._mode_cache.clear()


class VoaContext(Space):
    """A vertex operator algebra given by generators and a recursive basis.

    Subclasses provide ``vacuum_mono``, ``omega``, ``central_charge``,
    ``generators`` (generator -> weight), ``generator_of(mono)`` and
    ``split(mono) -> (gen, a, rest)`` with ``mono = gen_a rest``.
    """

    construction = "abstract"
    period = 1
    vacuum_mono: Monomial = None
    central_charge = Q(0)
    generators: dict = {}

    def __init__(self, truncation: TruncationPolicy | None = None):
        super().__init__()
        self.truncation = truncation or TruncationPolicy()
        self.voa = self

    @property
    def top_mono(self):
        return self.vacuum_mono

    def vacuum(self) -> State:
        return State.basis(self, self.vacuum_mono)

    @property
    def omega(self) -> State:
        raise NotImplementedError

    def gen_weight(self, gen) -> Q:
        return self.generators[gen]

    def generator_of(self, mono):
        raise NotImplementedError

    def split(self, mono):
        raise NotImplementedError

    def generator_state(self, gen) -> State:
        raise NotImplementedError

    def metadata(self) -> dict:
        return {"construction": self.construction,
                "central_charge": format_rational(self.central_charge)}


# ---------------------------------------------------------------------------
# the evaluator

def _mono_mode(ctx: VoaContext, space: Space, umono, n, wmono) -> dict:
    """``u_n w`` for basis monomials ``u`` of ``ctx`` and ``w`` of ``space``."""
    key = (umono, n, wmono)
    cache = space._mode_cache
    if space.use_cache:
        hit = cache.get(key)
        if hit is not None:
            return hit
    if umono == ctx.vacuum_mono:
        res = {wmono: Q(1)} if n == -1 else {}
    else:
        target = ctx.weight(umono) + space.weight(wmono) - n - 1
        if target < space.min_weight:
            res = {}
        elif target > space.cap:
            raise WeightCapExceeded(target, space.cap)
        else:
            gen = ctx.generator_of(umono)
            if gen is not None:
                res = space.generator_mode(gen, n, wmono)
            else:
                res = compact(_iterate(ctx, space, umono, n, wmono))
    if space.use_cache:
        cache[key] = res
    return res


def _iterate(ctx, space, umono, n, wmono) -> dict:
    # (g_a v)_n w = sum_i (-1)^i C(a,i) [g_{a-i} v_{n+i} w - (-1)^a v_{a+n-i} g_i w]
    g, a, rest = ctx.split(umono)
    wg = ctx.gen_weight(g)
    wr = ctx.weight(rest)
    ww = space.weight(wmono)
    lowest = space.min_weight
    acc: dict = {}
    imax = floor_q(wr + ww - n - 1 - lowest)
    for i in range(imax + 1):
        c = (-1) ** i * int_binom(a, i)
        if not c:
            continue
        inner = _mono_mode(ctx, space, rest, n + i, wmono)
        for m, x in inner.items():
            add_scaled(acc, space.generator_mode(g, a - i, m), c * x)
    sign = -1 if a % 2 == 0 else 1
    imax = floor_q(wg + ww - 1 - lowest)
    for i in range(imax + 1):
        c = sign * (-1) ** i * int_binom(a, i)
        if not c:
            continue
        inner = space.generator_mode(g, i, wmono)
        for m, x in inner.items():
            add_scaled(acc, _mono_mode(ctx, space, rest, a + n - i, m), c * x)
    return acc


def _normalize_index(n):
    q = Q(n)
    return int(q) if q.denominator == 1 else q


def mode_terms(u: State, n, terms: Mapping, space: Space) -> dict:
    """Raw version of :func:`mode_action` on a coefficient dictionary."""
    ctx = u.space
    n = _normalize_index(n)
    evaluator = getattr(space, "mode_evaluator", None)
    acc: dict = {}
    for um, uc in u.terms.items():
        for wm, wc in terms.items():
            if evaluator is not None:
                res = evaluator(um, n, wm)
            else:
                res = _mono_mode(ctx, space, um, n, wm)
            add_scaled(acc, res, uc * wc)
    return acc


def mode_action(u: State, n, w: State) -> State:
    """Return ``u_n w``.

    ``u`` lives in a :class:`VoaContext`; ``w`` in that context or in one of
    its modules. Generators are delegated to the backend and composite
    monomials go through the iterate formula, recursing on the first factor.
    """
    ctx = u.space
    if not isinstance(ctx, VoaContext):
        raise VoaError("the left argument must be a state of a vertex operator algebra")
    if w.space.voa is not ctx:
        raise VoaError("w is not a state of a module for u's algebra")
    return State._raw(w.space, mode_terms(u, n, w.terms, w.space))


def virasoro_mode(n: int, w: State) -> State:
    """``L(n) w = omega_{n+1} w``."""
    return mode_action(w.space.voa.omega, n + 1, w)


def graded_dimension(space: Space, w) -> int:
    return space.graded_dimension(rational(w))


def iter_basis_states(space: Space, cap) -> Iterable[State]:
    for m in space.basis_upto(rational(cap)):
        yield State.basis(space, m)

