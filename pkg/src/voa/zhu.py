"""Zhu's associative algebra A_g(V) computed at a weight truncation.

``O_g(V) \\cap V_{<=N}`` is approximated from below by the span of ``u o v``
over basis pairs whose product stays inside weight ``N``, so quotient
dimensions are upper bounds. Representatives of quotient classes are the
basis monomials that are not pivots, with pivots chosen as the highest
monomial of each row; the reported per-weight dimensions count those.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .core import State, VoaContext, VoaError, add_scaled, floor_q, mode_terms
from .formal import Q, binom, format_rational
from .linalg import RowReducer


class ZhuError(VoaError):
    pass


@dataclass(frozen=True)
class AutomorphismSpec:
    """A basis-diagonal automorphism ``g`` of order ``r``: ``g m = e^{-2 pi i j(m)/r} m``."""

    order: int
    exponent: Callable
    name: str = "g"

    def j(self, mono) -> int:
        return self.exponent(mono) % self.order

    @classmethod
    def identity(cls) -> "AutomorphismSpec":
        return cls(1, lambda mono: 0, "identity")

    @classmethod
    def minus_one(cls) -> "AutomorphismSpec":
        """The lift of ``-1`` to M(1): ``b(i, -n) -> -b(i, -n)``."""
        return cls(2, lambda mono: len(mono[0]), "minus-one")


def _split_by_j(v: State, g: AutomorphismSpec) -> dict:
    parts: dict = {}
    for m, c in v.terms.items():
        parts.setdefault(g.j(m), {})[m] = c
    return {j: State._raw(v.space, t) for j, t in sorted(parts.items())}


def _homogeneous(u: State, g: AutomorphismSpec):
    """Yield ``(weight, j, component)`` over the graded, g-graded pieces of ``u``."""
    for w, comp in u.components().items():
        for j, piece in _split_by_j(comp, g).items():
            yield w, j, piece


def star(u: State, v: State, g: AutomorphismSpec | None = None) -> State:
    """``u * v = sum_i binom(wt u, i) u_{i-1} v`` for ``u`` in ``V^0``; zero on ``V^j``, ``j > 0``."""
    g = g or AutomorphismSpec.identity()
    ctx = v.space
    acc: dict = {}
    for w, j, uh in _homogeneous(u, g):
        if j:
            continue
        wt = floor_q(w)
        for i in range(wt + 1):
            add_scaled(acc, mode_terms(uh, i - 1, v.terms, ctx), binom(wt, i))
    return State._raw(ctx, acc)


def circ(u: State, v: State, g: AutomorphismSpec | None = None) -> State:
    """``u o v``: ``sum_i binom(wt u, i) u_{i-2} v`` on ``V^0``, and
    ``sum_i binom(wt u - 1 + j/r, i) u_{i-1} v`` on ``V^j`` with ``j > 0``."""
    g = g or AutomorphismSpec.identity()
    ctx = v.space
    acc: dict = {}
    vmax = v.max_weight()
    if vmax is None:
        return State._raw(ctx, acc)
    for w, j, uh in _homogeneous(u, g):
        if j == 0:
            wt = floor_q(w)
            for i in range(wt + 1):
                add_scaled(acc, mode_terms(uh, i - 2, v.terms, ctx), binom(wt, i))
        else:
            top = Q(w) - 1 + Q(j, g.order)
            for i in range(floor_q(w + vmax - ctx.min_weight) + 1):
                add_scaled(acc, mode_terms(uh, i - 1, v.terms, ctx), binom(top, i))
    return State._raw(ctx, acc)


@dataclass
class ZhuQuotient:
    """Truncated quotient ``V_{<=N} / (O_g-span + extra)`` with its ``*`` table."""

    ctx: VoaContext
    cap: int
    automorphism: AutomorphismSpec
    reducer: RowReducer
    basis: list
    dims: dict
    table: dict = field(default_factory=dict)
    stable: bool | None = None

    def reduce(self, v: State | dict) -> State:
        terms = v.terms if isinstance(v, State) else v
        if any(self.ctx.weight(m) > self.cap for m in terms):
            raise ZhuError("state lies beyond the truncation weight")
        return State._raw(self.ctx, self.reducer.reduce(terms))

    def is_zero(self, v: State) -> bool:
        return not self.reduce(v)

    def product(self, u: State, v: State) -> State:
        return self.reduce(star(u, v, self.automorphism))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def rows(self) -> list[tuple[str, str]]:
        """Deterministic ``key, value`` rows for reporting."""
        out = [("automorphism", self.automorphism.name), ("weight_cap", str(self.cap)),
               ("dimension", str(self.dimension))]
        for w in sorted(self.dims):
            out.append((f"dim[{format_rational(w)}]", str(self.dims[w])))
        fmt = self.ctx.format_mono
        for (a, b), val in sorted(self.table.items(),
                                  key=lambda kv: (self.ctx.sort_key(kv[0][0]),
                                                  self.ctx.sort_key(kv[0][1]))):
            out.append((f"[{fmt(a)}] * [{fmt(b)}]", str(State._raw(self.ctx, val))))
        out.append(("stable", "unknown" if self.stable is None else str(self.stable).lower()))
        return out


def _o_span(ctx: VoaContext, g: AutomorphismSpec, cap: int, extra=()) -> RowReducer:
    reducer = RowReducer(lambda m: (ctx.weight(m), ctx.sort_key(m)))
    monos = ctx.basis_upto(Q(cap))
    states = [(ctx.weight(m), g.j(m), State.basis(ctx, m)) for m in monos]
    for terms in extra:
        reducer.add(terms)
    for wu, ju, u in states:
        for wv, _, v in states:
            bound = wu + wv + (1 if ju == 0 else 0)
            if bound > cap:
                continue
            reducer.add(circ(u, v, g).terms)
    return reducer


def _dims(ctx, reducer, cap) -> tuple[list, dict]:
    basis = [m for m in ctx.basis_upto(Q(cap)) if m not in reducer.rows]
    dims: dict = {}
    for w in ctx.weights_upto(Q(cap)):
        dims[w] = sum(1 for m in basis if ctx.weight(m) == w)
    return basis, dims


def zhu_quotient(ctx: VoaContext, g: AutomorphismSpec | None = None, cap: int = 4,
                 extra: Callable[[int], list] | None = None, stabilization: bool = True,
                 products: bool = True) -> ZhuQuotient:
    """Truncated ``A_g(V)`` at weight ``cap``.

    ``extra(N)`` returns additional vectors (coefficient dicts) to quotient
    by, e.g. the weight ``<= N`` part of an ideal when ``ctx`` presents a
    quotient algebra. With ``stabilization`` the computation is repeated at
    ``cap + 2`` and the per-weight dimensions up to ``cap`` compared.
    """
    g = g or AutomorphismSpec.identity()
    cap = int(cap)
    if cap < 0:
        raise ZhuError("weight cap must be nonnegative")
    if Q(cap + (2 if stabilization else 0)) + 1 > ctx.truncation.weight_cap:
        raise ZhuError("Zhu truncation exceeds the context's weight cap")
    reducer = _o_span(ctx, g, cap, extra(cap) if extra else ())
    basis, dims = _dims(ctx, reducer, cap)
    quot = ZhuQuotient(ctx, cap, g, reducer, basis, dims)
    if products:
        for a in basis:
            for b in basis:
                if ctx.weight(a) + ctx.weight(b) <= cap:
                    prod = star(State.basis(ctx, a), State.basis(ctx, b), g)
                    quot.table[(a, b)] = reducer.reduce(prod.terms)
    if stabilization:
        big = _o_span(ctx, g, cap + 2, extra(cap + 2) if extra else ())
        _, dims2 = _dims(ctx, big, cap + 2)
        quot.stable = all(dims2.get(w) == d for w, d in dims.items())
    return quot


# ---------------------------------------------------------------------------
# top level

def top_level_basis(module) -> list:
    return module.basis_of_weight(module.min_weight)


def top_level_action(u: State, module, g: AutomorphismSpec | None = None) -> list[list]:
    """Matrix of ``o(u) = u_{wt u - 1}`` on the top level of ``module``.

    Columns are images of the top-level basis vectors; components of ``u``
    in ``V^j`` with ``j > 0`` contribute nothing.
    """
    g = g or AutomorphismSpec.identity()
    if u.is_zero():
        raise ZhuError("o(u) of the zero state is the zero map; pass a nonzero state")
    top = top_level_basis(module)
    index = {m: i for i, m in enumerate(top)}
    mat = [[Q(0)] * len(top) for _ in top]
    for w, j, uh in _homogeneous(u, g):
        if j:
            continue
        n = w - 1
        for col, m in enumerate(top):
            res = mode_terms(uh, n, {m: Q(1)}, module)
            for mm, c in res.items():
                if mm not in index:
                    raise ZhuError("o(u) left the top level")
                mat[index[mm]][col] += c
    return mat


def matmul(a: list, b: list) -> list:
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Q(0)) for j in range(n)] for i in range(n)]


def homomorphism_check(u: State, v: State, module, g: AutomorphismSpec | None = None) -> bool:
    """``o(u * v) = o(u) o(v)`` on the top level of ``module``."""
    prod = star(u, v, g)
    lhs = top_level_action(prod, module, g) if prod else [[Q(0)] * len(top_level_basis(module))
                                                        for _ in top_level_basis(module)]
    return lhs == matmul(top_level_action(u, module, g), top_level_action(v, module, g))

