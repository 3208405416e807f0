"""Coefficient-level checks of the vertex operator algebra axioms and their consequences.

Every check returns a :class:`CheckResult`, truthy on success, carrying the
first differing state on failure. All sums are finite: bounds come from the
truncation property ``u_n w = 0`` once ``wt u + wt w - n - 1`` drops below
the lowest weight of the space.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .core import (State, VoaContext, VoaError, _mono_mode, add_scaled, floor_q, mode_terms,
                   virasoro_mode)
from .formal import Q, binom, int_binom


class PreconditionError(VoaError):
    """A check's hypothesis does not hold, as opposed to the check failing."""


@dataclass
class CheckResult:
    name: str
    ok: bool
    counterexample: State | None = None
    where: dict = field(default_factory=dict)
    count: int = 0

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"{self.name}: ok ({self.count} identities)"
        loc = ", ".join(f"{k}={v}" for k, v in self.where.items())
        return f"{self.name}: FAILED at {loc}; difference {self.counterexample}"


def _fail(name, diff, space, count, **where) -> CheckResult:
    return CheckResult(name, False, State._raw(space, diff),
                       {k: str(v) for k, v in where.items()}, count)


def _ok(name, count) -> CheckResult:
    return CheckResult(name, True, None, {}, count)


def homogeneous_parts(v: State) -> list[State]:
    """Homogeneous components of ``v`` (empty for the zero state)."""
    return list(v.components().values())


def _top(terms: dict, space):
    return max(space.weight(m) for m in terms) if terms else None


def _act(u: State, n, terms: dict, space) -> dict:
    if not terms:
        return {}
    return mode_terms(u, n, terms, space)


def _sub(a: dict, b: dict) -> dict:
    acc = dict(a)
    add_scaled(acc, b, -1)
    return acc


def _reducer(reduce):
    return reduce if reduce is not None else (lambda t: t)


# ---------------------------------------------------------------------------
# Borcherds-type identities

def commutator_terms(u: State, v: State, s, t, w: State) -> tuple[dict, dict]:
    """Both sides of ``[u_s, v_t] w = sum_m binom(s, m) (u_m v)_{s+t-m} w``."""
    space = w.space
    ctx = u.space
    lhs = _sub(_act(u, s, _act(v, t, w.terms, space), space),
               _act(v, t, _act(u, s, w.terms, space), space))
    rhs: dict = {}
    for uh in homogeneous_parts(u):
        for vh in homogeneous_parts(v):
            top = floor_q(uh.max_weight() + vh.max_weight() - 1 - ctx.min_weight)
            for m in range(top + 1):
                c = binom(s, m)
                if not c:
                    continue
                prod = State._raw(ctx, _act(uh, m, vh.terms, ctx))
                if prod:
                    add_scaled(rhs, _act(prod, s + t - m, w.terms, space), c)
    return lhs, rhs


def commutator_formula_check(u: State, v: State, s, t, w: State, reduce=None) -> CheckResult:
    lhs, rhs = commutator_terms(u, v, s, t, w)
    diff = _reducer(reduce)(_sub(lhs, rhs))
    if diff:
        return _fail("commutator", diff, w.space, 1, u=u, v=v, s=s, t=t, w=w)
    return _ok("commutator", 1)


def jacobi_terms(u: State, v: State, w: State, a: int, b: int, c: int) -> tuple[dict, dict]:
    """Both sides of the ``z0^{-a-1} z1^{-b-1} z2^{-c-1}`` component of the Jacobi identity on ``w``."""
    space = w.space
    ctx = u.space
    lowest = space.min_weight
    wmax = w.max_weight()
    lhs: dict = {}
    rhs: dict = {}
    if wmax is None:
        return lhs, rhs
    sign_a = 1 if a % 2 == 0 else -1
    for uh in homogeneous_parts(u):
        wu = uh.max_weight()
        for vh in homogeneous_parts(v):
            wv = vh.max_weight()
            top1 = floor_q(wv + wmax - lowest - 1 - c)
            top2 = floor_q(wu + wmax - lowest - 1 - b)
            if a >= 0:
                top1, top2 = min(top1, a), min(top2, a)
            for i in range(top1 + 1):
                k = (-1) ** i * binom(a, i)
                inner = _act(vh, c + i, w.terms, space)
                if inner:
                    add_scaled(lhs, _act(uh, a + b - i, inner, space), k)
            for i in range(top2 + 1):
                k = -sign_a * (-1) ** i * binom(a, i)
                inner = _act(uh, b + i, w.terms, space)
                if inner:
                    add_scaled(lhs, _act(vh, a + c - i, inner, space), k)
            top3 = floor_q(wu + wv - 1 - ctx.min_weight - a)
            for i in range(top3 + 1):
                k = binom(b, i)
                if not k:
                    continue
                prod = State._raw(ctx, _act(uh, a + i, vh.terms, ctx))
                if prod:
                    add_scaled(rhs, _act(prod, b + c - i, w.terms, space), k)
    return lhs, rhs


def jacobi_component_check(u: State, v: State, w: State, a: int, b: int, c: int,
                           reduce=None) -> CheckResult:
    lhs, rhs = jacobi_terms(u, v, w, a, b, c)
    diff = _reducer(reduce)(_sub(lhs, rhs))
    if diff:
        return _fail("jacobi", diff, w.space, 1, u=u, v=v, w=w, a=a, b=b, c=c)
    return _ok("jacobi", 1)


# ---------------------------------------------------------------------------
# consequences of the axioms

def _l_minus_one(terms: dict, ctx) -> dict:
    return _act(ctx.omega, 0, terms, ctx)


def skew_symmetry_check(u: State, v: State, order_cap: int) -> CheckResult:
    """``Y(u, z) v = e^{z L(-1)} Y(v, -z) u`` at every power ``z^p`` with ``p <= order_cap``.

    The coefficient of ``z^{-n-1}`` is ``u_n v = sum_j (-1)^{n+j+1} L(-1)^j/j! v_{n+j} u``;
    below ``z^{-wt u - wt v}`` both sides vanish by truncation.
    """
    ctx = u.space
    count = 0
    for uh in homogeneous_parts(u):
        for vh in homogeneous_parts(v):
            total = uh.max_weight() + vh.max_weight()
            nmax = floor_q(total - 1 - ctx.min_weight)
            for n in range(-order_cap - 1, nmax + 1):
                lhs = _act(uh, n, vh.terms, ctx)
                rhs: dict = {}
                for j in range(0, nmax - n + 1):
                    piece = _act(vh, n + j, uh.terms, ctx)
                    fact = Q(1)
                    for r in range(j):
                        piece = _l_minus_one(piece, ctx)
                        fact *= r + 1
                    sign = 1 if (n + j + 1) % 2 == 0 else -1
                    add_scaled(rhs, piece, sign / fact)
                count += 1
                diff = _sub(lhs, rhs)
                if diff:
                    return _fail("skew", diff, ctx, count, u=uh, v=vh, n=n)
    return _ok("skew", count)


def creation_check(v: State) -> CheckResult:
    """``v_n 1 = 0`` for ``n >= 0`` and ``v_{-1} 1 = v``."""
    ctx = v.space
    vac = ctx.vacuum()
    diff = _sub(_act(v, -1, vac.terms, ctx), v.terms)
    if diff:
        return _fail("creation", diff, ctx, 1, v=v, n=-1)
    top = v.max_weight()
    count = 1
    for n in range(0, floor_q(top) + 1 if top is not None else 0):
        res = _act(v, n, vac.terms, ctx)
        count += 1
        if res:
            return _fail("creation", res, ctx, count, v=v, n=n)
    return _ok("creation", count)


def l_minus1_check(v: State, order_cap: int, states: Iterable[State]) -> CheckResult:
    """``(L(-1) v)_n w = -n v_{n-1} w`` for ``|n| <= order_cap`` and ``w`` in ``states``."""
    ctx = v.space
    lv = State._raw(ctx, _l_minus_one(v.terms, ctx))
    count = 0
    for w in states:
        space = w.space
        for n in range(-order_cap, order_cap + 1):
            lhs = _act(lv, n, w.terms, space)
            rhs = {m: -n * c for m, c in _act(v, n - 1, w.terms, space).items()} if n else {}
            count += 1
            diff = _sub(lhs, rhs)
            if diff:
                return _fail("derivative", diff, space, count, v=v, n=n, w=w)
    return _ok("derivative", count)


def virasoro_relation_check(m: int, n: int, states: Iterable[State], central_charge=None) -> CheckResult:
    """``[L(m), L(n)] = (m-n) L(m+n) + (m^3-m)/12 delta_{m+n,0} c`` on each state."""
    count = 0
    for w in states:
        c = w.space.voa.central_charge if central_charge is None else Q(central_charge)
        lhs = (virasoro_mode(m, virasoro_mode(n, w)) - virasoro_mode(n, virasoro_mode(m, w))).terms
        rhs = dict(virasoro_mode(m + n, w).terms)
        rhs = {k: (m - n) * x for k, x in rhs.items()} if m != n else {}
        if m + n == 0:
            add_scaled(rhs, w.terms, Q(m ** 3 - m, 12) * c)
        count += 1
        diff = _sub(lhs, rhs)
        if diff:
            return _fail("virasoro", diff, w.space, count, m=m, n=n, w=w)
    return _ok("virasoro", count)


def normal_ordered_terms(u: State, v: State, n, w: State) -> tuple[dict, dict]:
    """``(u_{-1} v)_n w`` against ``sum_{j<0} u_j v_{n-j-1} w + sum_{j>=0} v_{n-j-1} u_j w``."""
    ctx = u.space
    space = w.space
    lowest = space.min_weight
    wmax = w.max_weight()
    prod = State._raw(ctx, _act(u, -1, v.terms, ctx))
    lhs = _act(prod, n, w.terms, space)
    rhs: dict = {}
    if wmax is None:
        return lhs, rhs
    for uh in homogeneous_parts(u):
        for vh in homogeneous_parts(v):
            jmin = -floor_q(vh.max_weight() + wmax - lowest - n)
            for j in range(min(jmin, -1), 0):
                inner = _act(vh, n - j - 1, w.terms, space)
                if inner:
                    add_scaled(rhs, _act(uh, j, inner, space))
            for j in range(0, floor_q(uh.max_weight() + wmax - 1 - lowest) + 1):
                inner = _act(uh, j, w.terms, space)
                if inner:
                    add_scaled(rhs, _act(vh, n - j - 1, inner, space))
    return lhs, rhs


def normal_ordered_check(u: State, v: State, order_cap: int, states: Iterable[State]) -> CheckResult:
    """``Y(u_{-1} v, z)`` equals the normal-ordered product of ``Y(u, z)`` and ``Y(v, z)``."""
    count = 0
    for w in states:
        for n in range(-order_cap, order_cap + 1):
            lhs, rhs = normal_ordered_terms(u, v, n, w)
            count += 1
            diff = _sub(lhs, rhs)
            if diff:
                return _fail("normal-order", diff, w.space, count, u=u, v=v, n=n, w=w)
    return _ok("normal-order", count)


def modes_commute(v: State) -> bool:
    """True iff ``v_i v = 0`` for all ``i >= 0``, so all modes of ``v`` commute."""
    ctx = v.space
    for vh in homogeneous_parts(v):
        for vk in homogeneous_parts(v):
            top = floor_q(vh.max_weight() + vk.max_weight() - 1 - ctx.min_weight)
            for i in range(top + 1):
                if _act(vh, i, vk.terms, ctx):
                    return False
    return True


def power_vector(v: State, N: int) -> State:
    """``(v_{-1})^N 1``."""
    ctx = v.space
    acc = ctx.vacuum().terms
    for _ in range(N):
        acc = _act(v, -1, acc, ctx)
    return State._raw(ctx, acc)


def _power_coefficient(v: State, N: int, total: int, w: State, bound: int) -> dict:
    # sum over n_1 >= ... >= n_N (multiset, commuting modes) with sum = total, n_i <= bound
    space = w.space
    acc: dict = {}

    # ordered tuples: each multiset contributes N!/prod(mult!) times
    def rec_ordered(k, remaining, cap, terms, counts):
        if k == N:
            if remaining == 0:
                m = _multinomial(N, counts)
                add_scaled(acc, terms, m)
            return
        left = N - k
        lo = max(remaining - (left - 1) * cap, -(-remaining // left))
        for n in range(cap, lo - 1, -1):
            new = _act(v, n, terms, space)
            if not new:
                continue
            c2 = dict(counts)
            c2[n] = c2.get(n, 0) + 1
            rec_ordered(k + 1, remaining - n, n, new, c2)

    rec_ordered(0, total, bound, w.terms, {})
    return acc


def _multinomial(n: int, counts: dict) -> int:
    from math import factorial
    out = factorial(n)
    for c in counts.values():
        out //= factorial(c)
    return out


def nilpotency_check(v: State, N: int, samples: Sequence[State], order_cap: int,
                     reduce: Callable | None = None) -> CheckResult:
    """``Y((v_{-1})^N 1, z) = Y(v, z)^N`` on ``samples`` for orders ``|m| <= order_cap``.

    Requires the modes of ``v`` to commute, which is verified first; a
    violation raises :class:`PreconditionError`. When ``(v_{-1})^N 1`` is zero
    (after ``reduce``, e.g. modulo an ideal) this says ``Y(v, z)^N = 0``.
    The coefficient of ``z^{-m-1}`` on the right is the sum over
    ``n_1 + ... + n_N = m + 1 - N``; each ``n_i`` is bounded by truncation.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if not modes_commute(v):
        raise PreconditionError("the modes of v do not commute (v_i v != 0 for some i >= 0)")
    red = _reducer(reduce)
    ctx = v.space
    x = power_vector(v, N)
    count = 0
    for w in samples:
        space = w.space
        wmax = w.max_weight()
        if wmax is None:
            continue
        bound = floor_q(v.max_weight() + wmax - 1 - space.min_weight)
        for m in range(-order_cap, order_cap + 1):
            lhs = _act(x, m, w.terms, space)
            rhs = _power_coefficient(v, N, m + 1 - N, w, bound)
            count += 1
            diff = red(_sub(lhs, rhs))
            if diff:
                return _fail("nilpotency", diff, space, count, v=v, N=N, m=m, w=w)
    res = _ok("nilpotency", count)
    res.where = {"power_vector_zero": str(not red(x.terms))}
    return res


# ---------------------------------------------------------------------------
# suites over bases

def basis_states(space, cap) -> list[State]:
    return [State.basis(space, m) for m in space.basis_upto(Q(cap))]


class _TripleTables:
    """Memoized building blocks for the identities on one basis triple ``(u, v, w)``.

    ``A(p, q) = u_p v_q w``, ``B(p, q) = v_p u_q w`` and ``C(p, q) = (u_p v)_q w``;
    each is computed once and shared by every ``(a, b, c)`` that needs it.
    """

    def __init__(self, ctx, space, um, vm, wm):
        self.ctx, self.space = ctx, space
        self.um, self.vm, self.wm = um, vm, wm
        self.ev = _evaluator(ctx, space)
        self.ev_ctx = _evaluator(ctx, ctx)
        self.wu, self.wv, self.ww = ctx.weight(um), ctx.weight(vm), space.weight(wm)
        self._vw, self._uw, self._uv = {}, {}, {}
        self._a, self._b, self._c = {}, {}, {}

    def _act(self, mono, n, terms):
        acc: dict = {}
        ev = self.ev
        for m, c in terms.items():
            add_scaled(acc, ev(mono, n, m), c)
        return acc

    def vw(self, q):
        r = self._vw.get(q)
        if r is None:
            r = self._vw[q] = self.ev(self.vm, q, self.wm)
        return r

    def uw(self, q):
        r = self._uw.get(q)
        if r is None:
            r = self._uw[q] = self.ev(self.um, q, self.wm)
        return r

    def uv(self, p):
        r = self._uv.get(p)
        if r is None:
            r = self._uv[p] = self.ev_ctx(self.um, p, self.vm)
        return r

    def A(self, p, q):
        key = (p, q)
        r = self._a.get(key)
        if r is None:
            inner = self.vw(q)
            r = self._a[key] = self._act(self.um, p, inner) if inner else {}
        return r

    def B(self, p, q):
        key = (p, q)
        r = self._b.get(key)
        if r is None:
            inner = self.uw(q)
            r = self._b[key] = self._act(self.vm, p, inner) if inner else {}
        return r

    def C(self, p, q):
        key = (p, q)
        r = self._c.get(key)
        if r is None:
            acc: dict = {}
            for m, c in self.uv(p).items():
                add_scaled(acc, self.ev(m, q, self.wm), c)
            r = self._c[key] = acc
        return r

    def jacobi_difference(self, a, b, c) -> dict:
        lowest = self.space.min_weight
        top1 = floor_q(self.wv + self.ww - lowest - 1 - c)
        top2 = floor_q(self.wu + self.ww - lowest - 1 - b)
        if a >= 0:
            top1, top2 = min(top1, a), min(top2, a)
        top3 = floor_q(self.wu + self.wv - 1 - self.ctx.min_weight - a)
        acc: dict = {}
        for i in range(top1 + 1):
            add_scaled(acc, self.A(a + b - i, c + i), (-1) ** i * int_binom(a, i))
        sign_a = 1 if a % 2 == 0 else -1
        for i in range(top2 + 1):
            add_scaled(acc, self.B(a + c - i, b + i), -sign_a * (-1) ** i * int_binom(a, i))
        for i in range(top3 + 1):
            add_scaled(acc, self.C(a + i, b + c - i), -int_binom(b, i))
        return acc

    def commutator_difference(self, s, t) -> dict:
        acc = dict(self.A(s, t))
        add_scaled(acc, self.B(t, s), -1)
        for m in range(floor_q(self.wu + self.wv - 1 - self.ctx.min_weight) + 1):
            add_scaled(acc, self.C(m, s + t - m), -int_binom(s, m))
        return acc


def _evaluator(ctx, space):
    ev = getattr(space, "mode_evaluator", None)
    if ev is not None:
        return ev
    return lambda um, n, wm: _mono_mode(ctx, space, um, n, wm)


def jacobi_suite(ctx: VoaContext, basis_cap, index_range: Sequence[int], space=None,
                 include_commutator: bool = True, reduce=None,
                 include_jacobi: bool = True, time_budget: float | None = None,
                 cache_limit: int | None = 500_000) -> CheckResult:
    """Jacobi components (and the commutator formula) over all basis triples.

    Combinations whose total weight ``wt u + wt v + wt w - a - b - c - 2``
    falls below the lowest weight are skipped: every term is zero there.
    The per-identity arithmetic is that of :func:`jacobi_component_check`
    and :func:`commutator_formula_check`, with operator products shared
    across indices.

    With ``time_budget`` (seconds) the run stops once the budget is spent and
    reports failure with ``where["incomplete"]`` set; nothing is skipped
    silently. ``cache_limit`` bounds the memoized composite modes, which are
    dropped when the bound is passed.
    """
    space = space or ctx
    red = _reducer(reduce)
    us = ctx.basis_upto(Q(basis_cap))
    ws = space.basis_upto(Q(basis_cap))
    count = 0
    lowest = space.min_weight
    names = "+".join(n for n, on in (("jacobi", include_jacobi),
                                     ("commutator", include_commutator)) if on)
    start = time.monotonic()
    for um in us:
        for vm in us:
            for wm in ws:
                if time_budget is not None and time.monotonic() - start > time_budget:
                    return CheckResult(names, False, None, {
                        "incomplete": f"time budget of {time_budget} s spent",
                        "reached": f"u={ctx.format_mono(um)} v={ctx.format_mono(vm)}"}, count)
                if cache_limit and len(space._mode_cache) + len(ctx._mode_cache) > cache_limit:
                    space._mode_cache.clear()
                    ctx._mode_cache.clear()
                tab = _TripleTables(ctx, space, um, vm, wm)
                total = tab.wu + tab.wv + tab.ww

                def fail(name, diff, **where):
                    return _fail(name, diff, space, count, u=State.basis(ctx, um),
                                 v=State.basis(ctx, vm), w=State.basis(space, wm), **where)

                if include_commutator:
                    for s in index_range:
                        for t in index_range:
                            if total - s - t - 2 < lowest:
                                continue
                            count += 1
                            diff = red(tab.commutator_difference(s, t))
                            if diff:
                                return fail("commutator", diff, s=s, t=t)
                for a in index_range if include_jacobi else ():
                    for b in index_range:
                        for c in index_range:
                            if total - a - b - c - 2 < lowest:
                                continue
                            count += 1
                            diff = red(tab.jacobi_difference(a, b, c))
                            if diff:
                                return fail("jacobi", diff, a=a, b=b, c=c)
    return _ok(names, count)


def virasoro_suite(ctx, weight_cap, mode_bound: int, space=None) -> CheckResult:
    space = space or ctx
    states = basis_states(space, weight_cap)
    count = 0
    for m in range(-mode_bound, mode_bound + 1):
        for n in range(-mode_bound, mode_bound + 1):
            r = virasoro_relation_check(m, n, states)
            count += r.count
            if not r:
                r.count = count
                return r
    return _ok("virasoro", count)


def format_result_rows(result: CheckResult) -> list[tuple[str, str]]:
    rows = [("check", result.name), ("status", "ok" if result.ok else "FAILED"),
            ("identities", str(result.count))]
    for k, v in sorted(result.where.items()):
        rows.append((k, v))
    if not result.ok:
        rows.append(("difference", str(result.counterexample)))
    return rows


__all__ = [
    "CheckResult", "PreconditionError", "basis_states", "commutator_formula_check",
    "creation_check", "homogeneous_parts", "jacobi_component_check",
    "jacobi_suite", "l_minus1_check", "modes_commute", "nilpotency_check",
    "normal_ordered_check", "power_vector", "skew_symmetry_check", "virasoro_relation_check",
    "virasoro_suite",
]
