"""Affine vertex operator algebras V^_k(g) and their level-k quotients L(k, 0).

A basis monomial is a tuple of ``(x, n)`` pairs, ``x`` the index of a basis
element of g and ``n >= 1``, standing for the PBW word ``x(-n)...`` on the
vacuum, sorted by mode (largest ``n`` first) and then by basis index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

from .core import (Space, State, TruncationPolicy, VoaContext, VoaError, add_scaled,
                   mode_terms)
from .formal import Q, format_rational, rational
from .linalg import RowReducer, inverse


class CriticalLevelError(VoaError):
    pass


class AffineSpecError(VoaError):
    pass


SL2_BASIS = ("e", "h", "f")
SL2_BRACKETS = {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}}
SL2_FORM = {("h", "h"): 2, ("e", "f"): 1}


@dataclass(frozen=True)
class AffineSpec:
    """A finite-dimensional Lie algebra with invariant form, and a level.

    ``brackets`` lists ``[x, y]`` for some ordered pairs; antisymmetry fills
    in the rest. ``form`` is symmetric and filled in the same way.
    ``theta`` names a highest root vector, used for the level ideal.
    """

    level: Q
    basis: tuple = SL2_BASIS
    brackets: dict = field(default_factory=lambda: dict(SL2_BRACKETS))
    form: dict = field(default_factory=lambda: dict(SL2_FORM))
    dual_coxeter: Q = Q(2)
    theta: str = "e"
    algebra: str = "sl2"

    def __post_init__(self):
        object.__setattr__(self, "level", rational(self.level))
        object.__setattr__(self, "dual_coxeter", rational(self.dual_coxeter))
        names = tuple(self.basis)
        index = {x: i for i, x in enumerate(names)}
        if len(index) != len(names):
            raise AffineSpecError("duplicate basis names")
        n = len(names)
        br = [[{} for _ in range(n)] for _ in range(n)]
        for (x, y), val in self.brackets.items():
            if x not in index or y not in index:
                raise AffineSpecError(f"unknown basis element in [{x},{y}]")
            i, j = index[x], index[y]
            vec = {index[z]: rational(c) for z, c in val.items() if rational(c)}
            if i == j and vec:
                raise AffineSpecError(f"[{x},{x}] must vanish")
            if br[i][j] and br[i][j] != vec:
                raise AffineSpecError(f"[{x},{y}] given twice")
            br[i][j] = vec
            br[j][i] = {z: -c for z, c in vec.items()}
        form = [[Q(0)] * n for _ in range(n)]
        for (x, y), val in self.form.items():
            i, j = index[x], index[y]
            form[i][j] = form[j][i] = rational(val)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_br", tuple(tuple(r) for r in br))
        object.__setattr__(self, "_form", tuple(tuple(r) for r in form))
        self._validate()
        if self.level + self.dual_coxeter == 0:
            raise CriticalLevelError(
                f"level {format_rational(self.level)} is critical (k + h = 0)")
        if self.theta not in index:
            raise AffineSpecError("theta must be a basis element")

    def _validate(self):
        n = len(self.basis)

        def br(u: dict, v: dict) -> dict:
            out: dict = {}
            for i, a in u.items():
                for j, b in v.items():
                    add_scaled(out, self._br[i][j], a * b)
            return out

        def unit(i):
            return {i: Q(1)}

        for i in range(n):
            for j in range(n):
                for k in range(n):
                    # Jacobi identity
                    acc: dict = {}
                    add_scaled(acc, br(unit(i), br(unit(j), unit(k))))
                    add_scaled(acc, br(unit(j), br(unit(k), unit(i))))
                    add_scaled(acc, br(unit(k), br(unit(i), unit(j))))
                    if acc:
                        raise AffineSpecError("bracket violates the Jacobi identity")
                    # invariance ([x,y], z) = (x, [y,z])
                    lhs = sum((c * self._form[a][k] for a, c in self._br[i][j].items()), Q(0))
                    rhs = sum((c * self._form[i][a] for a, c in self._br[j][k].items()), Q(0))
                    if lhs != rhs:
                        x, y, z = self.basis[i], self.basis[j], self.basis[k]
                        raise AffineSpecError(f"form is not invariant: ([{x},{y}],{z}) != ({x},[{y},{z}])")
        try:
            inverse(self._form)
        except ZeroDivisionError:
            raise AffineSpecError("invariant form is degenerate") from None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, name: str) -> int:
        return self._index[name]

    def bracket(self, i: int, j: int) -> dict:
        return self._br[i][j]

    def pairing(self, i: int, j: int) -> Q:
        return self._form[i][j]

    @classmethod
    def sl2(cls, level) -> "AffineSpec":
        return cls(level)

    @classmethod
    def from_json(cls, text) -> "AffineSpec":
        """``{"algebra": "sl2", "level": "p/q"}`` optionally with explicit
        ``basis``, ``brackets`` (``{"x,y": {"z": c}}``), ``form``
        (``{"x,y": c}``), ``dual_coxeter`` and ``theta``."""
        doc = json.loads(text) if isinstance(text, str) else text
        if "level" not in doc:
            raise AffineSpecError("missing level")
        algebra = doc.get("algebra", "sl2")
        if "brackets" not in doc:
            if algebra != "sl2":
                raise AffineSpecError(f"unknown algebra {algebra!r}; give brackets explicitly")
            return cls(rational(doc["level"]))

        def pair(key):
            x, y = (s.strip() for s in key.split(","))
            return x, y

        return cls(level=rational(doc["level"]),
                   basis=tuple(doc["basis"]),
                   brackets={pair(k): v for k, v in doc["brackets"].items()},
                   form={pair(k): v for k, v in doc.get("form", {}).items()},
                   dual_coxeter=rational(doc.get("dual_coxeter", 2)),
                   theta=doc.get("theta", doc["basis"][0]),
                   algebra=algebra)

    def to_json(self) -> str:
        return json.dumps({
            "algebra": self.algebra,
            "level": format_rational(self.level),
            "basis": list(self.basis),
            "brackets": {f"{x},{y}": {z: format_rational(Q(c)) for z, c in v.items()}
                         for (x, y), v in self.brackets.items()},
            "form": {f"{x},{y}": format_rational(Q(v)) for (x, y), v in self.form.items()},
            "dual_coxeter": format_rational(self.dual_coxeter),
            "theta": self.theta,
        })


def _pbw_key(p):
    return (-p[1], p[0])


def affine_partitions(total: int, dim: int, max_part=None, max_gen=None):
    """PBW monomials of weight ``total`` in canonical order."""
    if total == 0:
        yield ()
        return
    if max_part is None:
        max_part, max_gen = total, 0
    for n in range(min(total, max_part), 0, -1):
        first = max_gen if n == max_part else 0
        for x in range(first, dim):
            for rest in affine_partitions(total - n, dim, n, x):
                yield ((x, n),) + rest


class AffineVOA(VoaContext):
    """V^_k(g) with the Sugawara conformal vector."""

    construction = "affine"

    def __init__(self, spec: AffineSpec, truncation: TruncationPolicy | None = None):
        super().__init__(truncation)
        self.spec = spec
        self.k = spec.level
        self.vacuum_mono = ()
        self.min_weight = Q(0)
        dim = spec.dim
        self.central_charge = self.k * dim / (self.k + spec.dual_coxeter)
        self.generators = {x: Q(1) for x in range(dim)}
        self.name = f"V^_{format_rational(self.k)}({spec.algebra})"
        self._x_cache: dict = {}
        self._basis_cache: dict = {}

    # -- grading ------------------------------------------------------------
    def weight(self, mono) -> Q:
        return Q(sum(n for _, n in mono))

    def basis_of_weight(self, w) -> list:
        w = Q(w)
        if w < 0 or w.denominator != 1:
            return []
        w = int(w)
        hit = self._basis_cache.get(w)
        if hit is None:
            hit = self._basis_cache[w] = list(affine_partitions(w, self.spec.dim))
        return hit

    def sort_key(self, mono):
        return (self.weight(mono), tuple(_pbw_key(p) for p in mono))

    def format_mono(self, mono) -> str:
        parts = []
        k = 0
        while k < len(mono):
            j = k
            while j < len(mono) and mono[j] == mono[k]:
                j += 1
            x, n = mono[k]
            parts.append(f"{self.spec.basis[x]}({-n})" + (f"^{j - k}" if j - k > 1 else ""))
            k = j
        return "".join(parts) + "|0>"

    # -- current modes ------------------------------------------------------
    def apply_x(self, x: int, m: int, mono: tuple) -> dict:
        """``x(m)`` on a PBW monomial, straightened back to PBW order."""
        key = (x, m, mono)
        hit = self._x_cache.get(key)
        if hit is not None:
            return hit
        spec = self.spec
        res: dict = {}
        if m >= 0:
            if mono:
                (y, n1), rest = mono[0], mono[1:]
                # x(m) y(-n1) = y(-n1) x(m) + [x,y](m-n1) + m (x,y) delta_{m,n1} k
                for mm, c in self.apply_x(x, m, rest).items():
                    add_scaled(res, self.apply_x(y, -n1, mm), c)
                for z, c in spec.bracket(x, y).items():
                    add_scaled(res, self.apply_x(z, m - n1, rest), c)
                if m == n1:
                    f = spec.pairing(x, y)
                    if f:
                        add_scaled(res, {rest: Q(1)}, m * f * self.k)
        else:
            p = -m
            if not mono or _pbw_key((x, p)) <= _pbw_key(mono[0]):
                res = {((x, p),) + mono: Q(1)}
            else:
                (y, n1), rest = mono[0], mono[1:]
                # x(-p) y(-n1) = y(-n1) x(-p) + [x,y](-p-n1)
                for mm, c in self.apply_x(x, -p, rest).items():
                    add_scaled(res, self.apply_x(y, -n1, mm), c)
                for z, c in spec.bracket(x, y).items():
                    add_scaled(res, self.apply_x(z, -p - n1, rest), c)
        self._x_cache[key] = res
        return res

    def _generator_mode(self, gen, n, mono) -> dict:
        return self.apply_x(gen, int(n), mono)

    # -- vertex algebra structure ------------------------------------------
    def generator_of(self, mono):
        if len(mono) == 1 and mono[0][1] == 1:
            return mono[0][0]
        return None

    def split(self, mono):
        x, n = mono[0]
        return x, -n, mono[1:]

    def generator_state(self, gen) -> State:
        if isinstance(gen, str):
            gen = self.spec.index(gen)
        return State.basis(self, ((gen, 1),))

    def current(self, name: str, n: int = -1) -> State:
        """``x(n)|0>`` for a basis element named ``name``."""
        x = self.spec.index(name)
        return State._raw(self, self.apply_x(x, n, ()))

    @cached_property
    def omega(self) -> State:
        spec = self.spec
        ginv = inverse(spec._form)
        scale = 1 / (2 * (self.k + spec.dual_coxeter))
        acc: dict = {}
        for a in range(spec.dim):
            for b in range(spec.dim):
                if ginv[a][b]:
                    inner = self.apply_x(b, -1, ())
                    for m, c in inner.items():
                        add_scaled(acc, self.apply_x(a, -1, m), c * ginv[a][b] * scale)
        return State._raw(self, acc)

    def metadata(self) -> dict:
        meta = super().metadata()
        meta["algebra"] = self.spec.algebra
        meta["level"] = format_rational(self.k)
        return meta


def build_affine(spec: AffineSpec, truncation: TruncationPolicy | None = None) -> AffineVOA:
    return AffineVOA(spec, truncation)


def level_ideal_generator(voa: AffineVOA) -> State:
    """``theta(-1)^{k+1}|0>``, which generates the maximal ideal for integral ``k >= 0``."""
    k = voa.k
    if k.denominator != 1 or k < 0:
        raise VoaError("the level ideal is defined here for nonnegative integral levels")
    t = voa.spec.index(voa.spec.theta)
    return State.basis(voa, tuple([(t, 1)] * (int(k) + 1)))


class IdealSpan:
    """The graded pieces, up to ``cap``, of the ideal generated by some states.

    For an affine algebra the ideal generated by a singular vector ``v`` is
    ``U(g^_-) U(g) v``, so its truncation is the closure of ``v`` under current
    modes that stay within weight ``cap``. :meth:`extend` raises the cap.
    """

    def __init__(self, voa: AffineVOA, generators, cap):
        self.voa = voa
        self.generators = list(generators)
        self.cap = Q(-1)
        self.reducers: dict = {}
        self.extend(cap)

    def extend(self, cap) -> None:
        cap = Q(cap)
        old = self.cap
        if cap <= old:
            return
        self.cap = cap
        voa = self.voa
        # (weight, terms, targets above this weight are new)
        queue = [(w, dict(row), old) for w, red in self.reducers.items()
                 for row in red.rows.values()]
        for g in self.generators:
            for w, comp in g.components().items():
                if old < w <= cap and self._add(w, comp.terms):
                    queue.append((w, comp.terms, Q(-1)))
        while queue:
            w, terms, lo = queue.pop()
            for x in range(voa.spec.dim):
                for m in range(int(w - cap), int(w - lo - 1) + 1):
                    tw = w - m
                    if tw < 0:
                        continue
                    acc: dict = {}
                    for mono, c in terms.items():
                        add_scaled(acc, voa.apply_x(x, m, mono), c)
                    if acc and self._add(tw, acc):
                        queue.append((tw, acc, Q(-1)))

    def _add(self, w, terms) -> bool:
        r = self.reducers.get(w)
        if r is None:
            r = self.reducers[w] = RowReducer(self.voa.sort_key)
        return r.add(terms)

    def dimension(self, w) -> int:
        w = Q(w)
        if w > self.cap:
            self.extend(w)
        r = self.reducers.get(w)
        return len(r) if r else 0

    def reduce(self, terms) -> dict:
        """Canonical representative of ``terms`` modulo the ideal."""
        parts: dict = {}
        for m, c in terms.items():
            parts.setdefault(self.voa.weight(m), {})[m] = c
        if parts and max(parts) > self.cap:
            self.extend(max(parts))
        out: dict = {}
        for w, t in parts.items():
            r = self.reducers.get(w)
            out.update(r.reduce(t) if r else t)
        return out

    def contains(self, state: State) -> bool:
        return not self.reduce(state.terms)


class QuotientVOA:
    """L(k, 0) = V^_k / ideal; the ideal is computed up to the weights requested."""

    def __init__(self, voa: AffineVOA, cap=4):
        self.voa = voa
        self.ideal = IdealSpan(voa, [level_ideal_generator(voa)], cap)
        self.name = f"L({format_rational(voa.k)},0)"

    @property
    def cap(self):
        return self.ideal.cap

    def graded_dimension(self, w) -> int:
        return self.voa.graded_dimension(w) - self.ideal.dimension(w)

    def reduce(self, state: State) -> State:
        return State._raw(self.voa, self.ideal.reduce(state.terms))

    def is_zero(self, state: State) -> bool:
        return self.ideal.contains(state)

    def mode_action(self, u: State, n, w: State) -> State:
        return self.reduce(State._raw(self.voa, mode_terms(u, n, w.terms, self.voa)))


def build_quotient(spec: AffineSpec, cap=4, truncation: TruncationPolicy | None = None):
    voa = AffineVOA(spec, truncation)
    return QuotientVOA(voa, cap)


def quotient_mode_action(u: State, n, w: State, quotient: QuotientVOA) -> State:
    """``u_n w`` in L(k, 0), as the normal form modulo the level ideal."""
    return quotient.mode_action(u, n, w)
