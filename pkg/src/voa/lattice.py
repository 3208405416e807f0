"""Even lattices: dual cosets, the sign cocycle, V_L and its modules V(i).

Lattice vectors are integer coordinate tuples in the basis whose Gram
matrix is given; coset vectors are rational tuples. The twisted group
algebra uses the upper-triangular sign convention
``eps(e_i, e_j) = 1 (i <= j), (-1)^{<e_i,e_j>} (i > j)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import isqrt
from typing import Sequence

from .core import State, TruncationPolicy, VoaContext, VoaError
from .formal import Q, format_rational, rational
from .heisenberg import (FockSpace, colored_partitions, free_field_mode, heis_mode, insert_osc,
                         osc_weight)
from .linalg import (bilinear, determinant, inverse, is_positive_definite, is_symmetric, ldl,
                     mat_vec, to_matrix)


class LatticeError(VoaError):
    pass


class SectorError(VoaError):
    """Mode index outside the rational sector forced by the module."""


E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)

PRESETS = {
    "A1": ((2,),),
    "A1+A1": ((2, 0), (0, 2)),
    "A2": ((2, -1), (-1, 2)),
    "E8": E8_GRAM,
}


@dataclass(frozen=True)
class LatticeSpec:
    gram: tuple

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        d = len(gram)
        if d == 0 or any(len(r) != d for r in gram):
            raise LatticeError("gram matrix must be square and nonempty")
        if not is_symmetric(gram):
            raise LatticeError("gram matrix must be symmetric")
        if any(gram[i][i] % 2 for i in range(d)):
            raise LatticeError("lattice is not even")
        if determinant(gram) == 0:
            raise LatticeError("gram matrix is degenerate")
        object.__setattr__(self, "gram", gram)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def positive_definite(self) -> bool:
        return is_positive_definite(self.gram)

    @classmethod
    def preset(cls, name: str) -> "LatticeSpec":
        try:
            return cls(PRESETS[name])
        except KeyError:
            raise LatticeError(f"unknown lattice preset {name!r}") from None

    @classmethod
    def from_json(cls, text) -> "LatticeSpec":
        doc = json.loads(text) if isinstance(text, str) else text
        if "preset" in doc:
            return cls.preset(doc["preset"])
        return cls(tuple(tuple(int(rational(x)) for x in row) for row in doc["gram"]))

    def to_json(self) -> str:
        return json.dumps({"gram": [list(r) for r in self.gram]})

    def form(self, a, b) -> Q:
        return bilinear(self.gram, a, b)


@dataclass(frozen=True)
class CosetIndex:
    index: int
    representative: tuple

    def __str__(self):
        return "(" + ",".join(format_rational(x) for x in self.representative) + ")"


def _reduce_mod_one(vec) -> tuple:
    return tuple(Q(x) - (Q(x).numerator // Q(x).denominator) for x in vec)


def dual_cosets(spec: LatticeSpec) -> list[CosetIndex]:
    """Representatives of L°/L with fractional coordinates in [0, 1); the first is 0.

    L° = G^{-1} Z^d in lattice coordinates, so the classes are generated by
    the columns of G^{-1} modulo 1; the closure has |det G| elements.
    """
    ginv = inverse(spec.gram)
    d = spec.rank
    gens = [_reduce_mod_one([ginv[i][j] for i in range(d)]) for j in range(d)]
    zero = tuple(Q(0) for _ in range(d))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = _reduce_mod_one([a + b for a, b in zip(v, g)])
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    reps = sorted(seen - {zero}, key=lambda v: (spec.form(v, v), v))
    expected = abs(determinant(spec.gram))
    if len(reps) + 1 != expected:
        raise AssertionError("coset enumeration disagrees with the determinant")
    return [CosetIndex(0, zero)] + [CosetIndex(i + 1, r) for i, r in enumerate(reps)]


@dataclass(frozen=True)
class Cocycle:
    """Bimultiplicative sign cocycle stored as exponents mod 2."""

    exponents: tuple

    def __call__(self, alpha, beta) -> int:
        s = 0
        d = len(self.exponents)
        for i in range(d):
            if not alpha[i]:
                continue
            for j in range(d):
                if beta[j] and self.exponents[i][j]:
                    s += int(alpha[i]) * int(beta[j])
        return -1 if s % 2 else 1

    def commutator(self, alpha, beta) -> int:
        return self(alpha, beta) * self(beta, alpha)


def build_cocycle(spec: LatticeSpec) -> Cocycle:
    d = spec.rank
    exps = tuple(tuple((spec.gram[i][j] % 2) if i > j else 0 for j in range(d)) for i in range(d))
    return Cocycle(exps)


def lattice_vectors(gram, shift, bound) -> list[tuple]:
    """All ``x in Z^d + shift`` with ``<x, x> <= bound`` (positive definite ``gram``).

    Exact Fincke-Pohst style enumeration over the rational LDL^T form.
    """
    d, mu = ldl(gram)
    n = len(gram)
    shift = [Q(s) for s in shift]
    bound = Q(bound)
    out = []
    x = [Q(0)] * n

    def rec(i, remaining):
        if i < 0:
            out.append(tuple(x))
            return
        c = sum((mu[i][j] * x[j] for j in range(i + 1, n)), Q(0))
        # need d_i (x_i + c)^2 <= remaining with x_i in shift_i + Z
        r = remaining / d[i]
        s = isqrt(int(r.numerator // r.denominator)) + 1
        centre = -c - shift[i]
        lo = int(centre.numerator // centre.denominator) - s
        hi = lo + 2 * s + 2
        for y in range(lo, hi + 1):
            xi = y + shift[i]
            t = d[i] * (xi + c) ** 2
            if t <= remaining:
                x[i] = xi
                rec(i - 1, remaining - t)
        x[i] = Q(0)

    rec(n - 1, bound)
    return out


class LatticeModule(FockSpace):
    """V(i) = M(1) tensor C{L + lambda_i}."""

    def __init__(self, voa: "LatticeVOA", coset: CosetIndex):
        super().__init__()
        self._setup(voa, coset)

    def _setup(self, voa, coset):
        self.voa = voa
        self.spec = voa.spec
        self.rank = voa.spec.rank
        self.gram = to_matrix(voa.spec.gram)
        self.coset = coset
        self.shift = tuple(Q(x) for x in coset.representative)
        self._mom_weight = {}
        self._vectors_bound = Q(-1)
        self._vectors: list = []
        self.name = f"V({coset.index}) of {voa.lattice_name}"
        vecs = lattice_vectors(self.gram, self.shift, self.spec.form(self.shift, self.shift) + 4)
        self.min_weight = min(self.momentum_weight(v) for v in vecs)
        tops = sorted(v for v in vecs if self.momentum_weight(v) == self.min_weight)
        self.top_monos = [((), v) for v in tops]
        self.top_mono = self.top_monos[0]

    def vectors_upto(self, w) -> list:
        bound = 2 * Q(w)
        if bound > self._vectors_bound:
            self._vectors = lattice_vectors(self.gram, self.shift, bound)
            self._vectors_bound = bound
        return [v for v in self._vectors if self.momentum_weight(v) <= w]

    def basis_of_weight(self, w) -> list:
        w = Q(w)
        out = []
        for vec in self.vectors_upto(w):
            h = w - self.momentum_weight(vec)
            if h.denominator != 1:
                continue
            out.extend((osc, vec) for osc in colored_partitions(int(h), self.rank))
        return sorted(out, key=self.sort_key)

    def integral_part(self, gamma) -> tuple:
        return tuple(int(g - s) for g, s in zip(gamma, self.shift))

    def cocycle_sign(self, beta, gamma) -> int:
        if any(Q(b).denominator != 1 for b in beta):
            # products across cosets need phases beyond signs; not modelled
            return 1
        return self.voa.cocycle(tuple(int(b) for b in beta), self.integral_part(gamma))

    def _generator_mode(self, gen, n, mono) -> dict:
        kind, data = gen
        if kind == "b":
            return heis_mode(self.gram, data, n, mono)
        return free_field_mode(self, ((), data), n, mono, cocycle=self.cocycle_sign)

    def format_mono(self, mono) -> str:
        osc, mom = mono
        text = self.format_osc(osc)
        if any(mom):
            text += "E(" + ",".join(format_rational(x) for x in mom) + ")"
        return text + "|0>"

    def mode_evaluator_free_field(self, vmono, n, wmono) -> dict:
        return free_field_mode(self, vmono, n, wmono, cocycle=self.cocycle_sign)


class LatticeVOA(LatticeModule, VoaContext):
    """V_L for a positive definite even lattice."""

    construction = "lattice"

    def __init__(self, spec: LatticeSpec, truncation: TruncationPolicy | None = None,
                 name: str | None = None):
        if not spec.positive_definite:
            raise LatticeError("V_L needs a positive definite lattice (grading bounded below)")
        VoaContext.__init__(self, truncation)
        self.spec = spec
        self.lattice_name = name or "L"
        self.cocycle = build_cocycle(spec)
        self.cosets = dual_cosets(spec)
        self._setup(self, self.cosets[0])
        self.gram_inv = inverse(self.gram)
        self.vacuum_mono = ((), tuple(Q(0) for _ in range(self.rank)))
        self.central_charge = Q(self.rank)
        self.generators = {("b", i): Q(1) for i in range(self.rank)}
        self.name = f"V_{self.lattice_name}"
        self._modules = {0: self}

    @property
    def top_mono(self):
        return self.vacuum_mono

    @top_mono.setter
    def top_mono(self, value):
        pass

    def gen_weight(self, gen) -> Q:
        if gen[0] == "E":
            return self.momentum_weight(gen[1])
        return Q(1)

    @cached_property
    def omega(self) -> State:
        terms: dict = {}
        zero = self.vacuum_mono[1]
        for i in range(self.rank):
            for j in range(self.rank):
                c = self.gram_inv[i][j]
                if c:
                    key = (insert_osc(((i, 1),), j, 1), zero)
                    terms[key] = terms.get(key, 0) + c / 2
        return State(self, terms)

    def generator_of(self, mono):
        osc, mom = mono
        if not osc:
            return ("E", mom) if any(mom) else None
        if len(osc) == 1 and osc[0][1] == 1 and not any(mom):
            return ("b", osc[0][0])
        return None

    def split(self, mono):
        osc, mom = mono
        i, n = osc[0]
        return ("b", i), -n, (osc[1:], mom)

    def generator_state(self, gen) -> State:
        if gen[0] == "E":
            return State.basis(self, ((), tuple(Q(x) for x in gen[1])))
        return State.basis(self, (((gen[1], 1),), self.vacuum_mono[1]))

    def exp_state(self, beta) -> State:
        return State.basis(self, ((), tuple(Q(x) for x in beta)))

    def module(self, index: int) -> LatticeModule:
        mod = self._modules.get(index)
        if mod is None:
            mod = self._modules[index] = LatticeModule(self, self.cosets[index])
        return mod

    def metadata(self) -> dict:
        meta = super().metadata()
        meta["cocycle"] = "upper-triangular: eps(e_i,e_j)=1 for i<=j, (-1)^<e_i,e_j> for i>j"
        meta["cosets"] = str(len(self.cosets))
        return meta


def build_lattice_voa(spec: LatticeSpec, coset: int | CosetIndex = 0,
                      truncation: TruncationPolicy | None = None, name: str | None = None):
    """V_L (coset 0) or its irreducible module V(i)."""
    voa = LatticeVOA(spec, truncation, name)
    index = coset.index if isinstance(coset, CosetIndex) else int(coset)
    return voa if index == 0 else voa.module(index)


def lattice_mode(space: LatticeModule, v, n, w: State) -> State:
    """Mode ``v_n w`` of a (dressed) exponential, ``v`` possibly in L° rather than L.

    ``v`` is a monomial ``(oscillators, beta)`` or a basis State of V_L. The
    mode index must lie in ``-<beta, gamma> + Z`` for the coset of ``w``.
    """
    vmono = next(iter(v.terms)) if isinstance(v, State) else v
    osc, beta = vmono
    beta = tuple(Q(b) for b in beta)
    vmono = (osc, beta)
    n = Q(n)
    acc: dict = {}
    for wm, wc in w.terms.items():
        if (n + space.spec.form(beta, wm[1])).denominator != 1:
            raise SectorError(f"mode index {format_rational(n)} is outside the sector of {space.format_mono(wm)}")
        nn = int(n) if n.denominator == 1 else n
        res = free_field_mode(space, vmono, nn, wm, cocycle=space.cocycle_sign)
        for m, c in res.items():
            acc[m] = acc.get(m, 0) + c * wc
    return State(space, acc)
