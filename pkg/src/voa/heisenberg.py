"""Free bosons: the Heisenberg vertex operator algebra M(1) and its modules M(1, lambda).

Basis monomials are pairs ``(oscillators, momentum)``. ``oscillators`` is a
sorted tuple of ``(i, n)`` standing for ``b(i, -n)`` with ``n >= 1`` (largest
``n`` first), and ``momentum`` is a rational coordinate vector on which
``b(i, 0)`` acts through the Gram matrix. The same monomials serve the
lattice construction, where the momentum is the lattice (coset) vector.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .core import (Space, State, TruncationPolicy, VoaContext, VoaError, WeightCapExceeded,
                   add_scaled, floor_q)
from .formal import Q, format_rational, int_binom, rational
from .linalg import bilinear, determinant, inverse, is_symmetric, mat_vec, to_matrix


class SingularGramError(VoaError):
    pass


@dataclass(frozen=True)
class HeisenbergSpec:
    rank: int
    gram: tuple = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        gram = self.gram
        if gram is None:
            gram = [[int(i == j) for j in range(self.rank)] for i in range(self.rank)]
        gram = to_matrix(gram)
        if len(gram) != self.rank or any(len(r) != self.rank for r in gram):
            raise ValueError("gram matrix has the wrong shape")
        if not is_symmetric(gram):
            raise ValueError("gram matrix must be symmetric")
        if determinant(gram) == 0:
            raise SingularGramError("gram matrix is degenerate")
        object.__setattr__(self, "gram", gram)

    @classmethod
    def from_json(cls, text: str) -> tuple["HeisenbergSpec", tuple | None]:
        """Parse ``{"rank": d, "gram": [[...]], "lambda": [...]}``; returns (spec, lambda)."""
        doc = json.loads(text) if isinstance(text, str) else text
        gram = doc.get("gram")
        if gram is not None:
            gram = [[rational(x) for x in row] for row in gram]
        rank = int(doc.get("rank", len(gram) if gram else 1))
        lam = doc.get("lambda")
        lam = tuple(rational(x) for x in lam) if lam is not None else None
        return cls(rank, gram), lam

    def to_json(self, lam=None) -> str:
        doc = {"rank": self.rank,
               "gram": [[format_rational(x) for x in row] for row in self.gram]}
        if lam is not None:
            doc["lambda"] = [format_rational(x) for x in lam]
        return json.dumps(doc)


# ---------------------------------------------------------------------------
# oscillator algebra on (oscillators, momentum) monomials

def osc_key(p):
    return (-p[1], p[0])


def insert_osc(osc: tuple, i: int, n: int) -> tuple:
    return tuple(sorted(osc + ((i, n),), key=osc_key))


def osc_weight(osc: tuple) -> int:
    return sum(n for _, n in osc)


def heis_mode(gram, i: int, m: int, mono) -> dict:
    """``b(i, m)`` on an oscillator monomial; ``[b(i,m), b(j,n)] = m gram[i][j] delta``."""
    osc, mom = mono
    if m < 0:
        return {(insert_osc(osc, i, -m), mom): 1}
    if m == 0:
        c = sum((gram[i][j] * mom[j] for j in range(len(mom)) if mom[j]), Q(0))
        return {mono: c} if c else {}
    out: dict = {}
    seen = set()
    for pos, (j, n) in enumerate(osc):
        if n != m or j in seen:
            continue
        seen.add(j)
        g = gram[i][j]
        if not g:
            continue
        mult = sum(1 for p in osc if p == (j, n))
        rest = osc[:pos] + osc[pos + 1:]
        key = (rest, mom)
        out[key] = out.get(key, 0) + m * g * mult
    return {k: v for k, v in out.items() if v}


def vector_mode(gram, vec, m: int, mono) -> dict:
    """``vec(m)`` for a coordinate vector ``vec = sum vec_i e_i``."""
    acc: dict = {}
    for i, c in enumerate(vec):
        if c:
            add_scaled(acc, heis_mode(gram, i, m, mono), c)
    return acc


def _apply(op, terms: dict) -> dict:
    acc: dict = {}
    for m, c in terms.items():
        add_scaled(acc, op(m), c)
    return acc


def exp_coefficients(gram, vec, sign: int, top: int, mono) -> list[dict]:
    """Coefficients ``P_N`` (``N <= top``) of ``exp(sum_{k>0} x_k t^k / k)`` on ``mono``.

    ``x_k = vec(-k)`` for ``sign = -1`` (creation half of the exponential) and
    ``x_k = -vec(k)`` for ``sign = +1`` (annihilation half). Uses
    ``N P_N = sum_k x_k P_{N-k}``.
    """
    out = [{mono: Q(1)}]
    for N in range(1, top + 1):
        acc: dict = {}
        for k in range(1, N + 1):
            prev = out[N - k]
            if not prev:
                continue
            if sign < 0:
                add_scaled(acc, _apply(lambda m: vector_mode(gram, vec, -k, m), prev), 1)
            else:
                add_scaled(acc, _apply(lambda m: vector_mode(gram, vec, k, m), prev), -1)
        inv = Q(1, N)
        out.append({m: c * inv for m, c in acc.items()})
    return out


def colored_partitions(total: int, colors: int, max_part=None, max_color=None):
    """Oscillator tuples of weight ``total`` in canonical order."""
    if total == 0:
        yield ()
        return
    if max_part is None:
        max_part, max_color = total, 0
    for n in range(min(total, max_part), 0, -1):
        first_color = max_color if n == max_part else 0
        for i in range(first_color, colors):
            for rest in colored_partitions(total - n, colors, n, i):
                yield ((i, n),) + rest


# ---------------------------------------------------------------------------
# spaces

class FockSpace(Space):
    """Shared grading/formatting for oscillator monomials with momentum."""

    rank: int
    gram: tuple

    def momentum_weight(self, mom) -> Q:
        return bilinear(self.gram, mom, mom) / 2

    def weight(self, mono) -> Q:
        osc, mom = mono
        w = self._mom_weight.get(mom)
        if w is None:
            w = self.momentum_weight(mom)
            self._mom_weight[mom] = w
        return w + osc_weight(osc)

    def format_osc(self, osc) -> str:
        parts = []
        k = 0
        while k < len(osc):
            j = k
            while j < len(osc) and osc[j] == osc[k]:
                j += 1
            i, n = osc[k]
            power = j - k
            parts.append(f"b({i + 1},{-n})" + (f"^{power}" if power > 1 else ""))
            k = j
        return "".join(parts)

    def format_mono(self, mono) -> str:
        return self.format_osc(mono[0]) + "|0>"

    def sort_key(self, mono):
        return (self.weight(mono), mono[1], tuple(osc_key(p) for p in mono[0]))

    def heis_weight(self, mono) -> int:
        return osc_weight(mono[0])


class HeisenbergModule(FockSpace):
    """M(1, lambda): oscillators on a highest weight vector of momentum lambda."""

    def __init__(self, voa: "HeisenbergVOA", lam: Sequence):
        super().__init__()
        self.voa = voa
        self.rank = voa.rank
        self.gram = voa.gram
        self.lam = tuple(Q(x) for x in lam)
        if len(self.lam) != self.rank:
            raise ValueError("lambda has the wrong length")
        self._mom_weight = {}
        self.min_weight = self.momentum_weight(self.lam)
        self.top_mono = ((), self.lam)
        self.name = f"M(1,{'(' + ','.join(format_rational(x) for x in self.lam) + ')'})"

    def basis_of_weight(self, w) -> list:
        h = Q(w) - self.min_weight
        if h < 0 or h.denominator != 1:
            return []
        return [(osc, self.lam) for osc in colored_partitions(int(h), self.rank)]

    def _generator_mode(self, gen, n, mono) -> dict:
        return heis_mode(self.gram, gen[1], n, mono)

    def mode_evaluator_free_field(self, vmono, n, wmono) -> dict:
        return free_field_mode(self, vmono, n, wmono)


class HeisenbergVOA(HeisenbergModule, VoaContext):
    """M(1) with conformal vector built from the dual basis of the Gram form."""

    construction = "heisenberg"

    def __init__(self, spec: HeisenbergSpec, truncation: TruncationPolicy | None = None):
        VoaContext.__init__(self, truncation)
        self.spec = spec
        self.rank = spec.rank
        self.gram = spec.gram
        self.gram_inv = inverse(spec.gram)
        self.lam = tuple(Q(0) for _ in range(self.rank))
        self._mom_weight = {}
        self.min_weight = Q(0)
        self.vacuum_mono = ((), self.lam)
        self.central_charge = Q(self.rank)
        self.generators = {("b", i): Q(1) for i in range(self.rank)}
        self.name = f"M(1) rank {self.rank}"
        self._modules: dict = {}

    @property
    def top_mono(self):
        return self.vacuum_mono

    @cached_property
    def omega(self) -> State:
        terms: dict = {}
        for i in range(self.rank):
            for j in range(self.rank):
                c = self.gram_inv[i][j]
                if c:
                    osc = insert_osc(((i, 1),), j, 1)
                    key = (osc, self.lam)
                    terms[key] = terms.get(key, 0) + c / 2
        return State(self, terms)

    def generator_of(self, mono):
        osc, _ = mono
        if len(osc) == 1 and osc[0][1] == 1:
            return ("b", osc[0][0])
        return None

    def split(self, mono):
        osc, mom = mono
        i, n = osc[0]
        return ("b", i), -n, (osc[1:], mom)

    def generator_state(self, gen) -> State:
        return State.basis(self, (((gen[1], 1),), self.lam))

    def module(self, lam) -> HeisenbergModule:
        lam = tuple(Q(x) for x in lam)
        if not any(lam):
            return self
        mod = self._modules.get(lam)
        if mod is None:
            mod = self._modules[lam] = HeisenbergModule(self, lam)
        return mod

    def metadata(self) -> dict:
        meta = super().metadata()
        meta["rank"] = str(self.rank)
        return meta


def build_m1(spec: HeisenbergSpec, lam: Sequence | None = None,
             truncation: TruncationPolicy | None = None):
    """M(1) for ``spec``; with nonzero ``lam`` returns the module M(1, lam) instead."""
    voa = HeisenbergVOA(spec, truncation)
    if lam is None:
        return voa
    return voa.module(lam)


# ---------------------------------------------------------------------------
# closed-form normal-ordered vertex operators

def free_field_mode(space: FockSpace, vmono, n, wmono, cocycle=None, coset_shift=None) -> dict:
    """Coefficient of ``z^{-n-1}`` in the normal-ordered free-field expression of ``Y(v, z) w``.

    ``v = b(i1,-n1)...b(ik,-nk) e^beta`` maps to
    ``: prod_j d^{nj-1} b_ij(z) / (nj-1)!  E^-(beta,z) E^+(beta,z) e_beta z^beta :``
    with every creation operator (negative modes, ``E^-``, ``e_beta``) to the
    left of every annihilation operator. ``cocycle(beta, gamma)`` supplies
    the sign of ``e_beta e^gamma``; absent for pure Heisenberg states.
    """
    gram = space.gram
    osc_v, beta = vmono
    has_beta = any(beta)
    vspace = space.voa
    target = vspace.weight(vmono) + space.weight(wmono) - n - 1
    if target < space.min_weight:
        return {}
    if target > space.cap:
        raise WeightCapExceeded(target, space.cap)
    zwant = -n - 1
    factors = list(osc_v)
    k = len(factors)
    result: dict = {}
    for size in range(k + 1):
        for ann in combinations(range(k), size):
            cre = [j for j in range(k) if j not in ann]
            cur = {(0, wmono): Q(1)}
            for j in ann:
                i, nj = factors[j]
                new: dict = {}
                for (ze, m), c in cur.items():
                    for mm in range(0, space.heis_weight(m) + 1):
                        cj = int_binom(-mm - 1, nj - 1)
                        if not cj:
                            continue
                        for m2, c2 in heis_mode(gram, i, mm, m).items():
                            key = (ze - mm - nj, m2)
                            v = new.get(key, 0) + c * cj * c2
                            if v:
                                new[key] = v
                            else:
                                new.pop(key, None)
                cur = new
            if has_beta:
                new = {}
                for (ze, m), c in cur.items():
                    gamma = m[1]
                    shift = bilinear(gram, beta, gamma)
                    for N, pn in enumerate(exp_coefficients(gram, beta, +1, space.heis_weight(m), m)):
                        for m2, c2 in pn.items():
                            sign = cocycle(beta, gamma) if cocycle else 1
                            moved = (m2[0], tuple(a + b for a, b in zip(m2[1], beta)))
                            key = (ze - N + shift, moved)
                            v = new.get(key, 0) + c * c2 * sign
                            if v:
                                new[key] = v
                            else:
                                new.pop(key, None)
                cur = new
                new = {}
                for (ze, m), c in cur.items():
                    room = target - space.weight(m)
                    if room < 0:
                        continue
                    for M, pm in enumerate(exp_coefficients(gram, beta, -1, floor_q(room), m)):
                        for m2, c2 in pm.items():
                            key = (ze + M, m2)
                            v = new.get(key, 0) + c * c2
                            if v:
                                new[key] = v
                            else:
                                new.pop(key, None)
                cur = new
            for j in cre:
                i, nj = factors[j]
                new = {}
                for (ze, m), c in cur.items():
                    room = floor_q(target - space.weight(m))
                    for p in range(1, room + 1):
                        mm = -p
                        cj = int_binom(-mm - 1, nj - 1)
                        if not cj:
                            continue
                        m2 = (insert_osc(m[0], i, p), m[1])
                        key = (ze - mm - nj, m2)
                        v = new.get(key, 0) + c * cj
                        if v:
                            new[key] = v
                        else:
                            new.pop(key, None)
                cur = new
            for (ze, m), c in cur.items():
                if ze == zwant:
                    if space.weight(m) != target:
                        raise AssertionError("grading mismatch in free-field evaluation")
                    add_scaled(result, {m: c})
    return result
