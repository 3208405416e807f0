"""Virasoro backend: the vacuum algebra V_k, Verma modules V(k, h), discrete series.

A basis monomial is a weakly decreasing tuple ``(n1, ..., ns)`` standing for
``L(-n1)...L(-ns)`` applied to the lowest vector; parts are ``>= 2`` in
``V_k`` (where ``L(-1)|0> = 0``) and ``>= 1`` in ``V(k, h)``.
"""

from __future__ import annotations

from functools import cached_property

from .core import Space, State, TruncationPolicy, VoaContext, add_scaled
from .formal import Q, format_rational, rational


def partitions(total: int, min_part: int = 1, max_part: int | None = None):
    """Weakly decreasing tuples of parts in ``[min_part, max_part]`` summing to ``total``."""
    if total == 0:
        yield ()
        return
    if max_part is None or max_part > total:
        max_part = total
    for first in range(max_part, min_part - 1, -1):
        for rest in partitions(total - first, min_part, first):
            yield (first,) + rest


class _VirasoroSpace(Space):
    min_part = 1

    def _init_common(self, k, h):
        self.k = Q(k)
        self.h = Q(h)
        self.min_weight = self.h
        self.top_mono = ()
        self._l_cache: dict = {}

    def weight(self, mono) -> Q:
        return self.h + sum(mono)

    def basis_of_weight(self, w) -> list:
        n = Q(w) - self.h
        if n < 0 or n.denominator != 1:
            return []
        return list(partitions(int(n), self.min_part))

    def sort_key(self, mono):
        return (self.weight(mono), tuple(-p for p in mono))

    def format_mono(self, mono) -> str:
        parts = []
        k = 0
        while k < len(mono):
            j = k
            while j < len(mono) and mono[j] == mono[k]:
                j += 1
            parts.append(f"L({-mono[k]})" + (f"^{j - k}" if j - k > 1 else ""))
            k = j
        return "".join(parts) + "|0>"

    def apply_l(self, n: int, mono: tuple) -> dict:
        """``L(n)`` on a basis monomial, straightened back to the PBW basis."""
        key = (n, mono)
        hit = self._l_cache.get(key)
        if hit is not None:
            return hit
        if n == 0:
            w = self.weight(mono)
            res = {mono: w} if w else {}
        elif n > 0:
            if not mono:
                res = {}
            else:
                n1, rest = mono[0], mono[1:]
                res = {}
                # L(n) L(-n1) = L(-n1) L(n) + (n + n1) L(n - n1) + (n^3 - n)/12 delta_{n,n1} c
                for m, c in self.apply_l(n, rest).items():
                    add_scaled(res, self.apply_l(-n1, m), c)
                add_scaled(res, self.apply_l(n - n1, rest), n + n1)
                if n == n1:
                    add_scaled(res, {rest: 1}, Q(n ** 3 - n, 12) * self.k)
        else:
            p = -n
            if not mono:
                res = {} if p < self.min_part else {(p,): Q(1)}
            elif p >= mono[0]:
                res = {(p,) + mono: Q(1)}
            else:
                n1, rest = mono[0], mono[1:]
                res = {}
                # L(-p) L(-n1) = L(-n1) L(-p) + (n1 - p) L(-p - n1)
                for m, c in self.apply_l(-p, rest).items():
                    add_scaled(res, self.apply_l(-n1, m), c)
                add_scaled(res, self.apply_l(-p - n1, rest), n1 - p)
        self._l_cache[key] = res
        return res

    def _generator_mode(self, gen, n, mono) -> dict:
        # omega_n = L(n - 1)
        return self.apply_l(int(n) - 1, mono)


class VermaModule(_VirasoroSpace):
    """V(k, h) as a module for V_k."""

    def __init__(self, voa: "VirasoroVOA", h):
        super().__init__()
        self.voa = voa
        self._init_common(voa.k, h)
        self.name = f"V({format_rational(voa.k)},{format_rational(self.h)})"


class VirasoroVOA(_VirasoroSpace, VoaContext):
    """V_k = V(k, 0) / U(Vir) L(-1)1 with omega = L(-2)|0>."""

    construction = "virasoro"
    min_part = 2

    def __init__(self, k, truncation: TruncationPolicy | None = None):
        VoaContext.__init__(self, truncation)
        self._init_common(rational(k), 0)
        self.vacuum_mono = ()
        self.central_charge = self.k
        self.generators = {"L": Q(2)}
        self.name = f"V_{format_rational(self.k)}"
        self._modules: dict = {}

    @property
    def top_mono(self):
        return ()

    @top_mono.setter
    def top_mono(self, value):
        pass

    @cached_property
    def omega(self) -> State:
        return State.basis(self, (2,))

    def generator_of(self, mono):
        return "L" if mono == (2,) else None

    def split(self, mono):
        return "L", 1 - mono[0], mono[1:]

    def generator_state(self, gen) -> State:
        return self.omega

    def verma(self, h) -> VermaModule:
        h = rational(h)
        mod = self._modules.get(h)
        if mod is None:
            mod = self._modules[h] = VermaModule(self, h)
        return mod


def build_virasoro(k, truncation: TruncationPolicy | None = None) -> VirasoroVOA:
    return VirasoroVOA(k, truncation)


def build_verma(k, h, truncation: TruncationPolicy | None = None) -> VermaModule:
    return VirasoroVOA(k, truncation).verma(h)


def central_charge_minimal(m: int) -> Q:
    return 1 - Q(6, (m + 2) * (m + 3))


def discrete_series(m: int) -> tuple[Q, dict]:
    """``c_m`` and ``h^m_{r,s}`` for ``1 <= s <= r <= m + 1``, keyed by ``(r, s)``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    p, q = m + 2, m + 3
    table = {}
    for r in range(1, m + 2):
        for s in range(1, r + 1):
            table[(r, s)] = Q((q * r - p * s) ** 2 - 1, 4 * p * q)
    return central_charge_minimal(m), table
