"""Exact scalars and formal-calculus primitives.

Every coefficient in the package is an exact rational (``gmpy2.mpq``).
Infinite formal series in the variables ``z0, z1, z2`` only ever appear
through coefficient queries on a finite :class:`ExponentWindow`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Mapping

from gmpy2 import mpq

Q = mpq
"""The rational scalar type."""

VARIABLES = ("z0", "z1", "z2")

_RATIONAL_RE = re.compile(r"^\s*([+-]?)\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


def rational(value) -> mpq:
    """Coerce ``value`` (int, Fraction, mpq or a ``"p/q"`` string) to a rational."""
    if isinstance(value, str):
        text = value.replace("−", "-")
        m = _RATIONAL_RE.match(text)
        if m is None:
            raise ValueError(f"not a rational literal: {value!r}")
        sign, num, den = m.groups()
        if den is not None and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        q = Q(int(num), int(den) if den else 1)
        return -q if sign == "-" else q
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Q(value)


def format_rational(value) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Q(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_integer(value) -> bool:
    return Q(value).denominator == 1


@lru_cache(maxsize=65536)
def _binom_cached(s: mpq, m: int) -> mpq:
    acc = Q(1)
    for i in range(m):
        acc = acc * (s - i) / (i + 1)
    return acc


def binom(s, m: int) -> mpq:
    """Generalized binomial ``s(s-1)...(s-m+1)/m!`` for rational ``s``."""
    if m < 0:
        raise ValueError("binom needs a nonnegative lower argument")
    return _binom_cached(Q(s), int(m))


@lru_cache(maxsize=65536)
def int_binom(s: int, m: int) -> int:
    """Integer-upper-argument binomial returning a plain ``int`` (hot paths)."""
    if m < 0:
        return 0
    return int(_binom_cached(Q(s), m))


@dataclass(frozen=True)
class ExponentWindow:
    """Inclusive integer exponent bounds for ``z0, z1, z2``."""

    z0: tuple[int, int] = (0, 0)
    z1: tuple[int, int] = (0, 0)
    z2: tuple[int, int] = (0, 0)

    def __post_init__(self):
        for name in VARIABLES:
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"empty window for {name}: {lo} > {hi}")

    def bounds(self, var: str) -> tuple[int, int]:
        return getattr(self, var)

    def range(self, var: str) -> range:
        lo, hi = self.bounds(var)
        return range(lo, hi + 1)

    def contains(self, exps: tuple[int, int, int]) -> bool:
        return all(lo <= e <= hi for e, (lo, hi) in zip(exps, (self.z0, self.z1, self.z2)))

    def points(self) -> Iterator[tuple[int, int, int]]:
        return product(self.range("z0"), self.range("z1"), self.range("z2"))

    @classmethod
    def cube(cls, lo: int, hi: int) -> "ExponentWindow":
        return cls((lo, hi), (lo, hi), (lo, hi))


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients of a formal series restricted to a window.

    ``coeffs`` maps integer exponent triples ``(e0, e1, e2)`` to nonzero
    rationals. The actual exponent of ``z_i`` is ``e_i + shift[i]``; the
    shift carries fractional sectors such as ``z1^{-j/r}``. ``second`` names
    the variable the binomials were expanded in (nonnegative powers).
    """

    coeffs: Mapping[tuple[int, int, int], mpq]
    window: ExponentWindow
    second: str | None = None
    shift: tuple[mpq, mpq, mpq] = field(default=(Q(0), Q(0), Q(0)))

    def __post_init__(self):
        clean = {}
        for exps, c in self.coeffs.items():
            if not self.window.contains(exps):
                raise ValueError(f"exponent {exps} outside window")
            if c:
                clean[tuple(exps)] = Q(c)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "shift", tuple(Q(s) for s in self.shift))

    def __getitem__(self, exps) -> mpq:
        return self.coeffs.get(tuple(exps), Q(0))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.window == other.window and self.shift == other.shift
                and self.coeffs == other.coeffs)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._compatible(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return TruncatedSeries(out, self.window, self.second, self.shift)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries({k: -c for k, c in self.coeffs.items()},
                               self.window, self.second, self.shift)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Product restricted to the common window.

        Only exact where every contributing pair of terms lies inside the
        windows of both factors; callers pick windows accordingly.
        """
        self._compatible(other)
        out: dict[tuple[int, int, int], mpq] = {}
        for ka, ca in self.coeffs.items():
            for kb, cb in other.coeffs.items():
                k = (ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2])
                if self.window.contains(k):
                    out[k] = out.get(k, 0) + ca * cb
        shift = tuple(a + b for a, b in zip(self.shift, other.shift))
        return TruncatedSeries(out, self.window, self.second, shift)

    def _compatible(self, other):
        if self.window != other.window:
            raise ValueError("series live on different windows")


def _var_index(var: str) -> int:
    try:
        return VARIABLES.index(var)
    except ValueError:
        raise ValueError(f"unknown formal variable {var!r}") from None


def expand_binomial(n: int, window: ExponentWindow, first: str, second: str,
                    first_coeff: int = 1, second_coeff: int = 1) -> TruncatedSeries:
    """``(first_coeff*first + second_coeff*second)^n`` in nonnegative powers of ``second``."""
    i, j = _var_index(first), _var_index(second)
    if i == j:
        raise ValueError("the two variables must differ")
    lo, hi = window.bounds(second)
    coeffs = {}
    for k in range(max(lo, 0), hi + 1):
        if n >= 0 and k > n:
            break
        exps = [0, 0, 0]
        exps[i] = n - k
        exps[j] = k
        if not window.contains(tuple(exps)):
            continue
        coeffs[tuple(exps)] = binom(n, k) * Q(first_coeff) ** (n - k) * Q(second_coeff) ** k
    return TruncatedSeries(coeffs, window, second)


def expand_power(n: int, window: ExponentWindow, x: str = "z1", y: str = "z2") -> TruncatedSeries:
    """``(x - y)^n`` expanded in nonnegative integral powers of ``y``."""
    return expand_binomial(n, window, x, y, 1, -1)


def delta_series(window: ExponentWindow, x: str = "z1", y: str = "z2") -> TruncatedSeries:
    """``x^{-1} delta(y/x) = sum_n x^{-n-1} y^n`` on the window."""
    i, j = _var_index(x), _var_index(y)
    coeffs = {}
    for n in window.range(y):
        exps = [0, 0, 0]
        exps[i] = -n - 1
        exps[j] = n
        if window.contains(tuple(exps)):
            coeffs[tuple(exps)] = Q(1)
    return TruncatedSeries(coeffs, window, y)


@dataclass(frozen=True)
class DeltaCheck:
    ok: bool
    first_difference: tuple[int, int, int] | None = None
    lhs: mpq | None = None
    rhs: mpq | None = None

    def __bool__(self):
        return self.ok


def _delta_lhs(j: int, r: int, window: ExponentWindow) -> TruncatedSeries:
    # z1^{-1} ((z2+z0)/z1)^{j/r} delta((z2+z0)/z1)
    #   = sum_n z1^{-n-1-j/r} (z2+z0)^{n+j/r},  expanded in powers of z0
    s = Q(j, r)
    coeffs = {}
    for k in window.range("z0"):
        if k < 0:
            continue
        for e1 in window.range("z1"):
            n = -e1 - 1
            e2 = n - k
            if window.contains((k, e1, e2)):
                coeffs[(k, e1, e2)] = binom(n + s, k)
    return TruncatedSeries(coeffs, window, "z0", (0, -s, s))


def _delta_rhs(j: int, r: int, window: ExponentWindow) -> TruncatedSeries:
    # z2^{-1} ((z1-z0)/z2)^{-j/r} delta((z1-z0)/z2)
    #   = sum_m z2^{-1-m+j/r} (z1-z0)^{m-j/r},  expanded in powers of z0
    s = Q(j, r)
    coeffs = {}
    for k in window.range("z0"):
        if k < 0:
            continue
        for e2 in window.range("z2"):
            m = -1 - e2
            e1 = m - k
            if window.contains((k, e1, e2)):
                coeffs[(k, e1, e2)] = (-1) ** k * binom(m - s, k)
    return TruncatedSeries(coeffs, window, "z0", (0, -s, s))


def delta_relation_check(j: int, r: int, window: ExponentWindow) -> DeltaCheck:
    """Compare both sides of the fractional delta-function relation on ``window``.

    Exponents are integer parts; the ``z1`` sector is shifted by ``-j/r`` and
    the ``z2`` sector by ``+j/r`` on both sides.
    """
    if r <= 0 or not 0 <= j < r:
        raise ValueError("need 0 <= j < r")
    lhs, rhs = _delta_lhs(j, r, window), _delta_rhs(j, r, window)
    for exps in window.points():
        a, b = lhs[exps], rhs[exps]
        if a != b:
            return DeltaCheck(False, exps, a, b)
    return DeltaCheck(True)
