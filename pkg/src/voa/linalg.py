"""Exact linear algebra over the rationals.

Small dense helpers for Gram matrices, and an incremental sparse row-echelon
reducer used for quotient spaces (ideals, Zhu's O(V)).
"""

from __future__ import annotations

from typing import Callable, Hashable, Mapping, Sequence

from .formal import Q


def to_matrix(rows) -> tuple:
    return tuple(tuple(Q(x) for x in row) for row in rows)


def determinant(mat: Sequence[Sequence]) -> Q:
    a = [[Q(x) for x in row] for row in mat]
    n = len(a)
    det = Q(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Q(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return det


def inverse(mat: Sequence[Sequence]) -> tuple:
    n = len(mat)
    a = [[Q(x) for x in row] + [Q(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def mat_vec(mat, vec) -> tuple:
    return tuple(sum((Q(x) * y for x, y in zip(row, vec)), Q(0)) for row in mat)


def bilinear(mat, u, v) -> Q:
    return sum((Q(u[i]) * mat[i][j] * v[j] for i in range(len(u)) for j in range(len(v))
                if u[i] and v[j]), Q(0))


def is_symmetric(mat) -> bool:
    return all(mat[i][j] == mat[j][i] for i in range(len(mat)) for j in range(len(mat)))


def ldl(mat) -> tuple[list, list]:
    """``Q(x) = sum_i d_i (x_i + sum_{j>i} mu[i][j] x_j)^2`` for a symmetric matrix."""
    n = len(mat)
    a = [[Q(x) for x in row] for row in mat]
    d = [Q(0)] * n
    mu = [[Q(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] == 0:
            raise ValueError("matrix is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] -= d[i] * mu[i][j] * mu[i][k]
    return d, mu


def is_positive_definite(mat) -> bool:
    try:
        d, _ = ldl(mat)
    except ValueError:
        return False
    return all(x > 0 for x in d)


class RowReducer:
    """Incremental sparse Gaussian elimination over Q.

    Rows are dicts ``key -> coefficient``. Each stored row is normalized so
    that its pivot (the largest key under ``order``) has coefficient 1 and no
    other stored row contains that pivot, so :meth:`reduce` returns a
    canonical normal form modulo the span.
    """

    def __init__(self, order: Callable[[Hashable], object] | None = None):
        self.order = order or (lambda k: k)
        self.rows: dict = {}

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self) -> set:
        return set(self.rows)

    def _pivot(self, vec: Mapping):
        return max(vec, key=self.order)

    def reduce(self, vec: Mapping) -> dict:
        """Normal form of ``vec`` modulo the current span."""
        v = {k: Q(c) for k, c in vec.items() if c}
        if not self.rows:
            return v
        # pivot-free after one sweep because stored rows are fully reduced
        for p in [k for k in v if k in self.rows]:
            c = v.get(p)
            if not c:
                continue
            for k, x in self.rows[p].items():
                nv = v.get(k, 0) - c * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def add(self, vec: Mapping) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        p = self._pivot(v)
        inv = 1 / v[p]
        v = {k: c * inv for k, c in v.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                for k, x in v.items():
                    nv = row.get(k, 0) - c * x
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self.rows[p] = v
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)
