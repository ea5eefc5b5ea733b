"""Exact Gaussian elimination over Q(sqrt d).

Matrices are lists of rows of :class:`QuadScalar`.  The pivot in each column
is the first row, top to bottom, holding a nonzero entry, so bases and
witnesses are reproducible.
"""

from __future__ import annotations

from typing import Sequence

from .scalars import ONE, ZERO, QuadScalar

Matrix = list  # list[list[QuadScalar]]


def _copy(rows: Sequence[Sequence[QuadScalar]]) -> list[list[QuadScalar]]:
    return [[QuadScalar.coerce(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence[QuadScalar]], ncols: int | None = None) -> tuple[list[list[QuadScalar]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = _copy(rows)
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pr = next((i for i in range(r, len(a)) if a[i][col]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][col].inverse()
        if inv != 1:
            a[r] = [x * inv if x else x for x in a[r]]
        prow = a[r]
        nz = [j for j in range(col, ncols) if prow[j]]
        for i in range(len(a)):
            if i != r:
                f = a[i][col]
                if f:
                    row = a[i]
                    for j in nz:
                        row[j] = row[j] - f * prow[j]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows: Sequence[Sequence[QuadScalar]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[QuadScalar]], ncols: int) -> list[list[QuadScalar]]:
    """Basis of ``{x : A x = 0}``; one vector per free column, in column order."""
    if not rows:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def solve(columns: Sequence[Sequence[QuadScalar]], target: Sequence[QuadScalar]) -> list[QuadScalar] | None:
    """Coefficients ``c`` with ``sum c_j columns[j] == target``, or None.

    ``columns`` must be linearly independent for the answer to be unique.
    """
    m = len(target)
    n = len(columns)
    aug = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(m)]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    out = [ZERO] * n
    for row, p in zip(red, pivots):
        out[p] = row[n]
    return out


def in_span(vectors: Sequence[Sequence[QuadScalar]], w: Sequence[QuadScalar]) -> bool:
    if not any(w):
        return True
    if not vectors:
        return False
    return rank(list(vectors) + [list(w)]) == rank(vectors)


def matmul(a: Sequence[Sequence[QuadScalar]], b: Sequence[Sequence[QuadScalar]]) -> list[list[QuadScalar]]:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [
        [sum((row[k] * b[k][j] for k in range(inner) if row[k] and b[k][j]), ZERO) for j in range(cols)]
        for row in a
    ]


def matvec(a: Sequence[Sequence[QuadScalar]], v: Sequence[QuadScalar]) -> list[QuadScalar]:
    return [sum((x * y for x, y in zip(row, v) if x and y), ZERO) for row in a]


def det(a: Sequence[Sequence[QuadScalar]]) -> QuadScalar:
    n = len(a)
    if n == 0:
        return ONE
    if n == 1:
        return QuadScalar.coerce(a[0][0])
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    m = _copy(a)
    out = ONE
    for col in range(n):
        pr = next((i for i in range(col, n) if m[i][col]), None)
        if pr is None:
            return ZERO
        if pr != col:
            m[col], m[pr] = m[pr], m[col]
            out = -out
        piv = m[col][col]
        out = out * piv
        inv = piv.inverse()
        for i in range(col + 1, n):
            f = m[i][col] * inv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return out


def is_zero_matrix(a: Sequence[Sequence[QuadScalar]]) -> bool:
    return not any(x for row in a for x in row)
