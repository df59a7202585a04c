"""Exact linear algebra over the rationals.

Everything here is fraction-free in spirit: eliminations are exact, a
"no solution" answer is a certified infeasibility, and determinants use
Bareiss pivoting so intermediate values stay divisions of earlier exact
quantities.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]


def _copy(m) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


def determinant(m) -> Fraction:
    """Bareiss fraction-free determinant. The empty matrix has det 1."""
    a = _copy(m)
    n = len(a)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rref(m) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    a = _copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if a[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def solve(m, rhs) -> list[Fraction] | None:
    """One exact solution of m x = rhs, free variables set to 0.

    Returns None when the system is infeasible.
    """
    rows = len(m)
    if rows == 0:
        return []
    cols = len(m[0])
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(m, rhs)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return x


def nullspace(m) -> list[list[Fraction]]:
    """Basis of the right null space of m (possibly empty)."""
    rows = len(m)
    if rows == 0:
        return []
    cols = len(m[0])
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis
