"""Small dense linear algebra over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`. Everything here is
exact; nothing is ever converted to floating point.
"""
from fractions import Fraction
from math import lcm

import numpy as np

__all__ = [
    "to_fractions",
    "solve",
    "rank",
    "matmul",
    "is_zero",
    "nilpotency_index",
]


def to_fractions(matrix):
    return [[Fraction(x) for x in row] for row in matrix]


def solve(matrix, rhs):
    """Solve the square system ``matrix @ x = rhs`` by Gauss-Jordan elimination.

    Raises ``ZeroDivisionError`` if the matrix is singular.
    """
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    if any(len(row) != n + 1 for row in aug):
        raise ValueError("solve expects a square matrix and a matching right-hand side")

    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        prow = [x / p for x in aug[col]]
        aug[col] = prow
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], prow)]

    return [row[n] for row in aug]


def rank(matrix):
    """Exact rank by row reduction."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    rows = [row for row in rows if any(row)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pivot = next((k for k in range(r, len(rows)) if rows[k][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        prow = rows[r]
        p = prow[col]
        for k in range(r + 1, len(rows)):
            if rows[k][col] != 0:
                factor = rows[k][col] / p
                rows[k] = [x - factor * y for x, y in zip(rows[k], prow)]
        r += 1
        # drop rows that became zero; keeps the sweep cheap for low-rank input
        rows = rows[:r] + [row for row in rows[r:] if any(row)]
        if r == len(rows):
            break
    return r


def matmul(a, b):
    inner = len(b)
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x != 0]
        out.append([sum((x * b[k][j] for k, x in nz), Fraction(0)) for j in range(ncols)])
    if a and len(a[0]) != inner:
        raise ValueError("inner dimensions do not match")
    return out


def is_zero(matrix):
    return all(x == 0 for row in matrix for x in row)


def _integer_scaled(matrix):
    # common denominator so powers can be taken with plain integers
    den = 1
    for row in matrix:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    ints = np.array(
        [[int(Fraction(x) * den) for x in row] for row in matrix], dtype=object
    )
    return ints


def nilpotency_index(matrix, max_power):
    """Least ``k <= max_power`` with ``matrix**k == 0``, or None if there is none.

    The zero matrix has index 1.
    """
    n = len(matrix)
    if n == 0:
        return 1
    scaled = _integer_scaled(matrix)
    power = scaled
    for k in range(1, max_power + 1):
        if not any(power.flat):
            return k
        power = power.dot(scaled)
    return None
