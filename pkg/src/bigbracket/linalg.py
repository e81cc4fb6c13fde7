"""Small exact linear-algebra helpers over the rationals (row reduction only)."""

from __future__ import annotations

from fractions import Fraction


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: list[list[Fraction]]) -> int:
    return len(rref(rows)[1])


def in_span(rows: list[list[Fraction]], vec: list[Fraction]) -> bool:
    if all(x == 0 for x in vec):
        return True
    base = rank(rows)
    return rank(rows + [list(vec)]) == base


def solve_particular(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """One exact solution of A x = b, or None if inconsistent (free vars -> 0)."""
    if not a:
        return []
    ncols = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][-1]
    return x


def is_nondegenerate(matrix: list[list[Fraction]]) -> bool:
    return rank(matrix) == len(matrix)
