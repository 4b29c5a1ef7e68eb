"""Exact-rational feasibility of ``A x <= b, x >= 0`` by phase-one simplex (Bland's rule)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def feasible_point(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Return some ``x >= 0`` with ``A x <= b``, or None if there is none.

    Arithmetic is exact; Bland's rule guarantees termination.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    if m == 0:
        return [Fraction(0)] * n

    # columns: x (n) | slack (m) | artificial (one per row with b < 0)
    negative_rows = [i for i in range(m) if b[i] < 0]
    n_art = len(negative_rows)
    width = n + m + n_art
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    basis: list[int] = []
    art_col = {}
    for i in range(m):
        row = A[i] + [Fraction(0)] * (m + n_art)
        row[n + i] = Fraction(1)
        if b[i] < 0:
            row = [-v for v in row]
            col = n + m + len(art_col)
            art_col[i] = col
            row[col] = Fraction(1)
            basis.append(col)
            rhs.append(-b[i])
        else:
            basis.append(n + i)
            rhs.append(b[i])
        rows.append(row)

    if not n_art:
        return [Fraction(0)] * n

    # reduced costs of the phase-one objective (sum of artificials)
    cost = [Fraction(0)] * width
    for i in negative_rows:
        for j in range(width):
            cost[j] -= rows[i][j]
    for col in art_col.values():
        cost[col] = Fraction(0)

    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        pivot_row = None
        best = None
        for i in range(m):
            a = rows[i][entering]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[pivot_row]):
                    best, pivot_row = ratio, i
        if pivot_row is None:  # unbounded direction; cannot happen for phase one
            break
        _pivot(rows, rhs, cost, pivot_row, entering)
        basis[pivot_row] = entering

    # the phase-one optimum is the sum of artificial values left in the basis
    residual = sum((rhs[i] for i in range(m) if basis[i] >= n + m), Fraction(0))
    if residual > 0:
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(basis):
        if col < n:
            x[col] = rhs[i]
    return x


def _pivot(rows, rhs, cost, r, c):
    piv = rows[r][c]
    row_r = [v / piv for v in rows[r]]
    rows[r] = row_r
    rhs[r] = rhs[r] / piv
    for i in range(len(rows)):
        if i != r:
            f = rows[i][c]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], row_r)]
                rhs[i] -= f * rhs[r]
    f = cost[c]
    if f:
        for j in range(len(cost)):
            cost[j] -= f * row_r[j]
