"""Exact linear algebra over whatever field the entries live in.

Rows are sparse dicts ``column -> entry``.  Entries may be Fractions,
RationalFunctions or prime-field values; only ``+ - * /`` and truthiness
are used.
"""
from __future__ import annotations


def axpy(row: dict, c, other: dict) -> None:
    """In place: ``row += c * other``, dropping zeros."""
    for col, v in other.items():
        new = row.get(col, 0) + c * v
        if new:
            row[col] = new
        else:
            row.pop(col, None)


def echelonize(rows, key=None) -> dict:
    """Reduced row echelon form of the span of ``rows``.

    The pivot of a row is its largest column under ``key``.  Returns a dict
    ``pivot -> row`` where every row is monic at its pivot and contains no
    other pivot column.
    """
    pivots: dict = {}
    for src in rows:
        row = {c: v for c, v in src.items() if v}
        while row:
            lead = max(row, key=key)
            piv = pivots.get(lead)
            if piv is None:
                break
            axpy(row, -row[lead], piv)
        if not row:
            continue
        inv = 1 / row[lead]
        for c in row:
            row[c] = row[c] * inv
        pivots[lead] = row
    for col in sorted(pivots, key=key):
        row = pivots[col]
        for other in [c for c in row if c != col and c in pivots]:
            axpy(row, -row[other], pivots[other])
    return pivots


def rank(rows, key=None) -> int:
    return len(echelonize(rows, key))


def dense_rref(matrix: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of a dense matrix; returns (rows, pivot columns)."""
    m = [list(r) for r in matrix]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
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
    return m[:r], pivots


def nullspace(matrix: list[list], ncols: int | None = None, one=1) -> list[list]:
    """Basis of ``{v : matrix @ v = 0}``, one vector per free column."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    rows, pivots = dense_rref(matrix) if matrix else ([], [])
    zero = one - one
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [zero] * ncols
        v[free] = one
        for row, pc in zip(rows, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis
