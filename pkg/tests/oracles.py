"""Brute-force reference computations, deliberately independent of the package.

They only read ``NCPoly.terms`` (a dict from generator-index tuples to
coefficients) and use plain Fraction arithmetic with their own elimination.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product


def rank(rows) -> int:
    """Rank of sparse rows ``{column: value}`` over the rationals."""
    pivots: dict = {}
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        while row:
            col = max(row)
            if col not in pivots:
                lead = row[col]
                pivots[col] = {k: v / lead for k, v in row.items()}
                break
            c = row[col]
            for k, v in pivots[col].items():
                s = row.get(k, 0) - c * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
    return len(pivots)


def ideal_slice(relations, n: int, m: int):
    """Spanning rows of the degree-m part of the two-sided ideal."""
    for r in relations:
        d = len(next(iter(r.terms)))
        for k in range(m - d + 1):
            for u in product(range(n), repeat=k):
                for v in product(range(n), repeat=m - d - k):
                    yield {u + w + v: c for w, c in r.terms.items()}


def hilbert(relations, n: int, upto: int) -> list[int]:
    return [n**m - rank(ideal_slice(relations, n, m)) for m in range(upto + 1)]


def in_ideal(f, relations, n: int) -> bool:
    """Membership of a homogeneous f by comparing ranks."""
    if not f.terms:
        return True
    m = len(next(iter(f.terms)))
    rows = list(ideal_slice(relations, n, m))
    return rank(rows) == rank(rows + [dict(f.terms)])


def commutative_quotient_dims(quadrics, n: int, upto: int) -> list[int]:
    """dim (k[z]/<Q>)_m for commuting variables; quadrics as {(i, j): c} dicts."""

    def exps(word):
        e = [0] * n
        for i in word:
            e[i] += 1
        return tuple(e)

    out = []
    for m in range(upto + 1):
        monos = list(combinations_with_replacement(range(n), m))
        rows = []
        if m >= 2:
            for mono in combinations_with_replacement(range(n), m - 2):
                for q in quadrics:
                    row: dict = {}
                    for w, c in q.items():
                        key = exps(tuple(mono) + tuple(w))
                        row[key] = row.get(key, 0) + Fraction(c)
                    rows.append(row)
        out.append(len(monos) - rank(rows))
    return out
