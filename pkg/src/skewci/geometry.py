"""Point-module conditions, parametrized point families and annihilation tests.

A right point module over an algebra generated in degree one is recorded by
a sequence of projective points ``p_0, p_1, ...``; a homogeneous element
``f`` of degree ``d`` acts on the basis vector in degree ``s`` through the
multilinearization of ``f`` evaluated at ``(p_s, ..., p_{s+d-1})``.

Families carry one projective parameter ``(a, b)``; their coordinates are
sympy polynomials in ``a`` and ``b``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy
from sympy import Poly

from .coeff import QQ, QQ_q, Field, PrimeScalar, RationalFunction, format_scalar
from .expr import ExpressionParseError, evaluate, parse_tree
from .freealg import MultiPoly, NCPoly, multilinearize
from .linalg import nullspace
from .rewrite import Presentation
from .skew import DEFAULT_PRIMES, _symmetric_lift, _to_prime, small_points

A_SYM, B_SYM = sympy.symbols("a b")


class NotQuadratic(ValueError):
    pass


def _domain(field: Field):
    if field is QQ_q:
        return sympy.ZZ.frac_field(sympy.Symbol("q"))
    return sympy.QQ


def _to_domain(c, dom):
    if isinstance(c, RationalFunction):
        return c._f if dom != sympy.QQ else dom.convert(c.constant_value())
    c = Fraction(c)
    return dom.convert(sympy.Rational(c.numerator, c.denominator))


def _const(c, dom) -> Poly:
    return Poly.from_dict({(0, 0): _to_domain(c, dom)}, A_SYM, B_SYM, domain=dom)


@dataclass(frozen=True)
class ParametricPointFamily:
    """``period`` projective points in ``(a, b)``, continued periodically."""

    points: tuple
    field: Field = QQ

    @property
    def period(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def point(self, s: int) -> tuple:
        return self.points[s % self.period]

    @classmethod
    def parse(cls, rows: Sequence[Sequence[str]], field: Field = QQ, q_value=None) -> "ParametricPointFamily":
        dom = _domain(field)
        pts = []
        for row in rows:
            pt = []
            for text in row:
                pt.append(_parse_binary(str(text), field, dom, q_value))
            pts.append(tuple(pt))
        if not pts or len({len(p) for p in pts}) != 1:
            raise ValueError("a family needs at least one point and a common dimension")
        for p in pts:
            if all(c.is_zero for c in p):
                raise ValueError("family point is identically zero")
        return cls(tuple(pts), field)

    def rescaled(self, factors: Sequence[Poly]) -> "ParametricPointFamily":
        return ParametricPointFamily(
            tuple(tuple(c * f for c in p) for p, f in zip(self.points, factors)), self.field
        )

    def format(self) -> list:
        return [[str(c.as_expr()).replace("**", "^") for c in p] for p in self.points]


def _parse_binary(text: str, field: Field, dom, q_value=None) -> Poly:
    tree = parse_tree(text)
    gens = {"a": Poly(A_SYM, A_SYM, B_SYM, domain=dom), "b": Poly(B_SYM, A_SYM, B_SYM, domain=dom)}

    def number(k):
        return _const(k, dom)

    def name(s):
        if s in gens:
            return gens[s]
        if s == "q" and q_value is not None:
            return _const(q_value, dom)
        if s == "q" and field is QQ_q:
            return _const(RationalFunction.q(), dom)
        raise KeyError(s)

    def invert(v):
        if v.total_degree() > 0 or v.is_zero:
            raise ExpressionParseError("can only divide by a nonzero constant", text)
        return Poly.from_dict({(0, 0): dom.one / v.LC()}, A_SYM, B_SYM, domain=dom)

    return evaluate(tree, number, name, invert, text)


def point_conditions(p: Presentation) -> list[MultiPoly]:
    """One bilinear form per defining relation (all relations must be quadratic)."""
    for r in p.relations:
        if r.degree != 2:
            raise NotQuadratic(f"relation {r.format(p.names)} has degree {r.degree}")
    return [multilinearize(r, p.n) for r in p.relations]


def _evaluate_poly(mp: MultiPoly, window, dom) -> Poly:
    total = Poly(0, A_SYM, B_SYM, domain=dom)
    for m, c in mp.terms.items():
        term = _const(c, dom)
        for (g, v), e in m:
            term = term * window[g][v] ** e
        total = total + term
    return total


@dataclass
class FamilyCheck:
    ok: bool
    relation: str | None = None
    window_start: int | None = None
    residue: str | None = None

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        out = {"ok": self.ok}
        if not self.ok:
            out.update(relation=self.relation, window_start=self.window_start, residue=self.residue)
        return out


def verify_family(fam: ParametricPointFamily, p: Presentation) -> FamilyCheck:
    """Check every relation vanishes on every cyclic window of the family."""
    dom = _domain(fam.field)
    for r in p.relations:
        mp = multilinearize(r, p.n)
        d = r.degree
        for s in range(fam.period):
            window = [fam.point(s + t) for t in range(d)]
            val = _evaluate_poly(mp, window, dom)
            if not val.is_zero:
                return FamilyCheck(False, r.format(p.names), s, str(val.as_expr()).replace("**", "^"))
    return FamilyCheck(True)


@dataclass
class AnnihilationVerdict:
    kind: str  # "identically", "nowhere" or "subfamily"
    condition: str | None = None
    values: list = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.condition is not None:
            out["common_zero_locus"] = self.condition
        return out


def annihilates(
    fam: ParametricPointFamily, F: NCPoly | Sequence[NCPoly], L: int | None = None
) -> AnnihilationVerdict:
    """Find the parameters ``(a, b)`` whose point module is killed by all of ``F``.

    The window values are binary forms in ``(a, b)``; over an algebraically
    closed field they share a projective zero exactly when their gcd has
    positive degree.  Factors along which a family point degenerates to the
    zero vector are discarded.
    """
    seq = [F] if isinstance(F, NCPoly) else list(F)
    dom = _domain(fam.field)
    if L is None:
        L = fam.period * max((f.degree for f in seq if f), default=1)
    values = []
    for f in seq:
        if not f:
            continue
        mp = multilinearize(f, fam.dim)
        d = f.degree
        for s in range(L):
            window = [fam.point(s + t) for t in range(d)]
            values.append(_evaluate_poly(mp, window, dom))
    nonzero = [v for v in values if not v.is_zero]
    if not nonzero:
        return AnnihilationVerdict("identically", values=values)
    g = nonzero[0]
    for v in nonzero[1:]:
        g = g.gcd(v)
    for pt in fam.points:
        content = None
        for c in pt:
            if not c.is_zero:
                content = c if content is None else content.gcd(c)
        while content is not None and content.total_degree() > 0:
            common = g.gcd(content)
            if common.total_degree() == 0:
                break
            g = g.exquo(common)
    if g.total_degree() == 0:
        return AnnihilationVerdict("nowhere", values=values)
    return AnnihilationVerdict("subfamily", condition=str(g.as_expr()).replace("**", "^") + " = 0", values=values)


# -- witness search ------------------------------------------------------------


@dataclass
class PointSequence:
    points: tuple
    field: str = "exact"
    verified: bool = False

    def as_dict(self) -> dict:
        return {
            "kind": "truncated point module",
            "length": len(self.points),
            "points": [[format_scalar(x) for x in p] for p in self.points],
            "field": self.field,
            "verified": self.verified,
        }


def _window_forms(relations, F, n):
    rel_forms = [(r.degree, multilinearize(r, n)) for r in relations if r]
    f_forms = [(f.degree, multilinearize(f, n)) for f in F if f]
    return rel_forms, f_forms


def _windows_vanish(forms, seq, end):
    """All forms vanish on every window of ``seq`` that ends at index ``end``."""
    for d, mp in forms:
        start = end - d + 1
        if start < 0:
            continue
        if mp.evaluate(seq[start : end + 1]):
            return False
    return True


def verify_point_sequence(seq, relations, F, n) -> bool:
    rel_forms, f_forms = _window_forms(relations, F, n)
    if any(not any(p) for p in seq):
        return False
    return all(_windows_vanish(rel_forms + f_forms, seq, e) for e in range(len(seq)))


def _next_candidates(rel_forms, prev, n, zero, one):
    rows = []
    for d, mp in rel_forms:
        if d != 2:
            continue
        row = []
        for v in range(n):
            e = [zero] * n
            e[v] = one
            row.append(mp.evaluate([prev, e]))
        rows.append(row)
    if not rows:
        basis = []
        for v in range(n):
            e = [zero] * n
            e[v] = one
            basis.append(e)
        return basis
    return nullspace(rows, n, one)


def _extend(seq, length, rel_forms, f_forms, n, zero, one, pick):
    if len(seq) == length:
        return list(seq)
    for cand in pick(_next_candidates(rel_forms, seq[-1], n, zero, one)):
        trial = seq + [cand]
        end = len(trial) - 1
        if _windows_vanish(rel_forms, trial, end) and _windows_vanish(f_forms, trial, end):
            found = _extend(trial, length, rel_forms, f_forms, n, zero, one, pick)
            if found is not None:
                return found
    return None


def search_annihilated_point(
    p: Presentation,
    F: Sequence[NCPoly],
    primes: Sequence[int] = DEFAULT_PRIMES,
    trials: int = 100,
    seed: int = 0,
    height: int = 1,
    margin: int = 1,
) -> PointSequence | None:
    """Look for a truncated point module killed by every element of ``F``.

    The window length is ``max deg F + margin``.  Exact small-height starting
    points are tried first, then random probes over each prime whose
    symmetric-residue lifts are re-verified exactly.  Only exactly verified
    sequences are returned; ``None`` is not a proof that none exist.
    """
    n = p.n
    field = p.field
    zero, one = field.zero, field.one
    length = max([f.degree for f in F if f] + [2]) + margin
    rel_forms, f_forms = _window_forms(p.relations, F, n)

    def exact_pick(basis):
        return [list(v) for v in basis]

    for coords in small_points(n, height):
        start = [field.coerce(c) for c in coords]
        if not _windows_vanish(f_forms, [start], 0):
            continue
        found = _extend([start], length, rel_forms, f_forms, n, zero, one, exact_pick)
        if found is not None and verify_point_sequence(found, p.relations, F, n):
            return PointSequence(tuple(tuple(x) for x in found), "exact", True)

    rng = random.Random(seed)
    for prime in sorted(primes):
        q_res = rng.randrange(2, prime - 1)
        try:
            to_p = lambda mp: MultiPoly(mp.groups, mp.n, {m: _to_prime(c, prime, q_res) for m, c in mp.terms.items()})
            rel_p = [(d, to_p(mp)) for d, mp in rel_forms]
            f_p = [(d, to_p(mp)) for d, mp in f_forms]
        except ZeroDivisionError:
            continue
        zp, op = PrimeScalar(0, prime), PrimeScalar(1, prime)

        def random_pick(basis):
            if not basis:
                return []
            combo = [zp] * n
            for v in basis:
                c = rng.randrange(prime)
                combo = [x + c * y for x, y in zip(combo, v)]
            return [combo] if any(combo) else []

        for _ in range(trials):
            start = [PrimeScalar(rng.randrange(prime), prime) for _ in range(n)]
            if not any(start) or not _windows_vanish(f_p, [start], 0):
                continue
            found = _extend([start], length, rel_p, f_p, n, zp, op, random_pick)
            if found is None:
                continue
            lifted = [[field.coerce(_symmetric_lift(x)) for x in pt] for pt in found]
            if verify_point_sequence(lifted, p.relations, F, n):
                return PointSequence(tuple(tuple(x) for x in lifted), f"lifted from F_{prime}", True)
    return None
