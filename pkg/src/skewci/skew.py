"""mu-data, mu-symmetric matrices, the skew polynomial ring and quadric systems."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .coeff import QQ, Field, PrimeScalar, RationalFunction, reduce_mod_p
from .freealg import MonomialOrder, MultiPoly, NCPoly, multilinearize
from .linalg import echelonize, nullspace
from .rewrite import (
    DegreeExceedsTruncation,
    Presentation,
    RewriteSystem,
    classify_growth,
    complete_truncated,
    default_truncation,
)

DEFAULT_PRIMES = (10007, 10009, 10037)


class MuAxiomViolation(ValueError):
    def __init__(self, i: int, j: int, message: str = ""):
        self.i, self.j = i, j
        super().__init__(message or f"mu[{i + 1}][{j + 1}] * mu[{j + 1}][{i + 1}] != 1")


class DiagonalNotOne(ValueError):
    pass


class NotMuSymmetric(ValueError):
    pass


class NotNormalizing(ValueError):
    def __init__(self, k: int, report: "NormalityReport | None" = None):
        self.k = k
        self.report = report
        super().__init__(f"element {k + 1} of the sequence is not normal modulo its predecessors")


@dataclass(frozen=True)
class MuData:
    mu: tuple
    field: Field = QQ

    @property
    def n(self) -> int:
        return len(self.mu)

    def __getitem__(self, ij):
        i, j = ij
        return self.mu[i][j]


def validate_mu(raw: Sequence[Sequence], field: Field = QQ) -> MuData:
    """Check ``mu_ii = 1`` and ``mu_ij mu_ji = 1``; entries must be nonzero."""
    n = len(raw)
    if any(len(row) != n for row in raw):
        raise ValueError("mu must be a square matrix")
    mu = tuple(tuple(field.coerce(x) for x in row) for row in raw)
    for i in range(n):
        if mu[i][i] != 1:
            raise DiagonalNotOne(f"mu[{i + 1}][{i + 1}] = {mu[i][i]}, expected 1")
    for i in range(n):
        for j in range(i + 1, n):
            if not mu[i][j] or mu[i][j] * mu[j][i] != 1:
                raise MuAxiomViolation(i, j)
    return MuData(mu, field)


def trivial_mu(n: int, field: Field = QQ) -> MuData:
    return validate_mu([[1] * n for _ in range(n)], field)


@dataclass(frozen=True)
class MuSymMatrix:
    entries: tuple
    mu: MuData

    def __post_init__(self):
        n = self.mu.n
        entries = tuple(tuple(self.mu.field.coerce(x) for x in row) for row in self.entries)
        if len(entries) != n or any(len(r) != n for r in entries):
            raise ValueError(f"matrix must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                if entries[i][j] != self.mu[i, j] * entries[j][i]:
                    raise NotMuSymmetric(f"M[{i + 1}][{j + 1}] != mu[{i + 1}][{j + 1}] * M[{j + 1}][{i + 1}]")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.mu.n

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def scaled(self, c) -> "MuSymMatrix":
        return MuSymMatrix(tuple(tuple(c * x for x in row) for row in self.entries), self.mu)


def skew_relations(mu: MuData) -> list[NCPoly]:
    """``z_j z_i - mu_ij z_i z_j`` for ``i < j``."""
    one = mu.field.one
    rels = []
    for i in range(mu.n):
        for j in range(i + 1, mu.n):
            rels.append(NCPoly({(j, i): one, (i, j): -mu[i, j]}))
    return rels


def skew_polynomial_ring(mu: MuData, names: Sequence[str] | None = None) -> Presentation:
    names = tuple(names) if names else tuple(f"z{i + 1}" for i in range(mu.n))
    return Presentation(names, tuple(skew_relations(mu)), mu.field)


def canonical_lift(q: NCPoly, mu: MuData) -> NCPoly:
    """Rewrite a degree-2 element of the skew ring on PBW words ``z_i z_j`` (i <= j)."""
    out = NCPoly()
    for w, c in q.terms.items():
        if len(w) != 2:
            raise ValueError("quadrics must be homogeneous of degree 2")
        i, j = w
        if i > j:
            out = out + NCPoly({(j, i): c * mu[j, i]})
        else:
            out = out + NCPoly({w: c})
    return out


def quadric_of_matrix(M: MuSymMatrix) -> NCPoly:
    """``[z_1 .. z_n] M [z_1 .. z_n]^T`` in PBW form, scaled to be monic (0 stays 0)."""
    raw = NCPoly({(i, j): M.entries[i][j] for i in range(M.n) for j in range(M.n)})
    return canonical_lift(raw, M.mu).monic()


def matrix_of_quadric(q: NCPoly, mu: MuData) -> MuSymMatrix:
    """The mu-symmetric M with ``sum M_ij z_i z_j = 2 q`` in the skew ring.

    The factor 2 matches the diagonal convention ``2 x_i^2``; for monic ``q``
    the round trip through :func:`quadric_of_matrix` is the identity.
    """
    q = canonical_lift(q, mu)
    n = mu.n
    zero = mu.field.zero
    M = [[zero] * n for _ in range(n)]
    for (i, j), c in q.terms.items():
        if i == j:
            M[i][i] = 2 * c
        else:
            M[i][j] = c
            M[j][i] = mu[j, i] * c
    return MuSymMatrix(tuple(tuple(r) for r in M), mu)


@dataclass
class QuadricSystem:
    quadrics: tuple
    mu: MuData

    def __post_init__(self):
        self.quadrics = tuple(canonical_lift(q, self.mu) for q in self.quadrics)

    @classmethod
    def from_matrices(cls, matrices: Sequence[MuSymMatrix]) -> "QuadricSystem":
        mu = matrices[0].mu
        return cls(tuple(quadric_of_matrix(M) for M in matrices), mu)


# -- normality ---------------------------------------------------------------


@dataclass
class NormalityReport:
    is_normal: bool | None
    checked_degree: int
    witness: NCPoly | None = None
    side: str | None = None
    vanishes: bool = False

    def as_dict(self, names=None) -> dict:
        out = {"is_normal": self.is_normal, "checked_degree": self.checked_degree}
        if self.vanishes:
            out["vanishes_in_algebra"] = True
        if self.witness is not None:
            out["witness"] = self.witness.format(names)
            out["witness_side"] = self.side
        return out


def _in_span(vec: dict, pivots: dict) -> bool:
    row = dict(vec)
    for col in sorted(pivots, reverse=True):
        if col in row:
            c = row[col]
            for k, v in pivots[col].items():
                s = row.get(k, 0) - c * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
    return not row


def is_normal(
    f: NCPoly,
    p: Presentation,
    D: int | None = None,
    order: MonomialOrder | None = None,
    rs: RewriteSystem | None = None,
) -> NormalityReport:
    """Decide ``f A_1 = A_1 f`` in ``A = T / <relations of p>``.

    Since A is generated in degree one this equality is equivalent to
    ``f A = A f``.  The check needs normal forms in degree ``deg f + 1``.
    """
    if rs is None:
        rs = complete_truncated(p, D if D is not None else default_truncation(p), order)
    d = f.degree + 1
    if not rs.is_exact_in_degree(d):
        raise DegreeExceedsTruncation(f"normality of a degree-{d - 1} element needs D >= {d}")
    if not f or not rs.normal_form(f):
        return NormalityReport(True, d, vanishes=True)
    one = p.field.one
    right = [(f * NCPoly.generator(j, one), rs.normal_form(f * NCPoly.generator(j, one))) for j in range(p.n)]
    left = [(NCPoly.generator(i, one) * f, rs.normal_form(NCPoly.generator(i, one) * f)) for i in range(p.n)]
    key = lambda w: (len(w), w)
    span_r = echelonize([g.terms for _, g in right], key)
    span_l = echelonize([g.terms for _, g in left], key)
    for raw, red in right:
        if not _in_span(red.terms, span_l):
            return NormalityReport(False, d, witness=raw, side="f*x not in A1*f")
    for raw, red in left:
        if not _in_span(red.terms, span_r):
            return NormalityReport(False, d, witness=raw, side="x*f not in f*A1")
    return NormalityReport(True, d)


def is_normalizing_sequence(
    F: Sequence[NCPoly], p: Presentation, D: int | None = None, order: MonomialOrder | None = None
) -> list[NormalityReport]:
    """Report ``k`` is the normality of ``F[k]`` modulo ``F[:k]``."""
    reports = []
    for k, f in enumerate(F):
        q = p.extend(F[:k])
        reports.append(is_normal(f, q, D if D is not None else default_truncation(q), order))
    return reports


# -- base points ---------------------------------------------------------------


def bilinear_conditions(Q: QuadricSystem) -> list[MultiPoly]:
    """Bilinear forms cutting out the base locus inside ``P^{n-1} x P^{n-1}``."""
    forms = [multilinearize(r, Q.mu.n) for r in skew_relations(Q.mu)]
    forms += [multilinearize(q, Q.mu.n) for q in Q.quadrics if q]
    return forms


def _linear_in_second(forms, p, n, zero, one):
    rows = []
    for B in forms:
        row = []
        for v in range(n):
            e = [zero] * n
            e[v] = one
            row.append(B.evaluate([p, e]) if B.groups == 2 else zero)
        rows.append(row)
    return rows


def small_points(n: int, height: int):
    """Projective points with integer coordinates in [-height, height], first nonzero = 1.

    Coordinate points come first, in index order.
    """
    seen = set()
    for i in range(n):
        unit = tuple(1 if k == i else 0 for k in range(n))
        seen.add(unit)
        yield unit
    for h in range(1, height + 1):
        for coords in itertools.product(range(-h, h + 1), repeat=n):
            lead = next((c for c in coords if c), None)
            if lead != 1 or coords in seen:
                continue
            seen.add(coords)
            yield coords


def _normalize_vector(v):
    """Scale to integer-looking form when possible, first nonzero entry 1."""
    lead = next(x for x in v if x)
    return tuple(x / lead for x in v)


def verify_base_point(Q: QuadricSystem, p, p2) -> bool:
    if not any(p) or not any(p2):
        return False
    return all(not B.evaluate([p, p2]) for B in bilinear_conditions(Q))


def _to_prime(c, prime, q_residue):
    if isinstance(c, RationalFunction):
        num = sum(a * q_residue ** i for i, a in enumerate(reversed(c.numerator)))
        den = sum(a * q_residue ** i for i, a in enumerate(reversed(c.denominator)))
        if den % prime == 0:
            raise ZeroDivisionError
        return PrimeScalar(num * pow(den, -1, prime), prime)
    return reduce_mod_p(Fraction(c), prime)


def _symmetric_lift(x: PrimeScalar) -> int:
    v = x.value
    return v - x.modulus if v > x.modulus // 2 else v


def find_base_point(
    Q: QuadricSystem,
    height: int = 2,
    primes: Sequence[int] = DEFAULT_PRIMES,
    trials: int = 200,
    seed: int = 0,
):
    """Search for an exactly verified base point ``(p, p')``.

    Small-height points ``p`` are tried first; for each, ``p'`` ranges over the
    exact solution space of the (linear in ``p'``) conditions.  Then random
    probes over each prime are lifted by symmetric residues and rechecked
    exactly.  Returns ``None`` when nothing verifies, which proves nothing.
    """
    n = Q.mu.n
    field = Q.mu.field
    zero, one = field.zero, field.one
    forms = bilinear_conditions(Q)

    def attempt(p):
        rows = _linear_in_second(forms, p, n, zero, one)
        for v in nullspace(rows, n, one):
            if verify_base_point(Q, p, v):
                return tuple(p), _normalize_vector(v)
        return None

    for coords in small_points(n, height):
        hit = attempt([field.coerce(c) for c in coords])
        if hit:
            return hit
    rng = random.Random(seed)
    for prime in sorted(primes):
        q_res = rng.randrange(2, prime - 1)
        try:
            forms_p = [MultiPoly(B.groups, B.n, {m: _to_prime(c, prime, q_res) for m, c in B.terms.items()}) for B in forms]
        except ZeroDivisionError:
            continue
        zp, op = PrimeScalar(0, prime), PrimeScalar(1, prime)
        for _ in range(trials):
            p = [PrimeScalar(rng.randrange(prime), prime) for _ in range(n)]
            if not any(p):
                continue
            if nullspace(_linear_in_second(forms_p, p, n, zp, op), n, op):
                hit = attempt([field.coerce(_symmetric_lift(x)) for x in p])
                if hit:
                    return hit
    return None


@dataclass
class BasePointVerdict:
    kind: str  # "free", "not_free" or "inconclusive"
    dimension: int | None = None
    witness: tuple | None = None
    growth: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        from .coeff import format_scalar

        out = {"verdict": self.kind}
        if self.dimension is not None:
            out["dimension"] = self.dimension
        if self.witness is not None:
            out["witness"] = [[format_scalar(x) for x in pt] for pt in self.witness]
        out["quotient_growth"] = self.growth
        return out


def base_point_free(
    Q: QuadricSystem,
    D: int | None = None,
    primes: Sequence[int] = DEFAULT_PRIMES,
    seed: int = 0,
    trials: int = 200,
) -> BasePointVerdict:
    """Decide base-point freeness of a normalizing quadric system.

    For a normalizing system in a skew polynomial ring, emptiness of the base
    locus is equivalent to ``S / <Q>`` being finite dimensional; that is what
    is computed.  A witness search runs regardless and an exactly verified
    base point always wins.
    """
    S = skew_polynomial_ring(Q.mu)
    quadrics = [q for q in Q.quadrics if q]
    D = D if D is not None else default_truncation(S.extend(quadrics))
    for k, rep in enumerate(is_normalizing_sequence(quadrics, S, D)):
        if rep.is_normal is False:
            raise NotNormalizing(k, rep)
    rs = complete_truncated(S.extend(quadrics), D)
    growth = classify_growth(rs)
    witness = find_base_point(Q, primes=primes, seed=seed, trials=trials)
    if witness is not None:
        return BasePointVerdict("not_free", witness=witness, growth=growth.as_dict())
    if growth.kind == "finite":
        return BasePointVerdict("free", dimension=growth.dimension, growth=growth.as_dict())
    if growth.exact:
        return BasePointVerdict("not_free", growth=growth.as_dict())
    return BasePointVerdict("inconclusive", growth=growth.as_dict())
