"""Graded skew Clifford algebras built from (mu, M_1, ..., M_n).

The algebra has degree-one generators ``x_i`` and degree-two generators
``y_k`` subject to ``x_i x_j + mu_ij x_j x_i = sum_k (M_k)_ij y_k``.  When the
``M_k`` are linearly independent the ``y_k`` can be solved for, leaving a
quadratic presentation on the ``x_i`` alone; that presentation is what the
rest of the package works with.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .freealg import MonomialOrder, NCPoly
from .linalg import dense_rref, echelonize, nullspace
from .rewrite import Presentation, complete_truncated, default_truncation, hilbert_function
from .skew import (
    BasePointVerdict,
    MuData,
    MuSymMatrix,
    QuadricSystem,
    base_point_free,
    is_normalizing_sequence,
    skew_polynomial_ring,
)

# Consequences of regularity that are cited, never computed.
THEOREM_CONSEQUENCES = (
    "quadratic",
    "Auslander-regular of global dimension n",
    "Cohen-Macaulay",
    "Hilbert series 1/(1-t)^n",
    "noetherian domain",
    "unique up to isomorphism",
)


class MatricesDependent(ValueError):
    pass


@dataclass(frozen=True)
class GscaInput:
    mu: MuData
    matrices: tuple

    def __post_init__(self):
        mats = tuple(self.matrices)
        if len(mats) != self.mu.n:
            raise ValueError(f"expected {self.mu.n} matrices, got {len(mats)}")
        for M in mats:
            if not isinstance(M, MuSymMatrix):
                raise TypeError("matrices must be MuSymMatrix instances")
            if M.mu != self.mu:
                raise ValueError("every matrix must be mu-symmetric for the same mu")
        object.__setattr__(self, "matrices", mats)

    @property
    def n(self) -> int:
        return self.mu.n

    def x_names(self):
        return tuple(f"x{i + 1}" for i in range(self.n))


@dataclass(frozen=True)
class WeightedPresentation:
    """Presentation with generator weights; used only for the (x, y) form."""

    names: tuple
    weights: tuple
    relations: tuple

    def weighted_degree(self, f: NCPoly) -> set:
        return {sum(self.weights[c] for c in w) for w in f.terms}


def _pairs(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


def _symmetrizer(inp: GscaInput, i: int, j: int) -> NCPoly:
    """``x_i x_j + mu_ij x_j x_i`` (``2 x_i^2`` on the diagonal)."""
    one = inp.mu.field.one
    return NCPoly({(i, j): one}) + NCPoly({(j, i): inp.mu[i, j]})


def build_gsca_relations(inp: GscaInput) -> WeightedPresentation:
    """One relation per pair ``i <= j``; ``y_k`` is generator ``n + k``."""
    n = inp.n
    rels = []
    for i, j in _pairs(n):
        rhs = NCPoly({(n + k,): inp.matrices[k].entries[i][j] for k in range(n)})
        rels.append(_symmetrizer(inp, i, j) - rhs)
    names = inp.x_names() + tuple(f"y{k + 1}" for k in range(n))
    return WeightedPresentation(names, (1,) * n + (2,) * n, tuple(rels))


@dataclass
class Elimination:
    presentation: Presentation
    y_images: tuple  # y_k expressed as a quadratic polynomial in the x_i


def solve_y(inp: GscaInput) -> Elimination:
    n = inp.n
    field = inp.mu.field
    pairs = _pairs(n)
    # coeff[k][p] = (M_k)_{pair p}
    coeff = [[inp.matrices[k].entries[i][j] for (i, j) in pairs] for k in range(n)]
    rows, pivots = dense_rref(coeff)
    if len(pivots) < n:
        raise MatricesDependent("M_1, ..., M_n are linearly dependent; y cannot be eliminated")
    sym = [_symmetrizer(inp, i, j) for i, j in pairs]

    relations = []
    for w in nullspace(coeff, len(pairs), field.one):
        rel = NCPoly()
        for c, s in zip(w, sym):
            if c:
                rel = rel + s * c
        if rel:
            relations.append(rel)
    reduced = echelonize([r.terms for r in relations], key=lambda w: (len(w), w))
    relations = [NCPoly(reduced[lw]) for lw in sorted(reduced)]

    # sym[pivot_p] = sum_k C[p][k] y_k with C square and invertible; invert it.
    square = [[coeff[k][p] for k in range(n)] for p in pivots]
    aug = [row + [field.one if r == c else field.zero for c in range(n)] for r, row in enumerate(square)]
    inv_rows, _ = dense_rref(aug)
    images = []
    for k in range(n):
        y = NCPoly()
        for r, p in enumerate(pivots):
            c = inv_rows[k][n + r]
            if c:
                y = y + sym[p] * c
        images.append(y)
    pres = Presentation(inp.x_names(), tuple(relations), field)
    return Elimination(pres, tuple(images))


def eliminate_y(inp: GscaInput) -> Presentation:
    return solve_y(inp).presentation


def substitution_residues(inp: GscaInput, order: MonomialOrder | None = None) -> list[NCPoly]:
    """Normal forms of every (x, y) relation after substituting the solved y_k.

    All entries are zero when the elimination is consistent.
    """
    elim = solve_y(inp)
    rs = complete_truncated(elim.presentation, 2, order)
    images = {inp.n + k: y for k, y in enumerate(elim.y_images)}
    return [rs.normal_form(r.substitute(images)) for r in build_gsca_relations(inp).relations]


@dataclass
class RegularityCertificate:
    normalizing: list
    base_point_free: BasePointVerdict | None
    hilbert_match: bool | None
    hilbert: tuple
    conclusion: str  # "CertifiedRegular", "NotRegular" or "Inconclusive"
    reason: str = ""
    quadrics: tuple = ()
    relations: tuple = ()
    consequences: tuple = ()
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        names = [f"z{i + 1}" for i in range(64)]
        out = {
            "conclusion": self.conclusion,
            "quadric_system": [q.format(names) for q in self.quadrics],
            "normalizing": [r.as_dict(names) for r in self.normalizing],
            "base_point_free": self.base_point_free.as_dict() if self.base_point_free else None,
            "hilbert_match": self.hilbert_match,
            "hilbert": list(self.hilbert),
            "relations": list(self.relations),
        }
        if self.reason:
            out["reason"] = self.reason
        if self.consequences:
            out["cited_consequences"] = list(self.consequences)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def certify_regular(
    inp: GscaInput,
    D: int | None = None,
    order: MonomialOrder | None = None,
    primes=None,
    seed: int = 0,
) -> RegularityCertificate:
    """Check the quadric system is normalizing and base-point free, and that
    the quadratic x-presentation has Hilbert function ``C(m+n-1, n-1)`` up to D.
    """
    n = inp.n
    Q = QuadricSystem.from_matrices(inp.matrices)
    S = skew_polynomial_ring(inp.mu)
    nonzero = [q for q in Q.quadrics if q]
    D_skew = D if D is not None else default_truncation(S.extend(nonzero))
    normalizing = is_normalizing_sequence(nonzero, S, D_skew) if nonzero else []
    notes = []
    bpf = None
    kwargs = {"seed": seed}
    if primes:
        kwargs["primes"] = primes
    if all(r.is_normal for r in normalizing):
        bpf = base_point_free(Q, D_skew, **kwargs)

    hilbert_match = None
    hilbert: tuple = ()
    relations: tuple = ()
    try:
        pres = eliminate_y(inp)
    except MatricesDependent as exc:
        notes.append(str(exc))
    else:
        relations = tuple(pres.format_relations())
        D_x = D if D is not None else default_truncation(pres)
        rs = complete_truncated(pres, D_x, order)
        hilbert = tuple(hilbert_function(rs, D_x))
        hilbert_match = all(h == comb(m + n - 1, n - 1) for m, h in enumerate(hilbert))

    if any(r.is_normal is False for r in normalizing):
        conclusion, reason = "NotRegular", "quadric system is not normalizing"
    elif bpf is not None and bpf.kind == "not_free":
        conclusion, reason = "NotRegular", "quadric system has a base point"
    elif hilbert_match is False:
        conclusion, reason = "NotRegular", "Hilbert function differs from 1/(1-t)^n"
    elif bpf is not None and bpf.kind == "free" and hilbert_match:
        conclusion, reason = "CertifiedRegular", ""
    else:
        conclusion, reason = "Inconclusive", "a sub-check could not be completed"
    return RegularityCertificate(
        normalizing=normalizing,
        base_point_free=bpf,
        hilbert_match=hilbert_match,
        hilbert=hilbert,
        conclusion=conclusion,
        reason=reason,
        quadrics=Q.quadrics,
        relations=relations,
        consequences=THEOREM_CONSEQUENCES if conclusion == "CertifiedRegular" else (),
        notes=notes,
    )
