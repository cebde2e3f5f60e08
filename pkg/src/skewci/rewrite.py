"""Degree-truncated two-sided Groebner bases for homogeneous presentations.

Completion runs degree by degree.  In degree ``m`` the candidates are the
input relations of degree ``m`` and the S-polynomials of all overlap
ambiguities of degree ``m``; they are reduced by the rules found so far and
the survivors are put in reduced echelon form.  Because every relation is
homogeneous, the rules of degree ``<= D`` obtained this way span the ideal
in all degrees ``<= D``, so normal forms and Hilbert function values up to
``D`` are exact whether or not the basis is complete.
"""
from __future__ import annotations

import heapq
import os
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .coeff import QQ, Field
from .freealg import Inhomogeneous, MonomialOrder, NCPoly, Word, format_word
from .linalg import echelonize

DEFAULT_TRUNCATION_ENV = "SKEWCI_MAX_DEGREE"


class TruncationTooLow(ValueError):
    pass


class DegreeExceedsTruncation(ValueError):
    pass


class NotComplete(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    """Generators (all of degree one) and homogeneous defining relations."""

    names: tuple
    relations: tuple = ()
    field: Field = QQ

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        rels = tuple(r for r in self.relations)
        for r in rels:
            if not r:
                raise ValueError("relations must be nonzero")
            if not r.is_homogeneous():
                raise Inhomogeneous(f"relation {r.format(self.names)} is not homogeneous")
            if r.degree < 1:
                raise ValueError("relations must have positive degree")
            if any(c >= self.n for w in r.terms for c in w):
                raise ValueError("relation uses an undeclared generator")
        object.__setattr__(self, "relations", rels)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def max_degree(self) -> int:
        return max((r.degree for r in self.relations), default=0)

    def extend(self, extra: Sequence[NCPoly]) -> "Presentation":
        return Presentation(self.names, self.relations + tuple(f for f in extra if f), self.field)

    def format_relations(self) -> list[str]:
        return [r.format(self.names) for r in self.relations]


def default_truncation(p: Presentation) -> int:
    env = os.environ.get(DEFAULT_TRUNCATION_ENV)
    if env:
        return max(int(env), p.max_degree)
    return max(2 * p.max_degree + 6, 12)


class _Automaton:
    """Aho-Corasick automaton recognising words that contain a leading word."""

    def __init__(self, patterns, n: int):
        goto = [{}]
        dead = [False]
        for pat in patterns:
            s = 0
            for a in pat:
                nxt = goto[s].get(a)
                if nxt is None:
                    goto.append({})
                    dead.append(False)
                    nxt = len(goto) - 1
                    goto[s][a] = nxt
                s = nxt
            dead[s] = True
        fail = [0] * len(goto)
        delta = [[0] * n for _ in goto]
        queue = deque()
        for a in range(n):
            t = goto[0].get(a)
            if t is None:
                delta[0][a] = 0
            else:
                delta[0][a] = t
                fail[t] = 0
                queue.append(t)
        while queue:
            s = queue.popleft()
            dead[s] = dead[s] or dead[fail[s]]
            for a in range(n):
                t = goto[s].get(a)
                if t is None:
                    delta[s][a] = delta[fail[s]][a]
                else:
                    fail[t] = delta[fail[s]][a]
                    delta[s][a] = t
                    queue.append(t)
        self.n = n
        self.delta = delta
        self.dead = dead

    @property
    def live_states(self) -> int:
        return sum(1 for d in self.dead if not d)

    def counts(self, upto: int) -> list[int]:
        vec = {0: 1}
        out = [1]
        for _ in range(upto):
            nxt: dict = defaultdict(int)
            for s, c in vec.items():
                for t in self.delta[s]:
                    if not self.dead[t]:
                        nxt[t] += c
            vec = nxt
            out.append(sum(vec.values()))
        return out

    def words(self, length: int):
        """All normal words of the given length, in increasing order."""
        out = []

        def walk(s, prefix):
            if len(prefix) == length:
                out.append(tuple(prefix))
                return
            for a in range(self.n):
                t = self.delta[s][a]
                if not self.dead[t]:
                    prefix.append(a)
                    walk(t, prefix)
                    prefix.pop()

        walk(0, [])
        return out

    def state_of(self, word):
        s = 0
        for a in word:
            s = self.delta[s][a]
            if self.dead[s]:
                return None
        return s


class RewriteSystem:
    """An interreduced set of rules ``leading word -> tail``.

    Rules are stored internally with letters renamed by rank under the
    monomial order; public accessors translate back.
    """

    def __init__(self, presentation: Presentation, order: MonomialOrder, truncation_degree: int):
        self.presentation = presentation
        self.order = order
        self.truncation_degree = truncation_degree
        self.certified_complete = False
        self.completed_degree = 0
        self._rules: dict = {}
        self._lengths: list[int] = []
        self._cache: dict = {}
        self._automaton = None

    @property
    def n(self) -> int:
        return self.presentation.n

    @property
    def max_rule_degree(self) -> int:
        return max((len(w) for w in self._rules), default=0)

    @property
    def rules(self) -> list[tuple[Word, NCPoly]]:
        """Rules as ``(leading word, tail)`` in increasing order of leading word."""
        out = []
        for lw in sorted(self._rules, key=lambda w: (len(w), w)):
            tail = {self.order.decode(w): c for w, c in self._rules[lw].items()}
            out.append((self.order.decode(lw), NCPoly(tail)))
        return out

    def rule_polynomials(self) -> list[NCPoly]:
        return [NCPoly.monomial(lw, 1) - tail for lw, tail in self.rules]

    def format_rules(self) -> list[str]:
        names = self.presentation.names
        return [
            f"{format_word(lw, names)} -> {tail.format(names, self.order)}" for lw, tail in self.rules
        ]

    # -- reduction ---------------------------------------------------------

    def _add_rule(self, lw, tail):
        self._rules[lw] = tail
        if len(lw) not in self._lengths:
            self._lengths.append(len(lw))
            self._lengths.sort()
        self._automaton = None

    def _find(self, w):
        rules = self._rules
        m = len(w)
        for i in range(m):
            for L in self._lengths:
                if i + L > m:
                    break
                lw = w[i : i + L]
                if lw in rules:
                    return i, L, lw
        return None

    def _reduce(self, poly: dict) -> dict:
        result: dict = {}
        work = {w: c for w, c in poly.items() if c}
        heap = [(-len(w), tuple(-a for a in w), w) for w in work]
        heapq.heapify(heap)
        cache = self._cache
        while heap:
            _, _, w = heapq.heappop(heap)
            c = work.pop(w, None)
            if not c:
                continue
            cached = cache.get(w)
            if cached is not None:
                for v, cv in cached.items():
                    s = result.get(v, 0) + c * cv
                    if s:
                        result[v] = s
                    else:
                        result.pop(v, None)
                continue
            hit = self._find(w)
            if hit is None:
                s = result.get(w, 0) + c
                if s:
                    result[w] = s
                else:
                    result.pop(w, None)
                continue
            i, L, lw = hit
            left, right = w[:i], w[i + L :]
            for t, ct in self._rules[lw].items():
                nw = left + t + right
                old = work.get(nw)
                if old is None:
                    work[nw] = c * ct
                    heapq.heappush(heap, (-len(nw), tuple(-a for a in nw), nw))
                else:
                    s = old + c * ct
                    work[nw] = s
        return result

    def _nf_word(self, w) -> dict:
        cached = self._cache.get(w)
        if cached is None:
            cached = self._reduce({w: 1})
            self._cache[w] = cached
        return cached

    def _nf(self, poly: dict) -> dict:
        out: dict = {}
        for w, c in poly.items():
            for v, cv in self._nf_word(w).items():
                s = out.get(v, 0) + c * cv
                if s:
                    out[v] = s
                else:
                    out.pop(v, None)
        return out

    def _check_degree(self, f: NCPoly):
        if not self.certified_complete and f.degree > self.truncation_degree:
            raise DegreeExceedsTruncation(
                f"degree {f.degree} exceeds truncation degree {self.truncation_degree}"
            )

    def normal_form(self, f: NCPoly) -> NCPoly:
        self._check_degree(f)
        enc = {self.order.encode(w): c for w, c in f.terms.items()}
        red = self._nf(enc)
        return NCPoly({self.order.decode(w): c for w, c in red.items()})

    def is_normal_word(self, w: Word) -> bool:
        return self._find(self.order.encode(w)) is None

    # -- counting ----------------------------------------------------------

    @property
    def automaton(self) -> _Automaton:
        if self._automaton is None:
            self._automaton = _Automaton(sorted(self._rules), self.n)
        return self._automaton

    def normal_words(self, m: int) -> list[Word]:
        """Normal words of length ``m`` in increasing order."""
        return [self.order.decode(w) for w in self.automaton.words(m)]

    def is_exact_in_degree(self, m: int) -> bool:
        return self.certified_complete or m <= self.truncation_degree


def _overlaps(u, v):
    """All proper overlaps ``u = AB, v = BC``; yields ``k = |B|``."""
    for k in range(min(len(u), len(v)) - 1, 0, -1):
        if u[-k:] == v[:k]:
            yield k


def _spoly(rules, u, v, k) -> dict:
    """``tail(u)*C - A*tail(v)`` for the overlap word ``A B C``."""
    A, C = u[:-k], v[k:]
    out: dict = {}
    for t, c in rules[u].items():
        w = t + C
        out[w] = out.get(w, 0) + c
    for t, c in rules[v].items():
        w = A + t
        s = out.get(w, 0) - c
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return {w: c for w, c in out.items() if c}


def complete_truncated(
    p: Presentation, D: int | None = None, order: MonomialOrder | None = None
) -> RewriteSystem:
    """Run the completion up to degree ``D``.

    The result is certified complete when every overlap ambiguity among the
    final rules has degree at most ``D`` (and was therefore resolved), or
    when the quotient vanishes in some degree, after which every ambiguity
    resolves trivially.
    """
    if D is None:
        D = default_truncation(p)
    if D < p.max_degree:
        raise TruncationTooLow(f"truncation degree {D} is below relation degree {p.max_degree}")
    order = order or MonomialOrder.default(p.n)
    if sorted(order.precedence) != list(range(p.n)):
        raise ValueError("monomial order must rank every generator exactly once")
    rs = RewriteSystem(p, order, D)
    by_degree = defaultdict(list)
    for r in p.relations:
        by_degree[r.degree].append({order.encode(w): c for w, c in r.terms.items()})
    pending: dict = defaultdict(list)
    last_relation_degree = max(by_degree, default=0)

    for m in range(1, D + 1):
        candidates = list(by_degree.get(m, ()))
        for u, v, k in pending.pop(m, ()):
            candidates.append(_spoly(rs._rules, u, v, k))
        rs.completed_degree = m
        if candidates:
            reduced = [rs._reduce(c) for c in candidates]
            pivots = echelonize([r for r in reduced if r])
            new = sorted(pivots)
            for lw in new:
                row = pivots[lw]
                rs._add_rule(lw, {w: -c for w, c in row.items() if w != lw})
                for other in list(rs._rules):
                    for k in _overlaps(lw, other):
                        pending[len(lw) + len(other) - k].append((lw, other, k))
                    if other != lw:
                        for k in _overlaps(other, lw):
                            pending[len(lw) + len(other) - k].append((other, lw, k))
            if new:
                for w in [w for w in rs._cache if len(w) >= m]:
                    del rs._cache[w]
        if rs._rules and rs.automaton.counts(m)[m] == 0:
            rs.certified_complete = True
            break
        if not pending and m >= last_relation_degree:
            rs.certified_complete = True
            break
    else:
        rs.certified_complete = not any(deg > D for deg, lst in pending.items() if lst)
    return rs


def normal_form(f: NCPoly, rs: RewriteSystem) -> NCPoly:
    return rs.normal_form(f)


def hilbert_function(rs: RewriteSystem, D: int | None = None) -> list[int]:
    """Number of normal words in each degree ``0..D``.

    Values are exact up to the truncation degree, and in every degree once
    the system is certified complete.
    """
    if D is None:
        D = rs.truncation_degree
    return rs.automaton.counts(D)


# -- growth ------------------------------------------------------------------


def ufnarovski_graph(rs: RewriteSystem) -> nx.MultiDiGraph:
    """Graph on normal words of length ``g - 1`` (``g`` the maximal rule degree).

    There is an edge ``u -> v`` labelled ``y`` when ``u = x s``, ``v = s y``
    and ``u y`` is normal; paths of length ``m - (g - 1)`` correspond to
    normal words of length ``m``.
    """
    if not rs.certified_complete:
        raise NotComplete("the rewrite system is not certified complete")
    g = max(rs.max_rule_degree, 1)
    aut = rs.automaton
    G = nx.MultiDiGraph()
    verts = aut.words(g - 1)
    for u in verts:
        G.add_node(rs.order.decode(u))
    for u in verts:
        s = aut.state_of(u)
        for y in range(rs.n):
            t = aut.delta[s][y]
            if aut.dead[t]:
                continue
            v = (u + (y,))[1:] if g > 1 else ()
            G.add_edge(rs.order.decode(u), rs.order.decode(v), label=rs.order.decode((y,))[0])
    G.graph["prefix_length"] = g - 1
    return G


@dataclass
class GrowthReport:
    kind: str  # "finite", "polynomial", "exponential" or "inconclusive"
    hilbert: tuple
    dimension: int | None = None
    gk: int | None = None
    exact: bool = True
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "exact": self.exact, "hilbert": list(self.hilbert)}
        if self.dimension is not None:
            out["dimension"] = self.dimension
        if self.gk is not None:
            out["gk"] = self.gk
        out.update(self.details)
        return out


def _graph_growth(G: nx.MultiDiGraph):
    """Return ("finite", total_paths) / ("polynomial", gk) / ("exponential", None)."""
    sccs = list(nx.strongly_connected_components(G))
    comp_of = {}
    cyclic = []
    for idx, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = idx
        edges = sum(1 for u, v in G.subgraph(comp).edges())
        cyclic.append(edges > 0)
        if edges > len(comp):
            return "exponential", None
    if not any(cyclic):
        order = list(nx.topological_sort(G))
        paths_from = {}
        for v in reversed(order):
            paths_from[v] = 1 + sum(paths_from[w] for _, w in G.out_edges(v))
        return "finite", sum(paths_from.values())
    C = nx.condensation(nx.DiGraph(G), scc=sccs)
    best = {}
    for c in reversed(list(nx.topological_sort(C))):
        here = 1 if cyclic[c] else 0
        best[c] = here + max((best[d] for d in C.successors(c)), default=0)
    return "polynomial", max(best.values())


def classify_growth(rs: RewriteSystem) -> GrowthReport:
    D = rs.truncation_degree
    h = hilbert_function(rs, D)
    for m in range(1, len(h)):
        if h[m] == 0:
            return GrowthReport("finite", tuple(h), dimension=sum(h), gk=0, exact=True)
    if not rs.certified_complete:
        return GrowthReport("inconclusive", tuple(h), exact=False)
    G = ufnarovski_graph(rs)
    kind, value = _graph_growth(G)
    details = {"graph_vertices": G.number_of_nodes(), "graph_edges": G.number_of_edges()}
    if kind == "finite":
        g1 = G.graph["prefix_length"]
        dim = sum(h[:g1]) + value
        return GrowthReport("finite", tuple(h), dimension=dim, gk=0, details=details)
    if kind == "polynomial":
        return GrowthReport("polynomial", tuple(h), gk=value, details=details)
    return GrowthReport("exponential", tuple(h), details=details)
