"""Words, noncommutative polynomials and multilinearization.

Generators are indexed ``0..n-1`` internally; names live with the
presentation.  A word is a tuple of generator indices, the empty tuple being
the unit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple


class Inhomogeneous(ValueError):
    pass


@dataclass(frozen=True)
class MonomialOrder:
    """Degree-first, then left-lexicographic order.

    ``precedence`` lists generator indices from smallest to largest.
    """

    precedence: tuple

    @classmethod
    def default(cls, n: int) -> "MonomialOrder":
        return cls(tuple(range(n)))

    @property
    def rank(self) -> dict:
        return {g: r for r, g in enumerate(self.precedence)}

    def key(self, word: Word):
        rank = self.rank
        return (len(word), tuple(rank[c] for c in word))

    def encode(self, word: Word) -> Word:
        """Rename letters to their ranks so plain tuple order agrees with this order."""
        rank = self.rank
        return tuple(rank[c] for c in word)

    def decode(self, word: Word) -> Word:
        return tuple(self.precedence[r] for r in word)

    def is_identity(self) -> bool:
        return self.precedence == tuple(range(len(self.precedence)))


def word_compare(u: Word, v: Word, order: MonomialOrder) -> int:
    """Return -1, 0 or 1 as ``u`` is less than, equal to or greater than ``v``."""
    ku, kv = order.key(u), order.key(v)
    return (ku > kv) - (ku < kv)


class NCPoly:
    """Element of the free algebra: a finite map from words to nonzero scalars."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, c) -> "NCPoly":
        return cls({(): c})

    @classmethod
    def generator(cls, i: int, one=1) -> "NCPoly":
        return cls({(i,): one})

    @classmethod
    def monomial(cls, word: Iterable[int], c=1) -> "NCPoly":
        return cls({tuple(word): c})

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(len(w) == 0 for w in self.terms)

    def constant_term(self):
        return self.terms.get((), 0)

    def coefficient(self, word: Word):
        return self.terms.get(tuple(word), 0)

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            if other == 0:
                return self
            other = NCPoly.constant(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NCPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return NCPoly({w: c * other for w, c in self.terms.items()})
        out: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                s = out.get(w, 0) + a * b
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return NCPoly(out)

    def __rmul__(self, other):
        return NCPoly({w: other * c for w, c in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = NCPoly.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def words(self, order: MonomialOrder | None = None) -> list:
        """Support words in descending order."""
        key = order.key if order else (lambda w: (len(w), w))
        return sorted(self.terms, key=key, reverse=True)

    def leading_word(self, order: MonomialOrder | None = None) -> Word:
        if not self.terms:
            raise ValueError("zero polynomial has no leading word")
        key = order.key if order else (lambda w: (len(w), w))
        return max(self.terms, key=key)

    def leading_coefficient(self, order: MonomialOrder | None = None):
        return self.terms[self.leading_word(order)]

    def monic(self, order: MonomialOrder | None = None) -> "NCPoly":
        if not self.terms:
            return self
        return self * (1 / self.leading_coefficient(order))

    def substitute(self, images: dict) -> "NCPoly":
        """Replace generator ``i`` by ``images[i]`` (generators absent from the map stay)."""
        out = NCPoly()
        for w, c in self.terms.items():
            term = NCPoly.constant(c)
            for letter in w:
                term = term * images.get(letter, NCPoly.generator(letter))
            out = out + term
        return out

    def map_coefficients(self, fn) -> "NCPoly":
        return NCPoly({w: fn(c) for w, c in self.terms.items()})

    def format(self, names: Sequence[str] | None = None, order: MonomialOrder | None = None) -> str:
        if not self.terms:
            return "0"
        from .coeff import format_scalar

        parts = []
        for w in self.words(order):
            c = self.terms[w]
            text = format_scalar(c)
            neg = text.startswith("-") and " " not in text
            mag = text[1:] if neg else text
            if " " in mag:
                mag = f"({mag})"
            word = _format_word(w, names)
            if not w:
                body = mag
            elif mag == "1":
                body = word
            else:
                body = f"{mag}*{word}"
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"NCPoly({self.format()})"


def _format_word(w: Word, names) -> str:
    if not w:
        return "1"
    names = names or [f"x{i + 1}" for i in range(max(w) + 1)]
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k = j - i
        out.append(names[w[i]] if k == 1 else f"{names[w[i]]}^{k}")
        i = j
    return "*".join(out)


def format_word(w: Word, names: Sequence[str] | None = None) -> str:
    return _format_word(w, names)


def nc_multiply(f: NCPoly, g: NCPoly) -> NCPoly:
    return f * g


class MultiPoly:
    """Commutative polynomial in ``groups`` groups of ``n`` variables.

    A monomial is a sorted tuple of ``((group, var), exponent)`` pairs.
    """

    __slots__ = ("groups", "n", "terms")

    def __init__(self, groups: int, n: int, terms: dict | None = None):
        self.groups = groups
        self.n = n
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.groups, self.n, self.terms) == (other.groups, other.n, other.terms)

    def __hash__(self):
        return hash((self.groups, self.n, frozenset(self.terms.items())))

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MultiPoly(max(self.groups, other.groups), self.n, out)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return MultiPoly(self.groups, self.n, {m: c * other for m, c in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                exps = dict(m1)
                for var, e in m2:
                    exps[var] = exps.get(var, 0) + e
                m = tuple(sorted(exps.items()))
                out[m] = out.get(m, 0) + c1 * c2
        return MultiPoly(max(self.groups, other.groups), self.n, out)

    def shift(self, k: int) -> "MultiPoly":
        """Move every variable from group ``g`` to group ``g + k``."""
        terms = {tuple(((g + k, v), e) for (g, v), e in m): c for m, c in self.terms.items()}
        return MultiPoly(self.groups + k, self.n, terms)

    def evaluate(self, points: Sequence[Sequence]):
        """Evaluate with ``points[g][v]`` substituted for variable ``v`` of group ``g``."""
        if len(points) < self.groups:
            raise ValueError(f"need {self.groups} points, got {len(points)}")
        total = 0
        for m, c in self.terms.items():
            term = c
            for (g, v), e in m:
                x = points[g][v]
                for _ in range(e):
                    term = term * x
            total = total + term
        return total

    def format(self) -> str:
        if not self.terms:
            return "0"
        from .coeff import format_scalar

        parts = []
        for m in sorted(self.terms):
            mono = "*".join(
                f"z{v + 1}_{g + 1}" + (f"^{e}" if e > 1 else "") for (g, v), e in m
            )
            parts.append(f"{format_scalar(self.terms[m])}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.format()})"


def multilinearize(f: NCPoly, n: int) -> MultiPoly:
    """Send ``x_{i1}...x_{id}`` to ``z^(1)_{i1} ... z^(d)_{id}``."""
    if not f:
        return MultiPoly(0, n)
    if not f.is_homogeneous():
        raise Inhomogeneous(f"{f} is not homogeneous")
    d = f.degree
    terms = {tuple(((g, v), 1) for g, v in enumerate(w)): c for w, c in f.terms.items()}
    return MultiPoly(d, n, terms)
