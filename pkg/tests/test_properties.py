"""Algebraic laws of the normal form, checked with hypothesis on the bundled presentations."""
from __future__ import annotations

from functools import lru_cache

from hypothesis import given, settings, strategies as st

from conftest import manifest_presentation
from skewci.freealg import NCPoly
from skewci.rewrite import complete_truncated

NAMES = ("eg1", "eg4", "clifford2", "skewS")


@lru_cache(maxsize=None)
def system(name):
    m, p = manifest_presentation(name)
    return p, complete_truncated(p, 12, m.order())


def polys(n, degree):
    words = st.lists(st.integers(0, n - 1), min_size=degree, max_size=degree).map(tuple)
    return st.dictionaries(words, st.integers(-4, 4), max_size=4).map(NCPoly)


@st.composite
def cases(draw):
    name = draw(st.sampled_from(NAMES))
    p, rs = system(name)
    d, e = draw(st.integers(0, 3)), draw(st.integers(0, 3))
    return rs, draw(polys(p.n, d)), draw(polys(p.n, d)), draw(polys(p.n, e)), draw(st.integers(-5, 5))


@settings(max_examples=150, deadline=None)
@given(cases())
def test_normal_form_is_linear(case):
    rs, f, g, _, c = case
    assert rs.normal_form(f * c + g) == rs.normal_form(f) * c + rs.normal_form(g)


@settings(max_examples=150, deadline=None)
@given(cases())
def test_normal_form_respects_products(case):
    rs, f, _, h, _ = case
    nf = rs.normal_form
    assert nf(nf(f) * h) == nf(f * h) == nf(f * nf(h))


@settings(max_examples=100, deadline=None)
@given(cases())
def test_normal_words_are_closed_under_subwords(case):
    rs, f, _, _, _ = case
    for w in rs.normal_form(f).terms:
        assert all(rs.is_normal_word(w[i:j]) for i in range(len(w)) for j in range(i, len(w) + 1))
