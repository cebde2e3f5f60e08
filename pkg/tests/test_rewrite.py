from fractions import Fraction

import pytest

from oracles import hilbert as oracle_hilbert
from skewci.expr import parse_expression
from skewci.freealg import MonomialOrder, NCPoly
from skewci.rewrite import (
    DegreeExceedsTruncation,
    NotComplete,
    Presentation,
    TruncationTooLow,
    classify_growth,
    complete_truncated,
    default_truncation,
    hilbert_function,
    ufnarovski_graph,
)
from skewci.skew import skew_polynomial_ring, validate_mu

EG1 = ["x1*x2 + x2*x1 - x3^2", "x1*x3 + x3*x1", "x2*x3 + x3*x2"]
X3 = {"x1": 0, "x2": 1, "x3": 2}


def pres(rels, names=("x1", "x2", "x3")):
    table = {n: i for i, n in enumerate(names)}
    return Presentation(names, tuple(parse_expression(r, generators=table) for r in rels))


def P(text, names=X3):
    return parse_expression(text, generators=names)


def test_skew_plane_single_rule():
    S = skew_polynomial_ring(validate_mu([[1, 2], [Fraction(1, 2), 1]]))
    rs = complete_truncated(S, 6)
    assert len(rs.rules) == 1 and rs.certified_complete
    z1, z2 = NCPoly.generator(0), NCPoly.generator(1)
    assert rs.normal_form(z2 * z1) == z1 * z2 * 2


def test_eg1_algebra_certified_with_pbw_hilbert():
    rs = complete_truncated(pres(EG1), 6)
    assert rs.certified_complete
    assert hilbert_function(rs, 6) == [1, 3, 6, 10, 15, 21, 28]


def test_eg2_quotient_gk_one():
    p = pres(EG1 + ["x1^4", "x2^4", "x2^2*x1^2"])
    rs = complete_truncated(p, 12, MonomialOrder((2, 0, 1)))
    assert rs.certified_complete
    g = classify_growth(rs)
    assert (g.kind, g.gk, g.exact) == ("polynomial", 1, True)
    G = ufnarovski_graph(rs)
    assert G.number_of_edges() > 0


def test_eg3_quotient_dimension_eight():
    rs = complete_truncated(pres(EG1 + ["x1^2", "x2^2", "x3^2"]), 12)
    g = classify_growth(rs)
    assert (g.kind, g.dimension) == ("finite", 8)
    assert list(g.hilbert[:5]) == [1, 3, 3, 1, 0]


def test_clifford_normal_form_and_hilbert():
    names = {"x": 0, "y": 1}
    p = Presentation(("x", "y"), (P("x*y + y*x + x^2 + y^2", names), P("x^2*y - y*x^2", names)))
    rs = complete_truncated(p, 12)
    assert rs.normal_form(P("(x+y)^2", names)) == NCPoly()
    assert hilbert_function(rs, 12) == list(range(1, 14))
    assert rs.max_rule_degree >= 3


def test_relations_reduce_to_zero():
    p = pres(EG1)
    rs = complete_truncated(p, 8)
    assert all(not rs.normal_form(r) for r in p.relations)


def test_free_algebra_and_truncated_square():
    free = Presentation(("a", "b"), ())
    rs = complete_truncated(free, 5)
    assert hilbert_function(rs, 5) == [1, 2, 4, 8, 16, 32]
    assert classify_growth(rs).kind == "exponential"
    one = Presentation(("x",), (NCPoly({(0, 0): 1}),))
    g = classify_growth(complete_truncated(one, 4))
    assert (g.kind, g.dimension) == ("finite", 2)


def test_truncation_errors():
    p = pres(["x1^4"])
    with pytest.raises(TruncationTooLow):
        complete_truncated(p, 3)
    # xyx = yxy has an infinite basis (rules y x^k y x for every k)
    q = Presentation(("x", "y"), (P("x*y*x - y*x*y", {"x": 0, "y": 1}),))
    rs = complete_truncated(q, 5)
    assert not rs.certified_complete
    with pytest.raises(DegreeExceedsTruncation):
        rs.normal_form(NCPoly({(0,) * 7: 1}))
    with pytest.raises(NotComplete):
        ufnarovski_graph(rs)
    g = classify_growth(rs)
    assert g.kind == "inconclusive" and not g.exact
    # the truncated Hilbert prefix is still exact
    assert list(g.hilbert) == oracle_hilbert(q.relations, 2, 5)


def test_default_truncation_env(monkeypatch):
    p = pres(EG1)
    monkeypatch.delenv("SKEWCI_MAX_DEGREE", raising=False)
    assert default_truncation(p) == 12
    monkeypatch.setenv("SKEWCI_MAX_DEGREE", "7")
    assert default_truncation(p) == 7


def test_completion_deterministic():
    p = pres(EG1 + ["x1^4", "x2^4", "x2^2*x1^2"])
    a = complete_truncated(p, 10).format_rules()
    b = complete_truncated(p, 10).format_rules()
    assert a == b


@pytest.mark.parametrize("order", [(0, 1, 2), (2, 0, 1), (1, 2, 0)])
def test_hilbert_is_order_independent(order):
    p = pres(EG1 + ["x1^4", "x2^4", "x2^2*x1^2"])
    h = hilbert_function(complete_truncated(p, 8, MonomialOrder(order)), 8)
    assert h == [1, 3, 6, 10, 12, 12, 12, 12, 12]


def test_hilbert_matches_oracle_on_random_monomial_ideals():
    import random

    rng = random.Random(5)
    for _ in range(20):
        rels = []
        for _ in range(rng.randint(1, 3)):
            d = rng.randint(2, 3)
            w = tuple(rng.randrange(2) for _ in range(d))
            v = tuple(rng.randrange(2) for _ in range(d))
            rels.append(NCPoly({w: 1, v: rng.choice([-1, 2])}) if w != v else NCPoly({w: 1}))
        p = Presentation(("a", "b"), tuple(rels))
        rs = complete_truncated(p, 5)
        assert hilbert_function(rs, 5) == oracle_hilbert(p.relations, 2, 5)
