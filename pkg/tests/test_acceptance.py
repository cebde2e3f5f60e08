"""Acceptance criteria 1-7, each at its stated tolerance.

Every check is logged as a PASS/FAIL line; the lines are printed in the
``acceptance criteria`` section of the pytest summary.
"""
from __future__ import annotations

import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest
import sympy

from conftest import ACCEPTANCE, BUNDLED, manifest_presentation
from oracles import commutative_quotient_dims, hilbert as oracle_hilbert
from skewci.cli import load_manifest, run_manifest
from skewci.conditions import FamilySpec, SkewModel, check_conditions, complete_intersection_verdict
from skewci.coeff import QQ, QQ_q
from skewci.expr import parse_expression
from skewci.freealg import MonomialOrder, NCPoly, word_compare
from skewci.geometry import A_SYM, B_SYM, ParametricPointFamily, search_annihilated_point, verify_family, verify_point_sequence
from skewci.gsca import GscaInput, certify_regular, eliminate_y
from skewci.rewrite import Presentation, complete_truncated, hilbert_function
from skewci.skew import (
    MuSymMatrix,
    QuadricSystem,
    base_point_free,
    is_normalizing_sequence,
    matrix_of_quadric,
    quadric_of_matrix,
    trivial_mu,
    validate_mu,
    verify_base_point,
)


def check(criterion, label, ok, detail=""):
    ACCEPTANCE.append((criterion, label, bool(ok), detail))
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {label}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {criterion}: {label} {detail}"


X3 = {"x1": 0, "x2": 1, "x3": 2}
Z3 = {"z1": 0, "z2": 1, "z3": 2}
ORDER = MonomialOrder((2, 0, 1))


def P(text, table=X3, field=QQ):
    return parse_expression(text, field, table)


def eg1_input():
    mu = trivial_mu(3)
    mats = [((2, 0, 0), (0, 0, 0), (0, 0, 0)), ((0, 0, 0), (0, 2, 0), (0, 0, 0)), ((0, 1, 0), (1, 0, 0), (0, 0, 2))]
    return GscaInput(mu, tuple(MuSymMatrix(m, mu) for m in mats))


def proportional(f: NCPoly, g: NCPoly) -> bool:
    if set(f.terms) != set(g.terms):
        return False
    w = next(iter(f.terms))
    c = g.terms[w] / f.terms[w]
    return all(g.terms[v] == c * f.terms[v] for v in f.terms)


def matches_up_to_scalar_and_order(got, expected) -> bool:
    return len(got) == len(expected) and all(any(proportional(g, e) for g in got) for e in expected)


# -- 1 -----------------------------------------------------------------------------


def test_criterion_1_eg1_pipeline():
    start = time.perf_counter()
    inp = eg1_input()
    rels = eliminate_y(inp).relations
    expected = [P(t) for t in ("x1*x2 + x2*x1 - x3^2", "x1*x3 + x3*x1", "x2*x3 + x3*x2")]
    check(1, "eliminate_y emits the three displayed relations", matches_up_to_scalar_and_order(rels, expected))

    Q = QuadricSystem.from_matrices(inp.matrices)
    want = [P(t, Z3) for t in ("z1^2", "z2^2", "z1*z2 + z3^2")]
    check(1, "quadric system {z1^2, z2^2, z1*z2 + z3^2}", matches_up_to_scalar_and_order(list(Q.quadrics), want))

    verdict = base_point_free(Q, 12)
    oracle = commutative_quotient_dims([q.terms for q in Q.quadrics], 3, 4)
    check(1, "base_point_free = Free, dimension 8", verdict.kind == "free" and verdict.dimension == 8 == sum(oracle)
          and oracle[-1] == 0, f"oracle dims {oracle}")

    cert = certify_regular(inp, 12)
    check(1, "certify_regular = CertifiedRegular, Hilbert 1,3,6,10,15 at D = 12",
          cert.conclusion == "CertifiedRegular" and list(cert.hilbert[:5]) == [1, 3, 6, 10, 15]
          and len(cert.hilbert) == 13)
    elapsed = time.perf_counter() - start
    check(1, "runtime under 5 s", elapsed < 5, f"{elapsed:.2f} s")


# -- 2 -----------------------------------------------------------------------------


def test_criterion_2_eg2():
    start = time.perf_counter()
    A = Presentation(("x1", "x2", "x3"), tuple(eliminate_y(eg1_input()).relations))
    F = [P("x1^4"), P("x2^4"), P("x2^2*x1^2")]
    fams = [
        FamilySpec(ParametricPointFamily.parse([["a", "b", "0"], ["a", "-b", "0"]])),
        FamilySpec(ParametricPointFamily.parse([["2*a^2", "-b^2", "2*a*b"], ["2*a^2", "-b^2", "-2*a*b"]])),
    ]
    rep = check_conditions(A, F, 12, ORDER, fams, families_exhaustive=True)
    I = rep["I"]
    check(2, "I fails with witness at stage 3",
          I.status == "fails" and I.exact and I.evidence["failing_stage"] == 3
          and "x2^2" in I.evidence["stages"][-1]["kernel_basis"])
    check(2, "II fails", rep["II"].status == "fails" and rep["II"].exact)
    last = rep["III"].evidence["prefixes"][-1]
    rs = complete_truncated(A.extend(F), 12, ORDER)
    check(2, "III fails with GK(A/F) = 1 exactly (certified basis, Ufnarovski cycles)",
          rep["III"].status == "fails" and rep["III"].exact and last["gk"] == 1 and last["exact"]
          and rs.certified_complete)
    check(2, "IV holds with both families flagged exhaustive", rep["IV"].status == "holds" and rep["IV"].exact)
    verdict, alarm, _ = complete_intersection_verdict(rep)
    check(2, "verdict Not, no consistency alarm", verdict == "Not" and not alarm)
    elapsed = time.perf_counter() - start
    check(2, "runtime under 30 s at D = 12", elapsed < 30, f"{elapsed:.2f} s")


# -- 3 -----------------------------------------------------------------------------


def test_criterion_3_eg3():
    A = Presentation(("x1", "x2", "x3"), tuple(eliminate_y(eg1_input()).relations))
    F = [P("x1^2"), P("x2^2"), P("x3^2")]
    model = SkewModel(validate_mu([[1, -1, -1], [-1, 1, -1], [-1, -1, 1]]), tuple(F))
    D = 12
    rep = check_conditions(A, F, D, ORDER, skew_model=model)
    check(3, "I-IV all hold", all(rep[c].status == "holds" and rep[c].exact for c in ("I", "II", "III", "IV")))
    check(3, "dim A/F = 8", rep["II"].evidence.get("dimension") == 8)
    hA = hilbert_function(complete_truncated(A, D), D)
    hQ = hilbert_function(complete_truncated(A.extend(F), D, ORDER), D)
    factor = [1, 0, -3, 0, 3, 0, -1]  # (1 - t^2)^3
    prod = [sum(factor[i] * hA[m - i] for i in range(len(factor)) if m >= i) for m in range(D + 1)]
    check(3, "H_A (1 - t^2)^3 = H_{A/F} coefficientwise to D", prod == hQ, f"D = {D}")


# -- 4 -----------------------------------------------------------------------------


def _eg4(field, q):
    names = {n: i for i, n in enumerate("abcd")}
    rels = ["a*b-q*b*a", "a*c-q*c*a", "b*c-c*b", "b*d-q*d*b", "c*d-q*d*c", "a*d-d*a-(q-q^-1)*b*c"]
    A = Presentation(tuple("abcd"), tuple(parse_expression(r, field, names, q) for r in rels), field)
    F = [parse_expression(t, field, names) for t in ("b*c", "b^2", "c^2", "a*d")]
    return A, F


@pytest.mark.parametrize("variant", ["q=3", "generic"])
def test_criterion_4_eg4(variant):
    field, q = (QQ, 3) if variant == "q=3" else (QQ_q, None)
    A, F = _eg4(field, q)
    D = 10
    h = hilbert_function(complete_truncated(A, D), D)
    binom = [(m + 1) * (m + 2) * (m + 3) // 6 for m in range(D + 1)]
    check(4, f"[{variant}] Hilbert 1,4,10,20,35,... to degree {D}", h == binom)
    normal = all(r.is_normal for r in is_normalizing_sequence(F, A, D))
    rep = check_conditions(A, F, D)
    check(4, f"[{variant}] F normalizing but I fails", normal and rep["I"].status == "fails" and rep["I"].exact)
    w = search_annihilated_point(A, F)
    ok = (w is not None and w.verified and w.field == "exact"
          and all(list(p) == [1, 0, 0, 0] for p in w.points)
          and verify_point_sequence(list(w.points), A.relations, F, 4))
    check(4, f"[{variant}] exact constant witness at (1,0,0,0)", ok)
    check(4, f"[{variant}] none of I-IV hold",
          all(rep[c].status == "fails" and rep[c].exact for c in ("I", "II", "III", "IV")))


# -- 5 -----------------------------------------------------------------------------


def test_criterion_5_clifford():
    Q = QuadricSystem((P("z1*(z1 - z2)", Z3), P("z2*(z1 - z2)", Z3)), trivial_mu(2))
    v = base_point_free(Q, 12)
    check(5, "base_point_free = NotFree with witness ((1,1),(1,1))",
          v.kind == "not_free" and [list(p) for p in v.witness] == [[1, 1], [1, 1]]
          and verify_base_point(Q, *v.witness))
    names = {"x": 0, "y": 1}
    A = Presentation(("x", "y"), (P("x*y + y*x + x^2 + y^2", names), P("x^2*y - y*x^2", names)))
    D = 12
    rs = complete_truncated(A, D)
    check(5, "normal_form((x+y)^2) = 0", not rs.normal_form(P("(x+y)^2", names)))
    check(5, "Hilbert 1,2,3,4,... to D", hilbert_function(rs, D) == list(range(1, D + 2)))
    rep = check_conditions(A, [P("x^2", names), P("y^2", names)], D)
    check(5, "F = {x^2, y^2}: I-III hold with dimension 4",
          all(rep[c].status == "holds" and rep[c].exact for c in ("I", "II", "III"))
          and rep["II"].evidence["dimension"] == 4)
    check(5, "completed basis has a rule of degree >= 3", rs.max_rule_degree >= 3 and rs.certified_complete,
          f"max rule degree {rs.max_rule_degree}")


# -- 6 -----------------------------------------------------------------------------


def test_criterion_6_monomial_order_axioms():
    rng = random.Random(0)
    failures = 0
    for _ in range(2000):
        n = rng.randint(1, 4)
        order = MonomialOrder(tuple(rng.sample(range(n), n)))
        u, v, w = (tuple(rng.randrange(n) for _ in range(rng.randint(0, 4))) for _ in range(3))
        c = word_compare(u, v, order)
        ok = c == -word_compare(v, u, order) and (c == 0) == (u == v)
        if c < 0:
            ok &= word_compare(w + u, w + v, order) < 0 and word_compare(u + w, v + w, order) < 0
            ok &= not (word_compare(v, w, order) < 0) or word_compare(u, w, order) < 0
        if len(u) < len(v):
            ok &= c < 0
        failures += not ok
    check(6, "monomial-order axioms on 2000 random triples", failures == 0)


def _random_poly(rng, n, d, one):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        terms[tuple(rng.randrange(n) for _ in range(d))] = one * rng.randint(-3, 3)
    return NCPoly(terms)


def _random_ideal_element(rng, relations, n, d, one):
    g = NCPoly()
    usable = [r for r in relations if r.degree <= d]
    for _ in range(rng.randint(1, 3)):
        r = rng.choice(usable)
        k = rng.randint(0, d - r.degree)
        u = NCPoly.monomial(tuple(rng.randrange(n) for _ in range(k)), one)
        v = NCPoly.monomial(tuple(rng.randrange(n) for _ in range(d - r.degree - k)), one)
        g = g + u * r * v * rng.randint(1, 3)
    return g


@pytest.mark.parametrize("name", BUNDLED)
def test_criterion_6_normal_form_properties(name):
    m, p = manifest_presentation(name)
    rs = complete_truncated(p, 12, m.order())
    rng = random.Random(name)
    one = p.field.one
    low = max(p.max_degree, 2)
    bad = 0
    for _ in range(1000):
        d = rng.randint(low, low + 3)
        f = _random_poly(rng, p.n, d, one)
        g = _random_ideal_element(rng, p.relations, p.n, d, one)
        nf = rs.normal_form(f)
        ok = rs.normal_form(nf) == nf
        ok &= not rs.normal_form(g)
        ok &= rs.normal_form(f + g) == nf
        ok &= all(rs.is_normal_word(w) for w in nf.terms)
        bad += not ok
    check(6, f"[{name}] nf idempotence and ideal-membership soundness, 1000 cases", bad == 0, f"{bad} failures")


@pytest.mark.parametrize("name", BUNDLED)
def test_criterion_6_hilbert_oracle(name):
    m, p = manifest_presentation(name)
    presentations = [("A", p)] + [(f"A/{s.name}", p.extend(s.elements)) for s in m.sequences]
    results = []
    for label, q in presentations:
        rs = complete_truncated(q, 12, m.order())
        results.append((label, hilbert_function(rs, 5), oracle_hilbert(q.relations, q.n, 5)))
    ok = all(a == b for _, a, b in results)
    check(6, f"[{name}] Hilbert function equals brute-force ideal rank for m <= 5", ok,
          "; ".join(f"{label}: {a}" for label, a, _ in results))


def _random_mu_symmetric(rng, n):
    mu = [[Fraction(1)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a = Fraction(rng.choice([-3, -2, -1, 1, 2, 5]), rng.choice([1, 2, 3]))
            mu[i][j], mu[j][i] = a, 1 / a
    mu = validate_mu(mu)
    while True:
        M = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            M[i][i] = Fraction(rng.randint(-3, 3))
            for j in range(i + 1, n):
                M[i][j] = Fraction(rng.randint(-3, 3))
                M[j][i] = mu[j, i] * M[i][j]
        if any(x for row in M for x in row):
            return MuSymMatrix(tuple(map(tuple, M)), mu)


def test_criterion_6_mu_quadric_roundtrip():
    rng = random.Random(11)
    bad = 0
    for _ in range(100):
        M = _random_mu_symmetric(rng, rng.randint(1, 4))
        q = quadric_of_matrix(M)
        M2 = matrix_of_quadric(q, M.mu)
        flat, flat2 = [x for r in M.entries for x in r], [x for r in M2.entries for x in r]
        k = next(i for i, x in enumerate(flat) if x)
        c = flat2[k] / flat[k]
        ok = c != 0 and all(y == c * x for x, y in zip(flat, flat2))
        ok &= quadric_of_matrix(M2) == q
        bad += not ok
    check(6, "mu-quadric roundtrip on 100 random mu-symmetric matrices (n <= 4)", bad == 0, f"{bad} failures")


def test_criterion_6_family_rescaling_invariance():
    _, A = manifest_presentation("eg1")
    rng = random.Random(3)
    rows = {
        "line": [["a", "b", "0"], ["a", "-b", "0"]],
        "conic": [["2*a^2", "-b^2", "2*a*b"], ["2*a^2", "-b^2", "-2*a*b"]],
        "off": [["a", "b", "0"], ["a", "b", "0"]],
    }
    bad = 0
    for _ in range(60):
        name = rng.choice(sorted(rows))
        fam = ParametricPointFamily.parse(rows[name])
        factors = []
        for _ in range(fam.period):
            c = rng.choice([-3, -1, 2, 7])
            expr = c * A_SYM ** rng.randint(0, 2) * (A_SYM + rng.randint(-2, 2) * B_SYM) ** rng.randint(0, 2)
            factors.append(sympy.Poly(expr, A_SYM, B_SYM, domain=sympy.QQ))
        bad += bool(verify_family(fam.rescaled(factors), A)) != bool(verify_family(fam, A))
    check(6, "verify_family invariant under projective rescaling (60 random rescalings)", bad == 0)


def test_criterion_6_alarm_silent_on_bundled_regular_cases():
    fired = {}
    for name in BUNDLED:
        report, code = run_manifest(load_manifest(name))
        fired[name] = report["consistency_alarm"] or code == 3
    check(6, "consistency alarm silent on all bundled cases", not any(fired.values()),
          ", ".join(k for k, v in fired.items() if v))


# -- 7 -----------------------------------------------------------------------------


def test_criterion_7_determinism(tmp_path):
    names = ("eg1", "eg2", "eg3", "eg4", "clifford2", "skewS")
    differing = []
    for name in names:
        outs = []
        for run in range(2):
            path = tmp_path / f"{name}-{run}.json"
            proc = subprocess.run([sys.executable, "-m", "skewci", "run", name, "--seed", "0", "--out", str(path)],
                                  capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
            outs.append(path.read_bytes())
        if outs[0] != outs[1]:
            differing.append(name)
    check(7, "two runs of each bundled manifest give byte-identical reports", not differing,
          ", ".join(differing) or ", ".join(names))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
