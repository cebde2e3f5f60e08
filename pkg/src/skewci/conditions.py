"""Conditions I-IV for an algebra and a normalizing sequence, and the verdict.

I    the sequence is regular;
II   the quotient by the whole sequence is finite dimensional;
III  the k-th prefix quotient has GK dimension n - k;
IV   no right point module is annihilated by the sequence.

Every status carries an ``exact`` flag.  Exact statuses rest on certified
Groebner bases, exact kernel elements or exactly verified witnesses; the
rest are truncation-qualified and make the verdict inconclusive.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .freealg import MonomialOrder, NCPoly
from .geometry import ParametricPointFamily, annihilates, search_annihilated_point, verify_family
from .linalg import echelonize
from .rewrite import (
    Presentation,
    RewriteSystem,
    TruncationTooLow,
    classify_growth,
    complete_truncated,
    default_truncation,
    hilbert_function,
)
from .skew import (
    DEFAULT_PRIMES,
    MuData,
    NotNormalizing,
    QuadricSystem,
    base_point_free,
    is_normal,
    skew_polynomial_ring,
)

CONDITIONS = ("I", "II", "III", "IV")


@dataclass
class ConditionEntry:
    status: str  # "holds", "fails", "inconclusive" or "skipped"
    exact: bool = False
    evidence: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"status": self.status, "exact": self.exact, "evidence": self.evidence}


@dataclass
class ConditionReport:
    conditions: dict
    truncation_degree: int
    normalizing: list = field(default_factory=list)
    verdict: str | None = None
    alarm: bool = False
    alarm_detail: str = ""

    def __getitem__(self, name) -> ConditionEntry:
        return self.conditions[name]

    def as_dict(self) -> dict:
        out = {
            "truncation_degree": self.truncation_degree,
            "normalizing": self.normalizing,
            "conditions": {k: v.as_dict() for k, v in self.conditions.items()},
        }
        if self.verdict is not None:
            out["verdict"] = self.verdict
            out["consistency_alarm"] = self.alarm
            if self.alarm_detail:
                out["alarm_detail"] = self.alarm_detail
        return out


@dataclass
class FamilySpec:
    family: ParametricPointFamily
    name: str = ""


@dataclass
class SkewModel:
    """A skew polynomial ring B (on the same generators) and G with A/<F> = B/<G>."""

    mu: MuData
    G: tuple


# -- helpers -----------------------------------------------------------------


def _kernel(rs: RewriteSystem, f: NCPoly, m: int, side: str) -> list[NCPoly]:
    """Kernel of ``u -> u f`` (side "right") or ``u -> f u`` on degree ``m`` of rs's algebra."""
    basis = rs.normal_words(m)
    rows = []
    for idx, w in enumerate(basis):
        u = NCPoly.monomial(w, rs.presentation.field.one)
        img = rs.normal_form(u * f if side == "right" else f * u)
        row = dict(img.terms)
        row[idx] = 1
        rows.append(row)
    key = lambda c: (0, c, ()) if isinstance(c, int) else (1, len(c), c)
    pivots = echelonize(rows, key)
    kernel = []
    for piv, row in sorted(pivots.items(), key=lambda kv: key(kv[0])):
        if isinstance(piv, int):
            kernel.append(NCPoly({basis[i]: c for i, c in row.items()}))
    return kernel


def series_identity(rs_prev: RewriteSystem, rs_next: RewriteSystem, d: int) -> bool | None:
    """Decide ``H_next(t) = (1 - t^d) H_prev(t)`` in every degree.

    Both Hilbert functions count paths in finite automata, so each satisfies
    a linear recurrence whose order is the automaton size; agreement on a
    long enough prefix therefore implies agreement everywhere.  Returns
    ``None`` when either basis is not certified complete.
    """
    if not (rs_prev.certified_complete and rs_next.certified_complete):
        return None
    N = rs_prev.automaton.live_states + rs_next.automaton.live_states
    top = d + 2 * N + 2
    h1 = rs_prev.automaton.counts(top)
    h2 = rs_next.automaton.counts(top)
    return all(h2[m] == h1[m] - (h1[m - d] if m >= d else 0) for m in range(top + 1))


def _ideals_equal(p1: Presentation, p2: Presentation, D: int, order) -> bool:
    """Exact test that two homogeneous presentations on the same generators define one ideal."""
    D = max(D, p1.max_degree, p2.max_degree)
    rs1 = complete_truncated(p1, D, order)
    rs2 = complete_truncated(p2, D, order)
    return all(not rs2.normal_form(r) for r in p1.relations) and all(
        not rs1.normal_form(r) for r in p2.relations
    )


def _gk_of(growth) -> int | None:
    if growth.kind == "finite":
        return 0
    if growth.kind == "polynomial":
        return growth.gk
    return None


# -- the checks ----------------------------------------------------------------


def _condition_I(p, F, systems, D, names):
    stages = []
    exact_all = True
    for k, f in enumerate(F):
        rs_prev = systems[k]
        d = f.degree
        stage = {"stage": k + 1, "element": f.format(names)}
        witness = None
        checked = -1
        for m in range(0, D - d + 1):
            for side in ("right", "left"):
                ker = _kernel(rs_prev, f, m, side)
                if ker:
                    witness = (m, side, ker)
                    break
            if witness:
                break
            checked = m
        if witness:
            m, side, ker = witness
            stage.update(
                injective=False,
                kernel_degree=m,
                kernel_side="u*f" if side == "right" else "f*u",
                kernel_basis=[g.format(names) for g in ker],
            )
            stages.append(stage)
            return ConditionEntry(
                "fails", True, {"failing_stage": k + 1, "stages": stages}
            ), stages
        identity = series_identity(rs_prev, systems[k + 1], d)
        stage.update(injective_through_degree=checked, hilbert_identity=identity)
        if not identity:
            exact_all = False
        stages.append(stage)
    evidence = {"stages": stages}
    h_full = hilbert_function(systems[-1], D)
    h_base = hilbert_function(systems[0], D)
    predicted = list(h_base)
    for f in F:
        d = f.degree
        predicted = [predicted[m] - (predicted[m - d] if m >= d else 0) for m in range(len(predicted))]
    evidence["factorization_matches_to_D"] = predicted == list(h_full)
    return ConditionEntry("holds", exact_all, evidence), stages


def _condition_II(systems):
    growth = classify_growth(systems[-1])
    ev = growth.as_dict()
    if not growth.exact:
        return ConditionEntry("inconclusive", False, ev)
    return ConditionEntry("holds" if growth.kind == "finite" else "fails", True, ev)


def _condition_III(n, systems):
    prefixes = []
    statuses = []
    for k in range(1, len(systems)):
        growth = classify_growth(systems[k])
        gk = _gk_of(growth)
        entry = {"k": k, "target": n - k, "kind": growth.kind, "exact": growth.exact}
        if growth.exact:
            entry["gk"] = gk if gk is not None else "infinite"
            ok = gk == n - k
            statuses.append(ok)
        else:
            entry["hilbert_prefix"] = list(growth.hilbert)
            statuses.append(None)
        entry["matches"] = statuses[-1]
        prefixes.append(entry)
    ev = {"prefixes": prefixes}
    if any(s is False for s in statuses):
        return ConditionEntry("fails", True, ev)
    if all(s is True for s in statuses):
        return ConditionEntry("holds", True, ev)
    return ConditionEntry("inconclusive", False, ev)


def _condition_IV(p, F, D, order, families, exhaustive, skew_model, primes, seed, trials):
    methods = []
    holds_exact = False
    fails_exact = False
    conflict = []

    if families:
        fam_results = []
        all_nowhere = True
        for spec in families:
            fam = spec.family
            check = verify_family(fam, p)
            res = {"name": spec.name, "valid": check.as_dict()}
            if not check:
                all_nowhere = False
                fam_results.append(res)
                continue
            verdict = annihilates(fam, F)
            res["annihilation"] = verdict.as_dict()
            if verdict.kind != "nowhere":
                fails_exact = True
                all_nowhere = False
            fam_results.append(res)
        method = {"method": "family-certificates", "exhaustive": exhaustive, "families": fam_results}
        if all_nowhere and exhaustive:
            holds_exact = True
            method["conclusion"] = "holds"
        elif fails_exact:
            method["conclusion"] = "fails"
        else:
            method["conclusion"] = "no annihilated family member"
        methods.append(method)

    if skew_model is not None:
        B = skew_polynomial_ring(skew_model.mu, p.names)
        same = _ideals_equal(p.extend(F), B.extend(skew_model.G), D, order)
        method = {"method": "skew-equivalence", "quotients_equal": same}
        if same:
            if all(g.degree == 2 for g in skew_model.G):
                Q = QuadricSystem(tuple(skew_model.G), skew_model.mu)
                bpf = base_point_free(Q, D, primes=primes, seed=seed)
                method["base_point_free"] = bpf.as_dict()
                kind = bpf.kind
                if kind == "free":
                    holds_exact = True
                    method["conclusion"] = "holds"
                elif kind == "not_free":
                    fails_exact = True
                    method["conclusion"] = "fails"
            else:
                growth = classify_growth(complete_truncated(B.extend(skew_model.G), D, order))
                method["quotient_growth"] = growth.as_dict()
                if growth.exact:
                    if growth.kind == "finite":
                        holds_exact = True
                        method["conclusion"] = "holds"
                    else:
                        fails_exact = True
                        method["conclusion"] = "fails"
        methods.append(method)

    witness = search_annihilated_point(p, F, primes=primes, seed=seed, trials=trials)
    method = {"method": "witness-search"}
    if witness is not None:
        fails_exact = True
        method["witness"] = witness.as_dict()
        method["conclusion"] = "fails"
    else:
        method["conclusion"] = "no witness found"
    methods.append(method)

    ev = {"methods": methods}
    if holds_exact and fails_exact:
        conflict.append("condition IV: an exhaustive certificate and an exact witness disagree")
        ev["conflict"] = conflict[0]
        return ConditionEntry("fails", True, ev), conflict
    if fails_exact:
        return ConditionEntry("fails", True, ev), conflict
    if holds_exact:
        return ConditionEntry("holds", True, ev), conflict
    return ConditionEntry("inconclusive", False, ev), conflict


def check_conditions(
    p: Presentation,
    F: Sequence[NCPoly],
    D: int | None = None,
    order: MonomialOrder | None = None,
    families: Sequence[FamilySpec] = (),
    families_exhaustive: bool = False,
    skew_model: SkewModel | None = None,
    primes: Sequence[int] = DEFAULT_PRIMES,
    seed: int = 0,
    trials: int = 100,
    which: Sequence[str] = CONDITIONS,
) -> ConditionReport:
    F = [f for f in F]
    if D is None:
        D = default_truncation(p.extend(F))
    if D < max((f.degree for f in F), default=0) + 1:
        raise TruncationTooLow("truncation degree must exceed every degree in the sequence")
    names = p.names
    systems = [complete_truncated(p.extend(F[:k]), D, order) for k in range(len(F) + 1)]

    normalizing = []
    for k, f in enumerate(F):
        rep = is_normal(f, p.extend(F[:k]), D, order, rs=systems[k])
        if rep.is_normal is False:
            raise NotNormalizing(k, rep)
        normalizing.append(rep.as_dict(names))

    conditions = {}
    conflicts: list = []
    for name in CONDITIONS:
        if name not in which:
            conditions[name] = ConditionEntry("skipped")
            continue
        if name == "I":
            conditions[name] = _condition_I(p, F, systems, D, names)[0]
        elif name == "II":
            conditions[name] = _condition_II(systems)
        elif name == "III":
            conditions[name] = _condition_III(p.n, systems)
        else:
            entry, conflict = _condition_IV(
                p, F, D, order, families, families_exhaustive, skew_model, primes, seed, trials
            )
            conditions[name] = entry
            conflicts += conflict
    report = ConditionReport(conditions, D, normalizing)
    report.alarm_detail = "; ".join(conflicts)
    report.alarm = bool(conflicts)
    return report


def complete_intersection_verdict(report: ConditionReport, ambient_skew: bool = False):
    """Return ``(verdict, alarm, detail)``.

    The verdict is "CompleteIntersection" when I-III hold exactly (and IV too
    when the ambient algebra is a skew polynomial ring), "Not" when a needed
    condition fails exactly, and "Inconclusive" otherwise.  Exact I-III
    statuses that disagree raise the consistency alarm.
    """
    needed = ["I", "II", "III"] + (["IV"] if ambient_skew else [])
    entries = [report[c] for c in needed]
    exact = {c: report[c].status for c in ("I", "II", "III") if report[c].exact and report[c].status in ("holds", "fails")}
    alarm = len(set(exact.values())) > 1
    detail = report.alarm_detail
    if alarm:
        msg = "exact statuses of I-III disagree: " + ", ".join(f"{k}={v}" for k, v in sorted(exact.items()))
        detail = f"{detail}; {msg}" if detail else msg
    alarm = alarm or report.alarm
    if any(e.status == "fails" and e.exact for e in entries):
        verdict = "Not"
    elif all(e.status == "holds" and e.exact for e in entries):
        verdict = "CompleteIntersection"
    else:
        verdict = "Inconclusive"
    report.verdict, report.alarm, report.alarm_detail = verdict, alarm, detail
    return verdict, alarm, detail
