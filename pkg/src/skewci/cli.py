"""Command-line entry point and the manifest runner.

``skewci run MANIFEST`` executes the manifest's commands and prints a JSON
report; ``skewci validate MANIFEST`` only parses it.  MANIFEST is a path or
the name of a bundled manifest (see ``skewci list``).

Exit codes: 0 on completion, 2 on input errors, 3 when a consistency alarm
fired.
"""
from __future__ import annotations

import hashlib
import json
import sys
import time
from importlib import resources
from pathlib import Path

import click

from . import __version__
from .coeff import parse_scalar
from .conditions import SkewModel, check_conditions, complete_intersection_verdict
from .expr import ExpressionParseError
from .geometry import verify_point_sequence
from .gsca import GscaInput, MatricesDependent, certify_regular, solve_y, substitution_residues
from .manifest import COMMANDS, LocatedError, Manifest, SchemaError, parse_manifest
from .rewrite import (
    DEFAULT_TRUNCATION_ENV,
    Presentation,
    classify_growth,
    complete_truncated,
    default_truncation,
    hilbert_function,
)
from .skew import (
    DEFAULT_PRIMES,
    NotNormalizing,
    QuadricSystem,
    base_point_free,
    is_normalizing_sequence,
    skew_polynomial_ring,
    verify_base_point,
)

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_INPUT, EXIT_ALARM = 0, 2, 3
_NEEDS = {"ci-verdict": "conditions"}


class InputError(ValueError):
    pass


def bundled_manifests() -> dict[str, Path]:
    root = resources.files("skewci") / "manifests"
    return {Path(p.name).stem: Path(str(p)) for p in root.iterdir() if p.name.endswith(".yaml")}


def load_manifest(ref: str) -> Manifest:
    path = Path(ref)
    if not path.exists():
        bundled = bundled_manifests()
        if ref not in bundled:
            raise InputError(f"no manifest file or bundled manifest named {ref!r}")
        path = bundled[ref]
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse_manifest(text)


# -- the runner -------------------------------------------------------------------


def _presentation(m: Manifest):
    if m.relations is not None:
        return Presentation(m.names, m.relations, m.field), None
    try:
        elim = solve_y(GscaInput(m.mu, m.matrices))
    except MatricesDependent as exc:
        return None, str(exc)
    return Presentation(m.names, elim.presentation.relations, m.field), None


def _quadratic_check(p: Presentation, order) -> dict:
    """Is the ideal generated by its degree-two part?  Exact in the degrees checked."""
    higher = [r for r in p.relations if r.degree > 2]
    if not higher:
        return {"generated_in_degree_two": all(r.degree == 2 for r in p.relations)}
    quad = Presentation(p.names, tuple(r for r in p.relations if r.degree == 2), p.field)
    rs = complete_truncated(quad, max(r.degree for r in higher), order)
    outside = [r.format(p.names) for r in higher if rs.normal_form(r)]
    out = {"generated_in_degree_two": not outside}
    if outside:
        out["not_in_quadratic_ideal"] = outside
    return out


def _error(exc: Exception) -> dict:
    return {"error": type(exc).__name__, "message": str(exc)}


def run_manifest(
    m: Manifest,
    max_degree: int | None = None,
    seed: int | None = None,
    primes=None,
    timings: bool = False,
) -> tuple[dict, int]:
    D = max_degree if max_degree is not None else m.options.max_degree
    seed = seed if seed is not None else m.options.seed
    primes = tuple(primes or m.options.primes or DEFAULT_PRIMES)
    order = m.order()
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "skewci", "version": __version__},
        "input_sha256": hashlib.sha256(m.source.encode("utf-8")).hexdigest(),
        "manifest": m.name,
        "settings": {
            "max_degree": D,
            "seed": seed,
            "primes": list(primes),
            "order": list(m.options.order) if m.options.order else None,
            "field": m.field_name + (f" at q = {m.q_value}" if m.q_value is not None else ""),
        },
    }
    results: dict = {}
    clock: dict = {}
    alarm = False

    pres, pres_error = _presentation(m)
    report["presentation"] = {
        "generators": list(m.names),
        "route": m.route,
        "ambient": m.ambient,
        "relations": pres.format_relations() if pres else None,
    }
    if pres_error:
        report["presentation"]["error"] = pres_error
    if m.ambient == "skew" and pres is not None:
        S = skew_polynomial_ring(m.mu, m.names)
        same = _same_ideal(pres, S, D, order)
        report["presentation"]["skew_ring_verified"] = same
        if not same:
            raise InputError("ambient is declared 'skew' but the relations do not define the skew polynomial ring of mu")

    requested = list(m.commands)
    for cmd, dep in _NEEDS.items():
        if cmd in requested and dep not in requested:
            requested.append(dep)
    ordered = [c for c in COMMANDS if c in requested]

    rs_cache: dict = {}

    def algebra_rs():
        if "rs" not in rs_cache:
            Dp = D if D is not None else default_truncation(pres)
            rs_cache["rs"] = complete_truncated(pres, Dp, order)
        return rs_cache["rs"]

    reports = {}
    for cmd in ordered:
        start = time.perf_counter()
        try:
            if cmd == "validate":
                results[cmd] = {"valid": True, "route": m.route, "n": m.n, "field": m.field_name}
            elif cmd == "gsca":
                results[cmd] = _gsca(m, order)
            elif cmd in ("hilbert", "growth", "normalizing", "conditions", "ci-verdict") and pres is None:
                results[cmd] = {"error": "MatricesDependent", "message": pres_error}
            elif cmd == "hilbert":
                rs = algebra_rs()
                results[cmd] = {
                    "truncation_degree": rs.truncation_degree,
                    "values": hilbert_function(rs, rs.truncation_degree),
                    "certified_complete": rs.certified_complete,
                    "rules": rs.format_rules(),
                    "max_rule_degree": rs.max_rule_degree,
                    "quadratic": _quadratic_check(pres, order),
                }
            elif cmd == "growth":
                results[cmd] = classify_growth(algebra_rs()).as_dict()
            elif cmd == "normalizing":
                out = {}
                for s in m.sequences:
                    Dn = D if D is not None else default_truncation(pres.extend(s.elements))
                    out[s.name] = [r.as_dict(m.names) for r in is_normalizing_sequence(list(s.elements), pres, Dn, order)]
                results[cmd] = out
            elif cmd == "base-point-free":
                results[cmd] = _base_point_free(m, D, primes, seed)
            elif cmd == "certify-regular":
                if m.matrices is None:
                    results[cmd] = {"error": "NoMatrices", "message": "certify-regular needs the matrices route"}
                else:
                    results[cmd] = certify_regular(GscaInput(m.mu, m.matrices), D, order, primes, seed).as_dict()
            elif cmd == "conditions":
                out = {}
                for s in m.sequences:
                    model = s.skew_model
                    if model is None and m.ambient == "skew":
                        model = SkewModel(m.mu, s.elements)
                    try:
                        rep = check_conditions(
                            pres, s.elements, D, order, m.families, m.families_exhaustive,
                            skew_model=model, primes=primes, seed=seed,
                        )
                    except NotNormalizing as exc:
                        out[s.name] = _error(exc)
                        continue
                    reports[s.name] = rep
                    out[s.name] = rep.as_dict()
                results[cmd] = out
            elif cmd == "ci-verdict":
                out = {}
                for name, rep in reports.items():
                    verdict, fired, detail = complete_intersection_verdict(rep, m.ambient == "skew")
                    alarm = alarm or fired
                    out[name] = {"verdict": verdict, "consistency_alarm": fired}
                    if fired:
                        out[name]["alarm"] = "CONSISTENCY ALARM: " + detail
                results[cmd] = out
        except (NotNormalizing, MatricesDependent, ValueError) as exc:
            results[cmd] = _error(exc)
        clock[cmd] = round(time.perf_counter() - start, 4)

    report["results"] = results
    report["consistency_alarm"] = alarm
    if timings:
        report["timings_seconds"] = clock
    return report, EXIT_ALARM if alarm else EXIT_OK


def _same_ideal(p: Presentation, S: Presentation, D, order) -> bool:
    Dq = max(D or 0, p.max_degree, S.max_degree, 2)
    rs_p = complete_truncated(p, Dq, order)
    rs_s = complete_truncated(S, Dq, order)
    return all(not rs_s.normal_form(r) for r in p.relations) and all(not rs_p.normal_form(r) for r in S.relations)


def _gsca(m: Manifest, order) -> dict:
    if m.matrices is None:
        return {"error": "NoMatrices", "message": "gsca needs the matrices route"}
    inp = GscaInput(m.mu, m.matrices)
    elim = solve_y(inp)
    residues = substitution_residues(inp, order)
    return {
        "relations": elim.presentation.format_relations(),
        "y_images": {f"y{k + 1}": y.format(m.names) for k, y in enumerate(elim.y_images)},
        "substitution_residues_vanish": not any(residues),
    }


def _quadric_system(m: Manifest) -> QuadricSystem | None:
    if m.quadrics is not None:
        return QuadricSystem(m.quadrics, m.mu)
    if m.matrices is not None:
        return QuadricSystem.from_matrices(m.matrices)
    return None


def _base_point_free(m: Manifest, D, primes, seed) -> dict:
    Q = _quadric_system(m)
    if Q is None:
        return {"error": "NoQuadricSystem", "message": "give 'matrices' or 'quadrics'"}
    z = [f"z{i + 1}" for i in range(m.n)]
    out = base_point_free(Q, D, primes=primes, seed=seed).as_dict()
    out["quadric_system"] = [q.format(z) for q in Q.quadrics]
    return out


# -- witness re-verification ----------------------------------------------------------


def recheck_witnesses(report: dict, m: Manifest) -> list[str]:
    """Re-verify every witness embedded in a report; return the failures."""
    failures = []
    fld = m.field
    results = report.get("results", {})

    def point(row):
        return [parse_scalar(str(x), fld) for x in row]

    bpf = results.get("base-point-free", {})
    Q = _quadric_system(m)
    if "witness" in bpf and Q is not None:
        p1, p2 = (point(r) for r in bpf["witness"])
        if not verify_base_point(Q, p1, p2):
            failures.append("base-point-free witness")
    pres, _ = _presentation(m)
    for s in m.sequences:
        rep = results.get("conditions", {}).get(s.name)
        if not rep or "conditions" not in rep:
            continue
        for method in rep["conditions"]["IV"]["evidence"].get("methods", []):
            w = method.get("witness")
            if w and not verify_point_sequence([point(r) for r in w["points"]], pres.relations, s.elements, m.n):
                failures.append(f"{s.name}: point-module witness")
            bp = method.get("base_point_free", {}).get("witness")
            if bp and s.skew_model is not None:
                Qs = QuadricSystem(s.skew_model.G, s.skew_model.mu)
                if not verify_base_point(Qs, *(point(r) for r in bp)):
                    failures.append(f"{s.name}: skew-model base point")
    return failures


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- click ---------------------------------------------------------------------------


def _parse_primes(ctx, param, value):
    if value is None:
        return None
    try:
        return tuple(int(p) for p in value.split(",") if p.strip())
    except ValueError:
        raise click.BadParameter("expected a comma-separated list of integers") from None


def _input_failure(exc: Exception) -> None:
    click.echo(f"input error: {exc}", err=True)
    sys.exit(EXIT_INPUT)


_INPUT_ERRORS = (InputError, SchemaError, LocatedError, ExpressionParseError)


@click.group(help="Exact workbench for graded skew Clifford algebras and complete intersections.")
@click.version_option(__version__, prog_name="skewci")
def main():
    pass


@main.command(help=f"Run a manifest's commands. Default truncation comes from {DEFAULT_TRUNCATION_ENV} when set.")
@click.argument("manifest")
@click.option("--max-degree", type=click.IntRange(min=1), default=None, help="Truncation degree D.")
@click.option("--seed", type=int, default=None, help="Seed for randomized witness probes.")
@click.option("--primes", callback=_parse_primes, default=None, help="Comma-separated probe primes.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="Write the report here.")
@click.option("--timings", is_flag=True, help="Include wall-clock timings (breaks byte determinism).")
def run(manifest, max_degree, seed, primes, out, timings):
    try:
        m = load_manifest(manifest)
        report, code = run_manifest(m, max_degree, seed, primes, timings)
    except _INPUT_ERRORS as exc:
        _input_failure(exc)
    text = dump_report(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    if code == EXIT_ALARM:
        click.echo("CONSISTENCY ALARM fired; see the report", err=True)
    sys.exit(code)


@main.command(help="Parse and validate a manifest without running it.")
@click.argument("manifest")
def validate(manifest):
    try:
        m = load_manifest(manifest)
    except _INPUT_ERRORS as exc:
        _input_failure(exc)
    click.echo(f"{m.name or manifest}: valid ({m.route} route, n = {m.n}, field {m.field_name})")


@main.command("list", help="List the bundled manifests.")
def list_manifests():
    for name in sorted(bundled_manifests()):
        click.echo(name)


if __name__ == "__main__":
    main()
