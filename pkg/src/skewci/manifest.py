"""Job manifests: YAML documents describing an algebra, sequences and commands.

Schema (keys not listed are rejected)::

    name:        str                       label copied into the report
    field:       "Q" | "Q(q)"
    q:           scalar                    optional; specializes Q(q) to Q
    generators:  [str, ...]                degree-one generator names
    n:           int                       optional; must equal len(generators)
    mu:          n x n scalars             default: all ones
    ambient:     "gsca" | "skew" | "general"
    matrices:    [n x n scalars, ...]      graded skew Clifford route
    relations:   [expr, ...]               explicit presentation route
    quadrics:    [expr in z1..zn, ...]     optional quadric system
    sequences:   [{name, elements, skew_model: {mu, elements}}, ...]
    families:    {exhaustive: bool, list: [{name, points}, ...]}
    options:     {max_degree, primes, seed, order}
    commands:    [validate | gsca | certify-regular | hilbert | growth |
                  normalizing | base-point-free | conditions | ci-verdict]

Exactly one of ``matrices`` and ``relations`` is required.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import yaml

from .coeff import QQ, QQ_q, CoefficientError, Field, field_by_name, format_scalar
from .expr import ExpressionParseError, parse_expression
from .freealg import MonomialOrder
from .geometry import ParametricPointFamily
from .conditions import FamilySpec, SkewModel
from .skew import DiagonalNotOne, MuAxiomViolation, MuData, MuSymMatrix, NotMuSymmetric, validate_mu

COMMANDS = (
    "validate",
    "gsca",
    "hilbert",
    "growth",
    "normalizing",
    "base-point-free",
    "certify-regular",
    "conditions",
    "ci-verdict",
)
AMBIENTS = ("gsca", "skew", "general")
_TOP_KEYS = {
    "name", "field", "q", "generators", "n", "mu", "ambient", "matrices",
    "relations", "quadrics", "sequences", "families", "options", "commands",
}
_OPTION_KEYS = {"max_degree", "primes", "seed", "order"}


class SchemaError(ValueError):
    def __init__(self, message: str, path: tuple = (), line: int | None = None, column: int | None = None):
        self.path, self.line, self.column = path, line, column
        super().__init__(_located(message, path, line, column))


def _located(message, path, line, column) -> str:
    where = format_path(path)
    pos = f"line {line}, column {column}: " if line is not None else ""
    return f"{pos}{where + ': ' if where else ''}{message}"


def format_path(path: tuple) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


class LocatedError(ValueError):
    """An expression or mu error tagged with its manifest location."""

    def __init__(self, error: Exception, path: tuple, line=None, column=None):
        self.error, self.path, self.line, self.column = error, path, line, column
        super().__init__(_located(f"{type(error).__name__}: {error}", path, line, column))


@dataclass(frozen=True)
class SequenceSpec:
    name: str
    elements: tuple
    skew_model: SkewModel | None = None


@dataclass(frozen=True)
class Options:
    max_degree: int | None = None
    primes: tuple | None = None
    seed: int = 0
    order: tuple | None = None


@dataclass(frozen=True)
class Manifest:
    name: str
    field_name: str
    q_value: Fraction | None
    names: tuple
    mu: MuData
    ambient: str
    matrices: tuple | None
    relations: tuple | None
    quadrics: tuple | None
    sequences: tuple
    families: tuple
    families_exhaustive: bool
    options: Options
    commands: tuple
    source: str = field(default="", compare=False)

    @property
    def field(self) -> Field:
        return QQ if self.q_value is not None else field_by_name(self.field_name)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def route(self) -> str:
        return "gsca" if self.matrices is not None else "relations"

    def order(self) -> MonomialOrder | None:
        if self.options.order is None:
            return None
        return MonomialOrder(tuple(self.names.index(x) for x in self.options.order))


# -- location lookup ------------------------------------------------------------


def _node_at(node, path):
    for key in path:
        if isinstance(node, yaml.MappingNode):
            nxt = None
            for k, v in node.value:
                if k.value == key:
                    nxt = v
                    break
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            nxt = node.value[key]
        else:
            nxt = None
        if nxt is None:
            break
        node = nxt
    return node


class _Ctx:
    def __init__(self, text: str):
        try:
            self.root = yaml.compose(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            raise SchemaError(
                f"not valid YAML: {getattr(exc, 'problem', exc)}",
                line=mark.line + 1 if mark else None,
                column=mark.column + 1 if mark else None,
            ) from None

    def pos(self, path):
        if self.root is None:
            return None, None
        node = _node_at(self.root, path)
        return node.start_mark.line + 1, node.start_mark.column + 1

    def fail(self, message, path=()):
        raise SchemaError(message, tuple(path), *self.pos(path))

    def wrap(self, error, path):
        raise LocatedError(error, tuple(path), *self.pos(path)) from error


# -- parsing ----------------------------------------------------------------------


def parse_manifest(text: str) -> Manifest:
    ctx = _Ctx(text)
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        ctx.fail("manifest must be a mapping")
    unknown = sorted(set(data) - _TOP_KEYS)
    if unknown:
        ctx.fail(f"unknown key {unknown[0]!r}", (unknown[0],))

    name = str(data.get("name", ""))
    field_name = data.get("field", "Q")
    try:
        field_by_name(str(field_name))
    except CoefficientError as exc:
        ctx.fail(str(exc), ("field",))
    q_value = None
    if "q" in data:
        if field_by_name(str(field_name)) is not QQ_q:
            ctx.fail("q may only be specialized when field is Q(q)", ("q",))
        q_value = _rational(ctx, data["q"], ("q",))
    fld = QQ if q_value is not None else field_by_name(str(field_name))

    names = data.get("generators")
    if not isinstance(names, list) or not names or not all(isinstance(x, str) for x in names):
        ctx.fail("generators must be a non-empty list of names", ("generators",))
    if len(set(names)) != len(names):
        ctx.fail("generator names must be distinct", ("generators",))
    if "q" in names:
        ctx.fail("'q' is reserved for the field parameter", ("generators",))
    n = len(names)
    if "n" in data and data["n"] != n:
        ctx.fail(f"n = {data['n']} but {n} generators are declared", ("n",))
    gens = {x: i for i, x in enumerate(names)}

    def scalar(raw, path):
        if isinstance(raw, bool) or not isinstance(raw, (int, str)):
            ctx.fail("scalars must be integers or expression strings", path)
        try:
            return parse_expression(str(raw), fld, None, q_value)
        except ExpressionParseError as exc:
            ctx.wrap(exc, path)

    def poly(raw, path, table=gens, label="expression"):
        if not isinstance(raw, (str, int)) or isinstance(raw, bool):
            ctx.fail(f"{label} must be a string", path)
        try:
            f = parse_expression(str(raw), fld, table, q_value)
        except ExpressionParseError as exc:
            ctx.wrap(exc, path)
        if not f:
            ctx.wrap(ExpressionParseError("expression is zero", str(raw)), path)
        if not f.is_homogeneous():
            ctx.wrap(ExpressionParseError("expression is not homogeneous (homogeneity)", str(raw)), path)
        if f.degree < 1:
            ctx.wrap(ExpressionParseError("expression must have positive degree", str(raw)), path)
        return f

    def matrix(raw, path):
        if not isinstance(raw, list) or len(raw) != n or any(not isinstance(r, list) or len(r) != n for r in raw):
            ctx.fail(f"expected an {n} x {n} matrix", path)
        return [[scalar(x, path + (i, j)) for j, x in enumerate(row)] for i, row in enumerate(raw)]

    def mu_of(raw, path):
        if raw is None:
            return validate_mu([[1] * n for _ in range(n)], fld)
        entries = matrix(raw, path)
        try:
            return validate_mu(entries, fld)
        except MuAxiomViolation as exc:
            ctx.wrap(exc, path + (exc.i, exc.j))
        except DiagonalNotOne as exc:
            ctx.wrap(exc, path)

    mu = mu_of(data.get("mu"), ("mu",))

    ambient = data.get("ambient", "gsca" if "matrices" in data else "general")
    if ambient not in AMBIENTS:
        ctx.fail(f"ambient must be one of {', '.join(AMBIENTS)}", ("ambient",))

    has_m, has_r = "matrices" in data, "relations" in data
    if has_m == has_r:
        ctx.fail("exactly one of 'matrices' and 'relations' must be given")
    matrices = relations = None
    if has_m:
        raw = data["matrices"]
        if not isinstance(raw, list) or len(raw) != n:
            ctx.fail(f"expected {n} matrices", ("matrices",))
        mats = []
        for k, m in enumerate(raw):
            entries = matrix(m, ("matrices", k))
            try:
                mats.append(MuSymMatrix(tuple(map(tuple, entries)), mu))
            except NotMuSymmetric as exc:
                ctx.wrap(exc, ("matrices", k))
        matrices = tuple(mats)
    else:
        raw = data["relations"]
        if not isinstance(raw, list) or not raw:
            ctx.fail("relations must be a non-empty list", ("relations",))
        relations = tuple(poly(r, ("relations", i)) for i, r in enumerate(raw))

    quadrics = None
    if "quadrics" in data:
        raw = data["quadrics"]
        ztable = {f"z{i + 1}": i for i in range(n)}
        if not isinstance(raw, list):
            ctx.fail("quadrics must be a list", ("quadrics",))
        quadrics = tuple(poly(r, ("quadrics", i), ztable, "quadric") for i, r in enumerate(raw))
        for i, qd in enumerate(quadrics):
            if qd.degree != 2:
                ctx.fail("quadrics must have degree 2", ("quadrics", i))

    sequences = []
    raw_seqs = data.get("sequences", [])
    if not isinstance(raw_seqs, list):
        ctx.fail("sequences must be a list", ("sequences",))
    for s, entry in enumerate(raw_seqs):
        path = ("sequences", s)
        if not isinstance(entry, dict) or "elements" not in entry:
            ctx.fail("each sequence needs 'elements'", path)
        extra = sorted(set(entry) - {"name", "elements", "skew_model"})
        if extra:
            ctx.fail(f"unknown key {extra[0]!r}", path + (extra[0],))
        elems = entry["elements"]
        if not isinstance(elems, list) or not elems:
            ctx.fail("elements must be a non-empty list", path + ("elements",))
        F = tuple(poly(e, path + ("elements", i)) for i, e in enumerate(elems))
        model = None
        if "skew_model" in entry:
            sm = entry["skew_model"]
            if not isinstance(sm, dict) or set(sm) != {"mu", "elements"}:
                ctx.fail("skew_model needs exactly 'mu' and 'elements'", path + ("skew_model",))
            smu = mu_of(sm["mu"], path + ("skew_model", "mu"))
            G = tuple(poly(e, path + ("skew_model", "elements", i)) for i, e in enumerate(sm["elements"]))
            model = SkewModel(smu, G)
        sequences.append(SequenceSpec(str(entry.get("name", f"F{s + 1}")), F, model))

    families: list = []
    exhaustive = False
    if "families" in data:
        fam = data["families"]
        if not isinstance(fam, dict) or "list" not in fam:
            ctx.fail("families needs 'list' (and optionally 'exhaustive')", ("families",))
        exhaustive = fam.get("exhaustive", False)
        if not isinstance(exhaustive, bool):
            ctx.fail("exhaustive must be true or false", ("families", "exhaustive"))
        for k, item in enumerate(fam["list"]):
            path = ("families", "list", k)
            if not isinstance(item, dict) or "points" not in item:
                ctx.fail("each family needs 'points'", path)
            try:
                pf = ParametricPointFamily.parse(item["points"], fld, q_value)
            except (ExpressionParseError, ValueError) as exc:
                ctx.wrap(exc, path + ("points",))
            if pf.dim != n:
                ctx.fail(f"family points must have {n} coordinates", path + ("points",))
            families.append(FamilySpec(pf, str(item.get("name", f"family{k + 1}"))))

    opts = data.get("options", {}) or {}
    if not isinstance(opts, dict):
        ctx.fail("options must be a mapping", ("options",))
    extra = sorted(set(opts) - _OPTION_KEYS)
    if extra:
        ctx.fail(f"unknown option {extra[0]!r}", ("options", extra[0]))
    D = opts.get("max_degree")
    if D is not None and (not isinstance(D, int) or isinstance(D, bool) or D < 1):
        ctx.fail("max_degree must be a positive integer", ("options", "max_degree"))
    primes = opts.get("primes")
    if primes is not None:
        if not isinstance(primes, list) or not all(isinstance(p, int) for p in primes):
            ctx.fail("primes must be a list of integers", ("options", "primes"))
        primes = tuple(primes)
    seed = opts.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        ctx.fail("seed must be an integer", ("options", "seed"))
    order = opts.get("order")
    if order is not None:
        if not isinstance(order, list) or sorted(order) != sorted(names):
            ctx.fail("order must list every generator exactly once", ("options", "order"))
        order = tuple(order)

    commands = data.get("commands", list(COMMANDS))
    if not isinstance(commands, list):
        ctx.fail("commands must be a list", ("commands",))
    for i, c in enumerate(commands):
        if c not in COMMANDS:
            ctx.fail(f"unknown command {c!r}", ("commands", i))

    return Manifest(
        name=name,
        field_name=str(field_name),
        q_value=q_value,
        names=tuple(names),
        mu=mu,
        ambient=ambient,
        matrices=matrices,
        relations=relations,
        quadrics=quadrics,
        sequences=tuple(sequences),
        families=tuple(families),
        families_exhaustive=exhaustive,
        options=Options(D, primes, seed, order),
        commands=tuple(commands),
        source=text,
    )


def _rational(ctx, raw, path) -> Fraction:
    try:
        value = parse_expression(str(raw), QQ)
    except ExpressionParseError as exc:
        ctx.wrap(exc, path)
    return Fraction(value)


# -- serialization ------------------------------------------------------------------


def _scalar_text(c):
    text = format_scalar(c)
    return int(text) if text.lstrip("-").isdigit() else text


def _matrix_data(rows):
    return [[_scalar_text(x) for x in row] for row in rows]


def serialize_manifest(m: Manifest) -> str:
    """YAML text that parses back to an equal manifest."""
    out: dict[str, Any] = {"name": m.name, "field": m.field_name}
    if m.q_value is not None:
        out["q"] = _scalar_text(m.q_value)
    out["generators"] = list(m.names)
    out["mu"] = _matrix_data(m.mu.mu)
    out["ambient"] = m.ambient
    if m.matrices is not None:
        out["matrices"] = [_matrix_data(M.entries) for M in m.matrices]
    else:
        out["relations"] = [r.format(m.names) for r in m.relations]
    if m.quadrics is not None:
        z = [f"z{i + 1}" for i in range(m.n)]
        out["quadrics"] = [qd.format(z) for qd in m.quadrics]
    if m.sequences:
        seqs = []
        for s in m.sequences:
            entry: dict[str, Any] = {"name": s.name, "elements": [f.format(m.names) for f in s.elements]}
            if s.skew_model is not None:
                entry["skew_model"] = {
                    "mu": _matrix_data(s.skew_model.mu.mu),
                    "elements": [g.format(m.names) for g in s.skew_model.G],
                }
            seqs.append(entry)
        out["sequences"] = seqs
    if m.families:
        out["families"] = {
            "exhaustive": m.families_exhaustive,
            "list": [{"name": f.name, "points": f.family.format()} for f in m.families],
        }
    opts: dict[str, Any] = {"seed": m.options.seed}
    if m.options.max_degree is not None:
        opts["max_degree"] = m.options.max_degree
    if m.options.primes is not None:
        opts["primes"] = list(m.options.primes)
    if m.options.order is not None:
        opts["order"] = list(m.options.order)
    out["options"] = opts
    out["commands"] = list(m.commands)
    return yaml.safe_dump(out, sort_keys=False, allow_unicode=True)
