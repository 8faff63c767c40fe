"""Command-line front end and certificate-document handling.

Map definitions are plain text: ``ambient; variables; components`` with exact
rational literals (``p/q``), ``+ - * ^``, and parentheses.  Certificate
documents are canonical JSON (sorted keys, every exact integer or rational a
decimal string, interval endpoints exact dyadics), carry a content digest,
and are re-checked by the ``verify`` subcommand without re-running any
search: only polynomial identities, valuation identities, and interval
exclusions are recomputed.

Exit codes: 0 success, 2 inconclusive, 1 error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .exact_core import MultiPoly, RealEnclosure
from .dynamics import (
    ResourceLimitError,
    SelfMap,
    degree_sequence,
    delta_estimate,
    is_stable_upto,
)
from .heights import AffPoint, AlgebraicNumber, ProjPoint, schanuel_ratio
from .canonical import (
    MorphismCertificate,
    NotAMorphism,
    TruncatedOrbitError,
    alpha_estimate,
    canonical_height,
    certify_morphism,
)
from .certify import (
    DisjointnessCertificate,
    HeightRatioContext,
    MaximalityCertificate,
    PrimeDegreeContext,
    family_builder,
    verify_disjointness,
    verify_maximality,
)
from . import elliptic as ec
from . import quad_affine as qa

SCHEMA_VERSION = "1"


# ---------------------------------------------------------------------------
# expression parsing
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            start_col = col
            while i < n and text[i].isdigit():
                i += 1
                col += 1
            if i < n and text[i] == "/" and i + 1 < n and text[i + 1].isdigit():
                i += 1
                col += 1
                while i < n and text[i].isdigit():
                    i += 1
                    col += 1
            tokens.append(("num", text[start:i], line, start_col))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            start_col = col
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            tokens.append(("name", text[start:i], line, start_col))
            continue
        if ch in "+-*^()":
            tokens.append((ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(("end", "", line, col))
    return tokens


class _ExprParser:
    """Recursive-descent parser for exact polynomial expressions."""

    def __init__(self, text: str, variables: tuple):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2], tok[3])
        self.pos += 1
        return tok

    def parse(self) -> MultiPoly:
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2], tok[3])
        return out

    def expr(self) -> MultiPoly:
        if self.peek()[0] == "-":
            self.take()
            node = -self.term()
        else:
            node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def term(self) -> MultiPoly:
        node = self.factor()
        while self.peek()[0] == "*":
            self.take()
            node = node * self.factor()
        return node

    def factor(self) -> MultiPoly:
        if self.peek()[0] == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("num")
            if "/" in tok[1]:
                raise ParseError("exponent must be an integer", tok[2], tok[3])
            return base ** int(tok[1])
        return base

    def atom(self) -> MultiPoly:
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return MultiPoly.constant(self.variables, Fraction(tok[1]))
        if tok[0] == "name":
            self.take()
            if tok[1] not in self.variables:
                raise ParseError(f"unknown variable {tok[1]!r}", tok[2], tok[3])
            return MultiPoly.variable(self.variables, tok[1])
        if tok[0] == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2], tok[3])


def parse_polynomial(text: str, variables: tuple) -> MultiPoly:
    """Exact polynomial from an expression string over the given variables."""
    return _ExprParser(text, tuple(variables)).parse()


# ---------------------------------------------------------------------------
# map definitions
# ---------------------------------------------------------------------------

@dataclass
class MapDefinition:
    kind: str            # "projective" | "affine"
    dim: int
    variables: tuple
    components: tuple    # MultiPoly
    label: str | None = None

    def to_selfmap(self) -> SelfMap:
        if self.kind == "projective":
            return SelfMap.projective(list(self.components))
        return SelfMap.affine(list(self.components))

    def format(self) -> str:
        amb = ("P" if self.kind == "projective" else "A") + str(self.dim)
        if (self.kind == "projective" and self.dim > 2) or \
                (self.kind == "affine" and self.dim > 2):
            amb = ("PN:" if self.kind == "projective" else "AN:") + str(self.dim)
        comps = ", ".join(str(c) for c in self.components)
        return f"{amb}; {', '.join(self.variables)}; {comps}"

    def __eq__(self, other):
        return (isinstance(other, MapDefinition)
                and (self.kind, self.dim, self.variables, self.components)
                == (other.kind, other.dim, other.variables, other.components))


def _parse_ambient(token: str) -> tuple[str, int]:
    t = token.strip()
    if t in ("P1", "P2"):
        return "projective", int(t[1])
    if t in ("A1", "A2"):
        return "affine", int(t[1])
    if t.startswith("PN:"):
        return "projective", int(t[3:])
    if t.startswith("AN:"):
        return "affine", int(t[3:])
    raise ParseError(f"unknown ambient {t!r} (use P1, P2, PN:n, A2, AN:n)", 1, 1)


def parse_map(text: str) -> MapDefinition:
    """Parse 'ambient; variables; components' with exact coefficients."""
    body = "\n".join(line for line in text.splitlines()
                     if not line.strip().startswith("#"))
    parts = body.split(";")
    if len(parts) != 3:
        raise ParseError("definition needs 'ambient; variables; components'", 1, 1)
    kind, dim = _parse_ambient(parts[0])
    variables = tuple(v.strip() for v in parts[1].split(",") if v.strip())
    expected_vars = dim + 1 if kind == "projective" else dim
    if len(variables) != expected_vars:
        raise ParseError(
            f"{kind} dimension {dim} needs {expected_vars} variables, "
            f"got {len(variables)}", 1, 1)
    comp_sources = _split_components(parts[2])
    if len(comp_sources) != expected_vars:
        raise ParseError(
            f"expected {expected_vars} components, got {len(comp_sources)}", 1, 1)
    components = []
    for idx, src in enumerate(comp_sources):
        poly = parse_polynomial(src, variables)
        components.append(poly)
    if kind == "projective":
        degs = {c.total_degree() for c in components if not c.is_zero()}
        for idx, c in enumerate(components):
            if not c.is_homogeneous():
                raise ParseError(f"component {idx + 1} is not homogeneous", 1, 1)
        if len(degs) > 1:
            raise ParseError("projective components must share one degree", 1, 1)
    return MapDefinition(kind=kind, dim=dim, variables=variables,
                         components=tuple(components))


def _split_components(text: str) -> list:
    """Split on commas at parenthesis depth zero."""
    out = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur and "".join(cur).strip():
        out.append("".join(cur))
    return [s.strip() for s in out]


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------

def _to_jsonable(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return str(Fraction(value))  # exact dyadic
    if isinstance(value, str):
        return value
    if isinstance(value, RealEnclosure):
        return {"lo": str(Fraction(value.lo)), "hi": str(Fraction(value.hi))}
    if isinstance(value, ProjPoint):
        return {"type": "projective", "coords": [str(c) for c in value.coords]}
    if isinstance(value, AffPoint):
        return {"type": "affine", "coords": [str(c) for c in value.coords]}
    if isinstance(value, AlgebraicNumber):
        coeffs = [0] * (value.degree + 1)
        for (e,), c in value.minpoly.terms.items():
            coeffs[e] = int(c)
        return {
            "type": "algebraic",
            "minpoly": [str(c) for c in coeffs],
            "isolation": [str(value.isolation[0]), str(value.isolation[1])],
            "eisenstein": str(value.eisenstein_prime or 0),
        }
    if isinstance(value, MultiPoly):
        return {"variables": list(value.variables),
                "terms": sorted([[list(e), str(c)] for e, c in value.terms.items()])}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    raise TypeError(f"cannot serialize {type(value)}")


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _digest(subject, certificates) -> str:
    body = canonical_json({"subject": subject, "certificates": certificates})
    return hashlib.sha256(body.encode("utf-8")).hexdigest()


def make_document(subject: dict, certificates: list, configuration: dict) -> dict:
    subject = _to_jsonable(subject)
    certificates = _to_jsonable(certificates)
    return {
        "schema_version": SCHEMA_VERSION,
        "subject": subject,
        "certificates": certificates,
        "reproduction": {
            "tool": "arithdyn",
            "version": __version__,
            "configuration": _to_jsonable(configuration),
            "digest": _digest(subject, certificates),
        },
    }


def write_document(doc: dict, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc))
        fh.write("\n")


# ---------------------------------------------------------------------------
# document assembly
# ---------------------------------------------------------------------------

def _disjointness_entry(pair, cert: DisjointnessCertificate) -> dict:
    return {
        "kind": "disjointness",
        "pair": [str(pair[0]), str(pair[1])],
        "scheme": cert.scheme,
        "variant": cert.variant,
        "payload": cert.payload,
    }


def _maximality_entry(index: int, cert: MaximalityCertificate) -> dict:
    return {
        "kind": "maximality",
        "index": str(index),
        "maximality_kind": cert.kind,
        "payload": cert.payload,
    }


def family_document(map_text: str, family, configuration: dict) -> dict:
    subject = {
        "type": "map-family",
        "map": map_text,
        "scheme": family.scheme,
        "points": family.points,
        "avoid": family.avoided,
        "complete": family.complete,
    }
    certs = []
    for i, m in enumerate(family.maximality):
        certs.append(_maximality_entry(i, m))
    for pair in sorted(family.disjointness):
        certs.append(_disjointness_entry(pair, family.disjointness[pair]))
    return make_document(subject, certs, configuration)


def curve_family_document(a, b, family, configuration: dict) -> dict:
    subject = {
        "type": "curve-family",
        "curve_a": Fraction(a),
        "curve_b": Fraction(b),
        "scheme": family.scheme,
        "points": [_ecpoint_json(P) for P in family.points],
        "complete": family.complete,
    }
    certs = []
    for i, m in enumerate(family.maximality):
        certs.append(_maximality_entry(i, m))
    for pair in sorted(family.disjointness):
        certs.append(_disjointness_entry(pair, family.disjointness[pair]))
    return make_document(subject, certs, configuration)


def _ecpoint_json(P) -> dict:
    if P.infinity:
        return {"type": "ec-point", "infinity": True}
    return {"type": "ec-point", "x": str(P.x), "y": str(P.y)}


def height_document(map_text: str, point, value, configuration: dict) -> dict:
    cert = value.certificate
    subject = {
        "type": "canonical-height",
        "map": map_text,
        "point": point,
        "depth": value.depth,
        "value": value.value,
        "orbit_height": value.orbit_height,
    }
    certs = [{
        "kind": "morphism",
        "exponent": cert.exponent,
        "scalars": cert.scalars,
        "cofactors": cert.cofactors,
        "coeff_sum_bound": cert.coeff_sum_bound,
        "lower_bound_factor": cert.lower_bound_factor,
    }]
    return make_document(subject, certs, configuration)


# ---------------------------------------------------------------------------
# document verification (no searches)
# ---------------------------------------------------------------------------

def _payload_raw(entry: dict) -> dict:
    return entry["payload"]


def verify_document(doc: dict) -> list:
    """Re-check a certificate document; returns a list of problems."""
    issues = []
    if doc.get("schema_version") != SCHEMA_VERSION:
        issues.append("unknown schema version")
        return issues
    repro = doc.get("reproduction", {})
    expected = _digest(doc.get("subject"), doc.get("certificates"))
    if repro.get("digest") != expected:
        issues.append("content digest mismatch: document was modified")
        return issues

    subject_json = doc["subject"]
    subject: dict = {}
    stype = subject_json.get("type")
    points = None
    if stype in ("map-family", "canonical-height"):
        try:
            definition = parse_map(subject_json["map"])
            m = definition.to_selfmap()
            subject["map"] = m
            proj = m.homogenization() if m.is_affine else m
            subject["map_degree"] = proj.degree
        except ParseError as exc:
            issues.append(f"subject map does not parse: {exc}")
            return issues
    if stype == "curve-family":
        try:
            E = ec.EllipticCurve(Fraction(subject_json["curve_a"]),
                                 Fraction(subject_json["curve_b"]))
            subject["map_degree"] = 4
            pts = []
            for pj in subject_json["points"]:
                if pj.get("infinity"):
                    pts.append(E.infinity())
                else:
                    pts.append(E.point(Fraction(pj["x"]), Fraction(pj["y"])))
            points = pts
        except (ValueError, KeyError) as exc:
            issues.append(f"curve subject invalid: {exc}")
            return issues

    if stype == "map-family":
        # points must avoid the recorded avoidance polynomials exactly
        avoid = [_poly_from_json(pj) for pj in subject_json.get("avoid", [])]
        for pj in subject_json.get("points", []):
            pt = _point_from_json(pj)
            if pt is None:
                continue
            for g in avoid:
                coords = pt.coords
                values = {name: Fraction(c) for name, c in zip(g.variables, coords)}
                if g.evaluate(values) == 0:
                    issues.append(f"point {pj} lies on an avoidance polynomial")

    for entry in doc.get("certificates", []):
        kind = entry.get("kind")
        if kind == "disjointness":
            cert = DisjointnessCertificate(
                scheme=entry["scheme"], variant=entry["variant"],
                payload=_payload_raw(entry))
            for issue in verify_disjointness(cert, subject):
                issues.append(f"disjointness {entry.get('pair')}: {issue}")
        elif kind == "maximality":
            cert = MaximalityCertificate(
                kind=entry["maximality_kind"], payload=_payload_raw(entry))
            for issue in verify_maximality(cert, subject):
                issues.append(f"maximality {entry.get('index')}: {issue}")
        elif kind == "morphism":
            issues.extend(_verify_morphism_entry(entry, subject))
        else:
            issues.append(f"unknown certificate kind {kind}")
    return issues


def _poly_from_json(pj) -> MultiPoly:
    variables = tuple(pj["variables"])
    terms = {tuple(int(x) for x in e): Fraction(c) for e, c in pj["terms"]}
    return MultiPoly(variables, terms)


def _point_from_json(pj):
    if pj.get("type") == "projective":
        return ProjPoint([Fraction(c) for c in pj["coords"]])
    if pj.get("type") == "affine":
        return AffPoint([Fraction(c) for c in pj["coords"]])
    return None


def _verify_morphism_entry(entry: dict, subject: dict) -> list:
    issues = []
    m = subject.get("map")
    if m is None:
        return ["morphism certificate without a subject map"]
    proj = m.homogenization() if m.is_affine else m
    comps = proj.components
    variables = comps[0].variables
    e = int(entry["exponent"])
    scalars = [Fraction(s) for s in entry["scalars"]]
    rows = entry["cofactors"]
    if len(rows) != len(comps):
        return ["cofactor row count mismatch"]
    for i, (row, r) in enumerate(zip(rows, scalars)):
        if r == 0:
            issues.append("zero scalar in morphism certificate")
            continue
        total = MultiPoly.zero(variables)
        for gj, comp in zip(row, comps):
            total = total + _poly_from_json(gj) * comp
        target = (MultiPoly.variable(variables, variables[i]) ** e).scale(r)
        if total != target:
            issues.append(f"cofactor identity fails for coordinate {i}")
    return issues


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _load_map(path: str) -> tuple[str, SelfMap]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return text.strip(), parse_map(text).to_selfmap()


def _load_avoid(path: str | None, variables: tuple) -> list:
    if not path:
        return []
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            out.append(parse_polynomial(line, variables))
    return out


def _parse_point(text: str, m: SelfMap):
    coords = [Fraction(c.strip()) for c in text.split(",")]
    if m.is_affine:
        if len(coords) == m.dim:
            return AffPoint(coords).to_projective()
        if len(coords) == m.dim + 1:
            return ProjPoint(coords)
        raise ValueError(f"point needs {m.dim} (affine) or {m.dim + 1} coordinates")
    if len(coords) != m.dim + 1:
        raise ValueError(f"point needs {m.dim + 1} coordinates")
    return ProjPoint(coords)


def _cmd_delta(args) -> int:
    _, m = _load_map(args.map)
    try:
        est = delta_estimate(m, args.iters)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"degrees: {list(est.sequence)}")
    print(f"upper bound (certified): [{est.upper.lo:.12g}, {est.upper.hi:.12g}]")
    print(f"ratio heuristic (not rigorous): {est.heuristic.midpoint():.12g}")
    return 0


def _cmd_stable(args) -> int:
    _, m = _load_map(args.map)
    stable, first_drop = is_stable_upto(m, args.iters)
    if stable:
        print(f"stable through {args.iters} iterates")
    else:
        print(f"not stable: first degree drop at iterate {first_drop}")
    return 0


def _cmd_canht(args) -> int:
    text, m = _load_map(args.map)
    cert = certify_morphism(m)
    if isinstance(cert, NotAMorphism):
        print(f"error: not a morphism: {cert.reason}", file=sys.stderr)
        return 1
    x = _parse_point(args.point, m)
    value = canonical_height(cert, x, target_width=args.width)
    print(f"canonical height of {x}: [{value.value.lo:.15g}, {value.value.hi:.15g}]")
    print(f"depth: {value.depth}, width: {value.width():.3g}")
    if args.out:
        doc = height_document(text, x, value,
                              {"width": str(args.width), "point": args.point})
        write_document(doc, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_alpha(args) -> int:
    _, m = _load_map(args.map)
    proj = m.homogenization() if m.is_affine else m
    cert = certify_morphism(proj)
    cert = cert if isinstance(cert, MorphismCertificate) else None
    x = _parse_point(args.point, m)
    try:
        est = alpha_estimate(m, x, args.iters, cert=cert)
    except TruncatedOrbitError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    if est.exact_value is not None:
        print(f"growth rate: exactly {est.exact_value} "
              "(positive canonical height)")
    print(f"bracket: [{est.lower.lo:.9g}, {est.upper.hi:.9g}]")
    print(f"last height ratio: {est.ratio.midpoint():.9g}")
    return 0


def _cmd_count(args) -> int:
    bounds = [Fraction(b) for b in str(args.bound).split(",")]
    print(f"{'T':>10} {'count':>12} {'count/T^(N+1)':>16}")
    for T in bounds:
        count, ratio = schanuel_ratio(args.dim, T)
        print(f"{str(T):>10} {count:>12} {float(ratio):>16.8f}")
    return 0


def _cmd_family(args) -> int:
    text, m = _load_map(args.map)
    proj = m.homogenization() if m.is_affine else m
    avoid = _load_avoid(args.avoid, proj.components[0].variables)
    cert = certify_morphism(proj)
    if isinstance(cert, NotAMorphism):
        print(f"error: not a morphism: {cert.reason}", file=sys.stderr)
        return 1
    if args.scheme == "height-ratio":
        ctx = HeightRatioContext(cert, width=args.width)
    elif args.scheme == "prime-degree":
        ctx = PrimeDegreeContext(proj, cert)
    else:
        print(f"error: unknown scheme {args.scheme}", file=sys.stderr)
        return 1
    fam = family_builder(ctx, args.size, avoid=avoid)
    for i, pt in enumerate(fam.points):
        print(f"point {i}: {pt}")
    print(f"pairwise certificates: {len(fam.disjointness)}")
    if args.out:
        doc = family_document(text, fam, {
            "scheme": args.scheme, "size": str(args.size),
            "width": str(args.width)})
        write_document(doc, args.out)
        print(f"wrote {args.out}")
    if not fam.complete:
        print("incomplete family (fuel exhausted)", file=sys.stderr)
        return 2
    return 0


def _cmd_elliptic(args) -> int:
    a, b = (Fraction(c.strip()) for c in args.curve.split(","))
    E = ec.EllipticCurve(a, b)
    if args.op == "nt-height":
        P = _parse_ec_point(E, args.point)
        v = ec.neron_tate_height(E, P, target_width=args.width)
        print(f"canonical height of {P}: [{v.value.lo:.12g}, {v.value.hi:.12g}]")
        return 0
    if args.op == "torsion":
        P = _parse_ec_point(E, args.point)
        out = ec.torsion_zero_locus_test(E, P)
        if isinstance(out, ec.TorsionResult):
            print(f"torsion point of order {out.order}")
            return 0
        if isinstance(out, ec.NontorsionResult):
            print(f"nontorsion: canonical height > 0 certified at depth "
                  f"{out.certificate.depth}")
            return 0
        print("undecided within budget", file=sys.stderr)
        return 2
    if args.op == "quadraticity":
        P = _parse_ec_point(E, args.point)
        rep = ec.quadraticity_check(E, P, args.mult, target_width=args.width)
        status = "consistent" if rep.consistent else "INCONSISTENT"
        print(f"h({args.mult}P) vs {args.mult}^2 h(P): {status}")
        return 0 if rep.consistent else 1
    if args.op == "family":
        P = _parse_ec_point(E, args.point)
        dyn = ec.ECDynamics(multiplier=args.mult, translation=E.infinity())
        fam = ec.translated_multiple_family(E, dyn, P, E.infinity(), args.size)
        for i, z in enumerate(fam.points):
            print(f"point {i}: {z}")
        if args.out:
            doc = curve_family_document(a, b, fam, {
                "multiplier": str(args.mult), "size": str(args.size)})
            write_document(doc, args.out)
            print(f"wrote {args.out}")
        return 0
    print(f"error: unknown elliptic op {args.op}", file=sys.stderr)
    return 1


def _parse_ec_point(E, text: str):
    if text.strip().upper() in ("O", "INF", "INFINITY"):
        return E.infinity()
    x, y = (Fraction(c.strip()) for c in text.split(","))
    return E.point(x, y)


def _cmd_quad(args) -> int:
    if args.op == "family":
        which, params = args.form.split(":")
        nf = qa.NormalFormQuadratic(which, tuple(Fraction(c) for c in params.split(",")))
        avoid = _load_avoid(args.avoid, ("x", "y"))
        fam = qa.quad_normal_family(nf, args.prime, args.size, avoid=avoid)
        for i, pt in enumerate(fam.points):
            print(f"point {i}: {pt}")
        if args.out:
            doc = family_document(
                f"A2; x,y; {', '.join(str(c) for c in nf.map().affine_components)}",
                fam, {"form": args.form, "prime": str(args.prime),
                      "size": str(args.size)})
            write_document(doc, args.out)
            print(f"wrote {args.out}")
        return 0

    _, m = _load_map(args.map)
    bd = qa.boundary_analyze(m)
    if args.op == "analyze":
        print(f"case: {bd.case}")
        print(f"H = {bd.H}")
        print(f"F0 = {bd.F0}, G0 = {bd.G0}")
        if bd.conjugation:
            print(f"conjugation applied: {bd.conjugation}")
        if bd.shape_parameter is not None:
            print(f"shape parameter: {bd.shape_parameter}")
        return 0
    if args.op == "fixed-points":
        fps = qa.fixed_points_at_infinity(bd)
        if fps is qa.EVERYTHING_FIXED:
            print("boundary map is the identity: every boundary point is fixed")
            return 0
        for fp in fps:
            if fp.point is not None:
                print(f"rational fixed point {fp.point} (multiplicity {fp.multiplicity})")
            else:
                print(f"fixed point of degree {fp.degree}: minpoly {fp.minpoly} "
                      f"(multiplicity {fp.multiplicity})")
        return 0
    if args.op == "attractor":
        coords = [Fraction(c) for c in args.point.split(",")]
        Q0 = ProjPoint(coords)
        box = qa.attractor_box(bd, Q0)
        print(f"attracting region at {Q0}: prime {box.prime}")
        print("self-test passed: 100 sampled members map inward with exact "
              f"level growth x{box.degree}")
        return 0
    if args.op == "growth":
        coords = [Fraction(c) for c in args.point.split(",")]
        P = AffPoint(coords)
        Q0 = ProjPoint([1, 0, 0])
        box = qa.attractor_box(bd, Q0)
        levels = qa.lambda_growth_report(box, P, args.iters)
        print(f"local height levels: {levels}")
        return 0
    print(f"error: unknown quad op {args.op}", file=sys.stderr)
    return 1


def _cmd_verify(args) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    issues = verify_document(doc)
    if issues:
        for issue in issues:
            print(f"FAIL: {issue}", file=sys.stderr)
        return 1
    print("all certificate re-checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="arithdyn",
        description="height growth, canonical heights, and orbit-disjointness "
                    "certificates for polynomial dynamics over the rationals")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("delta", help="degree sequence and growth-rate bounds")
    d.add_argument("--map", required=True)
    d.add_argument("--iters", type=int, default=8)
    d.set_defaults(func=_cmd_delta)

    s = sub.add_parser("stable", help="algebraic stability report")
    s.add_argument("--map", required=True)
    s.add_argument("--iters", type=int, default=6)
    s.set_defaults(func=_cmd_stable)

    ch = sub.add_parser("canht", help="canonical height of a point")
    ch.add_argument("--map", required=True)
    ch.add_argument("--point", required=True)
    ch.add_argument("--width", type=float, default=1e-10)
    ch.add_argument("--out")
    ch.set_defaults(func=_cmd_canht)

    al = sub.add_parser("alpha", help="orbit height-growth estimate")
    al.add_argument("--map", required=True)
    al.add_argument("--point", required=True)
    al.add_argument("--iters", type=int, default=12)
    al.set_defaults(func=_cmd_alpha)

    co = sub.add_parser("count", help="rational point counts by height")
    co.add_argument("--dim", type=int, default=1)
    co.add_argument("--bound", required=True,
                    help="height bound or comma-separated list")
    co.set_defaults(func=_cmd_count)

    fa = sub.add_parser("family", help="disjoint-orbit family with certificates")
    fa.add_argument("--map", required=True)
    fa.add_argument("--scheme", default="height-ratio",
                    choices=["height-ratio", "prime-degree"])
    fa.add_argument("--size", type=int, default=3)
    fa.add_argument("--width", type=float, default=1e-10)
    fa.add_argument("--avoid")
    fa.add_argument("--out")
    fa.set_defaults(func=_cmd_family)

    el = sub.add_parser("elliptic", help="elliptic-curve subtools")
    el.add_argument("--curve", required=True, help="a,b for y^2=x^3+ax+b")
    el.add_argument("--op", required=True,
                    choices=["nt-height", "torsion", "quadraticity", "family"])
    el.add_argument("--point", default="O")
    el.add_argument("--mult", type=int, default=2)
    el.add_argument("--size", type=int, default=3)
    el.add_argument("--width", type=float, default=1e-8)
    el.add_argument("--out")
    el.set_defaults(func=_cmd_elliptic)

    q = sub.add_parser("quad", help="plane-map boundary analysis pipeline")
    q.add_argument("--op", required=True,
                   choices=["analyze", "fixed-points", "attractor", "growth", "family"])
    q.add_argument("--map")
    q.add_argument("--form", help="normal form, e.g. xy-mix:1,1")
    q.add_argument("--point", default="1,0,0")
    q.add_argument("--prime", type=int, default=2)
    q.add_argument("--size", type=int, default=3)
    q.add_argument("--iters", type=int, default=3)
    q.add_argument("--avoid")
    q.add_argument("--out")
    q.set_defaults(func=_cmd_quad)

    v = sub.add_parser("verify", help="re-check a certificate document")
    v.add_argument("--in", dest="infile", required=True)
    v.set_defaults(func=_cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
