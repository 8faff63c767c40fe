"""Boundary analysis of affine plane maps and p-adic attractor machinery.

Writing the homogenization of a degree-d map of the affine plane as
[F + Z*F1 : G + Z*G1 : Z^d] with F, G the top-degree binary forms, the
common factor H = gcd(F, G) controls the behaviour on the line at infinity:
the reduced pair [F0 : G0] is a self-map of that line whose degree splits
the analysis into an expanding case, a collapsing case (detected by H(1,0)),
and a linear case with scaling or translation shape.

Around a rational fixed point on the boundary there is, at any prime where
all coefficients are units, an attracting region on which the local height
is multiplied by exactly the degree at every step.  Membership and growth
are exact valuation statements, which is what the emitted certificates
record.  Quadratic normal forms with irrational expansion rate get their
own family scheme: members sit on distinct valuation levels, and a collision
would force the ratio of two levels to be an integer power of a quadratic
irrational, hence 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact_core import (
    MultiPoly,
    poly_gcd,
    valuation,
)
from .dynamics import SelfMap, compose, dehomogenize
from .heights import AffPoint, ProjPoint
from .certify import (
    DisjointnessCertificate,
    FamilyResult,
    MaximalityCertificate,
    multiplier_avoiding_powers,
    padic_box_sampler,
)


class UnsupportedExtensionError(ValueError):
    """Raised for boundary fixed points that are not rational."""


EXPANDING_BOUNDARY = "expanding-boundary"          # deg F0 >= 2
COLLAPSING_UNSTABLE = "collapsing-unstable"        # deg F0 = 0, H(1,0) = 0
COLLAPSING_FIXED = "collapsing-fixed"              # deg F0 = 0, H(1,0) != 0
LINEAR_SCALING = "linear-boundary-scaling"         # phi = [aX : Y]
LINEAR_TRANSLATION = "linear-boundary-translation"  # phi = [X + bY : Y]
LINEAR_UNREDUCED = "linear-boundary-unreduced"


@dataclass
class BoundaryData:
    """Decomposition of the homogenization at the line at infinity."""

    map: SelfMap              # the analyzed affine map (after any conjugation)
    homogenized: SelfMap
    F: MultiPoly
    G: MultiPoly
    F1: MultiPoly
    G1: MultiPoly
    H: MultiPoly
    F0: MultiPoly
    G0: MultiPoly
    case: str
    conjugation: str | None = None
    shape_parameter: Fraction | None = None

    def roundtrip_check(self) -> bool:
        """First component = F + Z*F1 etc., against the representative whose
        last component is exactly Z^d (the direct homogenization)."""
        from .dynamics import homogenize
        hv = self.map.hom_var
        d = self.map.degree
        variables = self.F1.variables
        z = MultiPoly.variable(variables, hv)
        first = self.F.extend(variables)
        second = self.G.extend(variables)
        c0 = first + z * self.F1
        c1 = second + z * self.G1
        return (c0 == homogenize(self.map.affine_components[0], d, hv)
                and c1 == homogenize(self.map.affine_components[1], d, hv))


def _top_form(poly: MultiPoly, d: int) -> MultiPoly:
    """Degree-d part, as a binary form in the two affine variables."""
    return MultiPoly(poly.variables,
                     {e: c for e, c in poly.terms.items() if sum(e) == d})


def _swap_map(f: SelfMap) -> SelfMap:
    """Conjugation by the coordinate swap."""
    x, y = f.affine_components[0].variables
    swapped = []
    for comp in reversed(f.affine_components):
        swapped.append(MultiPoly(comp.variables,
                                 {(e[1], e[0]): c for e, c in comp.terms.items()}))
    return SelfMap.affine(swapped, hom_var=f.hom_var)


def _shear_map(f: SelfMap, c: Fraction) -> SelfMap:
    """Conjugation by sigma(x, y) = (x, y - c*x)."""
    variables = f.affine_components[0].variables
    x = MultiPoly.variable(variables, variables[0])
    y = MultiPoly.variable(variables, variables[1])
    bwd = {variables[0]: x, variables[1]: y + x.scale(c)}
    comps = [comp.substitute(bwd) for comp in f.affine_components]
    return SelfMap.affine([comps[0], comps[1] - comps[0].scale(c)],
                          hom_var=f.hom_var)


def boundary_analyze(f: SelfMap, allow_swap: bool = True) -> BoundaryData:
    """Decompose and classify the boundary behaviour of an affine plane map."""
    if not f.is_affine or f.dim != 2:
        raise ValueError("boundary analysis needs an affine map of the plane")
    d = f.degree
    if d < 2:
        raise ValueError("boundary analysis needs degree >= 2")

    conj = None
    F = _top_form(f.affine_components[0], d)
    if F.is_zero():
        if not allow_swap:
            raise ValueError("leading form of the first component vanishes "
                             "(rerun with allow_swap)")
        f = _swap_map(f)
        conj = "swap"
        F = _top_form(f.affine_components[0], d)
        if F.is_zero():
            raise ValueError("both leading forms vanish: map degree is wrong")

    G = _top_form(f.affine_components[1], d)
    H = poly_gcd(F, G) if not G.is_zero() else F.normalized()
    F0 = F.exact_div(H)
    G0 = G.exact_div(H) if not G.is_zero() else G

    shape_param = None
    if F0.total_degree() == 0 and not G0.is_zero():
        # make the second leading form vanish by a shear, as the collapsing
        # analysis assumes
        c = next(iter(G0.terms.values())) / next(iter(F0.terms.values()))
        f = _shear_map(f, c)
        conj = f"shear:{c}" if conj is None else f"{conj}+shear:{c}"
        F = _top_form(f.affine_components[0], d)
        G = _top_form(f.affine_components[1], d)
        H = poly_gcd(F, G) if not G.is_zero() else F.normalized()
        F0 = F.exact_div(H)
        G0 = G.exact_div(H) if not G.is_zero() else G

    deg0 = F0.total_degree()
    if deg0 >= 2:
        case = EXPANDING_BOUNDARY
    elif deg0 == 0:
        h_at = H.evaluate({H.variables[0]: Fraction(1), H.variables[1]: Fraction(0)})
        case = COLLAPSING_UNSTABLE if h_at == 0 else COLLAPSING_FIXED
    else:
        variables = F0.variables
        fX = F0.coefficient((1, 0))
        fY = F0.coefficient((0, 1))
        gX = G0.coefficient((1, 0))
        gY = G0.coefficient((0, 1))
        if gX == 0 and fY == 0 and fX != 0 and gY != 0:
            case = LINEAR_SCALING
            shape_param = fX / gY
        elif gX == 0 and gY != 0 and fX == gY and fY != 0:
            case = LINEAR_TRANSLATION
            shape_param = fY / fX
        else:
            case = LINEAR_UNREDUCED

    from .dynamics import homogenize
    hom = f.homogenization()
    hv = f.hom_var
    d = f.degree
    variables3 = hom.components[0].variables
    zpoly = MultiPoly.variable(variables3, hv)
    F_ext = F.extend(variables3)
    G_ext = G.extend(variables3)
    # decompose the direct homogenization, whose last component is Z^d with
    # coefficient +1 (the stored SelfMap tuple may carry a joint sign flip)
    direct0 = homogenize(f.affine_components[0], d, hv)
    direct1 = homogenize(f.affine_components[1], d, hv)
    F1 = (direct0 - F_ext).exact_div(zpoly)
    G1 = (direct1 - G_ext).exact_div(zpoly)

    return BoundaryData(map=f, homogenized=hom, F=F, G=G, F1=F1, G1=G1,
                        H=H, F0=F0, G0=G0, case=case, conjugation=conj,
                        shape_parameter=shape_param)


# ---------------------------------------------------------------------------
# fixed points on the line at infinity
# ---------------------------------------------------------------------------

class EverythingFixed:
    """Marker: the boundary map is the identity, every boundary point is fixed."""

    def __repr__(self):
        return "EVERYTHING_FIXED"


EVERYTHING_FIXED = EverythingFixed()


@dataclass
class BoundaryFixedPoint:
    point: ProjPoint | None      # rational case, with last coordinate 0
    minpoly: MultiPoly | None    # irrational case (affine chart t = X/Y)
    degree: int
    multiplicity: int


def fixed_points_at_infinity(bd: BoundaryData):
    """Fixed points of the boundary map [F0 : G0], with field degrees.

    Rational points come back as projective points on the boundary line;
    irrational ones as irreducible minimal polynomials with their degree
    (the field extension needed to see them).
    """
    if bd.case in (COLLAPSING_UNSTABLE, COLLAPSING_FIXED):
        raise ValueError("boundary map is constant; use the collapsing analysis")
    F0, G0 = bd.F0, bd.G0
    variables = F0.variables
    X = MultiPoly.variable(variables, variables[0])
    Y = MultiPoly.variable(variables, variables[1])
    Phi = F0 * Y - G0 * X
    if Phi.is_zero():
        return EVERYTHING_FIXED

    total = Phi.total_degree()
    out = []
    # multiplicity of [1:0] = drop of the dehomogenized degree
    chart = dehomogenize(Phi)  # t = X, at Y = 1
    drop = total - (chart.total_degree() if not chart.is_zero() else 0)
    if drop > 0:
        out.append(BoundaryFixedPoint(point=ProjPoint([1, 0, 0]), minpoly=None,
                                      degree=1, multiplicity=drop))

    import sympy
    t = sympy.Symbol("t")
    expr = 0
    for (e,), c in chart.terms.items():
        expr += sympy.Rational(c.numerator, c.denominator) * t ** e
    _, factors = sympy.factor_list(sympy.Poly(expr, t))
    for poly, mult in factors:
        p = sympy.Poly(poly, t)
        deg = p.degree()
        coeffs = [Fraction(str(c)) for c in reversed(p.all_coeffs())]
        if deg == 1:
            root = -coeffs[0] / coeffs[1]
            out.append(BoundaryFixedPoint(
                point=ProjPoint([root, 1, 0]), minpoly=None,
                degree=1, multiplicity=int(mult)))
        else:
            mp = MultiPoly(("t",), {(i,): c for i, c in enumerate(coeffs) if c})
            out.append(BoundaryFixedPoint(
                point=None, minpoly=mp.normalized(), degree=int(deg),
                multiplicity=int(mult)))
    out.sort(key=lambda fp: (fp.degree,
                             fp.point.coords if fp.point else (0,)))
    return out


# ---------------------------------------------------------------------------
# attracting p-adic regions
# ---------------------------------------------------------------------------

@dataclass
class AttractorBox:
    """Region where the local height at `prime` grows by exactly the degree.

    kind "dominant-first": conjugated coordinates put the fixed point at
    [1:0:0]; membership is |x1| > max(1, |x2|) at the prime.  kind
    "scale-region": membership is |x| > |y| > 1 with |y|^d > |x|^(d-1).
    All checks are exact valuation statements.
    """

    prime: int
    kind: str
    map: SelfMap              # conjugated map the growth law applies to
    degree: int
    fixed_point: ProjPoint | None = None
    conjugation: tuple | None = None   # 2x2 integer matrix rows, or None
    boundary_case: str | None = None

    def to_box_coords(self, P: AffPoint) -> AffPoint:
        if self.conjugation is None:
            return P
        (m00, m01), (m10, m11) = self.conjugation
        x, y = P.coords
        return AffPoint([m00 * x + m01 * y, m10 * x + m11 * y])

    def contains(self, P: AffPoint) -> bool:
        Q = self.to_box_coords(P)
        vx = valuation(Q.coords[0], self.prime) if Q.coords[0] != 0 else None
        vy = valuation(Q.coords[1], self.prime) if Q.coords[1] != 0 else None
        if self.kind == "dominant-first":
            if vx is None or vx >= 0:
                return False
            return vy is None or vy > vx
        # scale-region: |x| > |y| > 1 and |y|^d > |x|^(d-1)
        if vx is None or vy is None or vy >= 0 or vx >= vy:
            return False
        R = -vy
        S = -vx - R
        return S >= 1 and R > S * (self.degree - 1)

    def local_level(self, P: AffPoint) -> int:
        """lambda_p(P) / log p as an exact integer (assumes membership)."""
        Q = self.to_box_coords(P)
        worst = 0
        for c in Q.coords:
            if c == 0:
                continue
            v = valuation(c, self.prime)
            if isinstance(v, int) and -v > worst:
                worst = -v
        return worst


def _int_conjugation_to_origin(Q0: ProjPoint):
    """Unimodular change of boundary coordinates sending Q0 to [1:0:0]."""
    q0, q1, qz = Q0.coords
    if qz != 0:
        raise ValueError("fixed point must lie on the boundary line")
    g, u, v = _ext_gcd(q0, q1)
    if g != 1:
        raise AssertionError("canonical point coordinates are coprime")
    return ((u, v), (-q1, q0))


def _ext_gcd(a: int, b: int):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, u, v = _ext_gcd(b, a % b)
    return (g, v, u - (a // b) * v)


def _conjugate_affine(f: SelfMap, M) -> SelfMap:
    """M o f o M^-1 for a determinant-one integer matrix M."""
    (m00, m01), (m10, m11) = M
    variables = f.affine_components[0].variables
    x = MultiPoly.variable(variables, variables[0])
    y = MultiPoly.variable(variables, variables[1])
    det = m00 * m11 - m01 * m10
    if det not in (1, -1):
        raise ValueError("conjugation matrix must be unimodular")
    # inverse = adjugate / det
    i00, i01, i10, i11 = (Fraction(m11, det), Fraction(-m01, det),
                          Fraction(-m10, det), Fraction(m00, det))
    pre = {variables[0]: x.scale(i00) + y.scale(i01),
           variables[1]: x.scale(i10) + y.scale(i11)}
    comps = [c.substitute(pre) for c in f.affine_components]
    out = [comps[0].scale(m00) + comps[1].scale(m01),
           comps[0].scale(m10) + comps[1].scale(m11)]
    return SelfMap.affine(out, hom_var=f.hom_var)


def _coefficients_are_units(f: SelfMap, p: int) -> bool:
    for comp in f.affine_components:
        for c in comp.terms.values():
            if valuation(c, p) != 0:
                return False
    return True


def least_unit_prime(f: SelfMap, bound: int = 1000) -> int:
    p = 2
    while p <= bound:
        if _coefficients_are_units(f, p):
            return p
        from .exact_core import next_prime
        p = next_prime(p)
    raise RuntimeError(f"no admissible prime below {bound}")


def attractor_box(bd: BoundaryData, Q0, self_test: int = 100) -> AttractorBox:
    """Attracting region at a rational boundary fixed point.

    Conjugates the map by a unimodular change putting Q0 at [1:0:0], picks
    the least prime at which every coefficient is a unit, and self-tests the
    exact growth law on a deterministic sample of members.
    """
    if isinstance(Q0, BoundaryFixedPoint):
        if Q0.point is None:
            raise UnsupportedExtensionError(
                f"fixed point of degree {Q0.degree} needs a field extension; "
                "attractor regions are built at rational points only")
        Q0 = Q0.point
    f = bd.map
    hom = bd.homogenized
    img = hom.evaluate(Q0)
    if img != Q0:
        raise ValueError(f"{Q0} is not a fixed boundary point of the map")

    M = _int_conjugation_to_origin(Q0)
    g = f if M == ((1, 0), (0, 1)) else _conjugate_affine(f, M)

    # shape at the fixed point: the first component must realize the full
    # degree in its first variable
    d = g.degree
    lead = g.affine_components[0].coefficient((d, 0))
    if lead == 0:
        raise ValueError("conjugated map does not have the attracting shape")

    p = least_unit_prime(g)
    box = AttractorBox(prime=p, kind="dominant-first", map=g, degree=d,
                       fixed_point=Q0,
                       conjugation=None if M == ((1, 0), (0, 1)) else M,
                       boundary_case=bd.case)

    # exact self-test of invariance and growth on a sample grid
    tested = 0
    level = 1
    unit_idx = 0
    units = [u for u in range(1, 4 * self_test) if u % p]
    while tested < self_test:
        u = units[unit_idx % len(units)]
        P_box = AffPoint([Fraction(u, p ** level), Fraction(1 + (tested % 3))])
        img_aff = g.evaluate_affine(P_box)
        inner = AttractorBox(prime=p, kind="dominant-first", map=g, degree=d)
        if not inner.contains(P_box):
            raise AssertionError("sample point escaped the region")
        if not inner.contains(img_aff):
            raise AssertionError("region is not forward-invariant on samples")
        if inner.local_level(img_aff) != d * inner.local_level(P_box):
            raise AssertionError("exact growth law failed on a sample")
        tested += 1
        unit_idx += 1
        if tested % 10 == 0:
            level += 1
    return box


def scale_region_box(bd: BoundaryData) -> AttractorBox:
    """Scale region for the linear boundary cases."""
    if bd.case not in (LINEAR_SCALING, LINEAR_TRANSLATION):
        raise ValueError("scale regions apply to the linear boundary cases")
    p = least_unit_prime(bd.map)
    return AttractorBox(prime=p, kind="scale-region", map=bd.map,
                        degree=bd.map.degree, boundary_case=bd.case)


def lambda_growth_report(box: AttractorBox, P: AffPoint, n: int) -> list:
    """Exact local-height levels along the orbit: lambda_p(f^k P) = m_k log p.

    For dominant-first boxes the levels multiply by the degree at every step
    (asserted).  For scale regions the second coordinate obeys the growth
    law |y'| = |y|^d in the translation shape, and the ratio |x/y| is
    constant in the scaling shape (both asserted).
    """
    if n < 0:
        raise ValueError("depth must be >= 0")
    if not box.contains(P):
        raise ValueError(f"{P} is not in the attracting region")
    g = box.map
    p = box.prime
    d = box.degree
    Q = box.to_box_coords(P)
    levels = [box.local_level(P)]
    if Q.coords[0] != 0 and Q.coords[1] != 0:
        scale_invariant = valuation(Q.coords[0] / Q.coords[1], p)
    else:
        scale_invariant = None
    y_val = valuation(Q.coords[1], p) if Q.coords[1] != 0 else None
    cur = Q
    for k in range(1, n + 1):
        cur = g.evaluate_affine(cur)
        lvl = 0
        for c in cur.coords:
            if c != 0:
                v = valuation(c, p)
                lvl = max(lvl, -v)
        levels.append(lvl)
        if box.kind == "dominant-first":
            if lvl != d ** k * levels[0]:
                raise AssertionError("exact growth law violated along the orbit")
        else:
            vy = valuation(cur.coords[1], p) if cur.coords[1] != 0 else None
            if box.boundary_case == LINEAR_TRANSLATION:
                if y_val is not None and vy != d * y_val:
                    raise AssertionError("second-coordinate growth law violated")
            elif box.boundary_case == LINEAR_SCALING:
                if scale_invariant is not None and cur.coords[1] != 0:
                    r = valuation(cur.coords[0] / cur.coords[1], p)
                    if r != scale_invariant:
                        raise AssertionError("scale invariant drifted along the orbit")
            y_val = vy
    return levels


# ---------------------------------------------------------------------------
# quadratic normal forms
# ---------------------------------------------------------------------------

XY_MIX = "xy-mix"                    # (x, y) -> (y + c1, x*y + c2)
DELAYED_SQUARE = "delayed-square"    # (x, y) -> (y, x^2 + a*x + c)
SHEAR_DIFFERENCE = "shear-difference"  # (x, y) -> (a*y + c1, x*(x-y) + c2)

# minimal polynomial of the common irrational expansion rate of the mixing
# forms (the positive root of t^2 = t + 1)
_GOLDEN_MINPOLY = [-1, -1, 1]


@dataclass
class NormalFormQuadratic:
    """One of the three quadratic plane normal forms, with exact parameters."""

    which: str
    parameters: tuple

    def __post_init__(self):
        self.parameters = tuple(Fraction(c) for c in self.parameters)
        expected = {XY_MIX: 2, DELAYED_SQUARE: 2, SHEAR_DIFFERENCE: 3}
        if self.which not in expected:
            raise ValueError(f"unknown normal form {self.which}")
        if len(self.parameters) != expected[self.which]:
            raise ValueError(f"{self.which} takes {expected[self.which]} parameters")
        if self.which == SHEAR_DIFFERENCE and self.parameters[0] == 0:
            raise ValueError("shear-difference needs a nonzero first parameter")

    def map(self) -> SelfMap:
        V = ("x", "y")
        if self.which == XY_MIX:
            c1, c2 = self.parameters
            return SelfMap.affine([
                MultiPoly(V, {(0, 1): Fraction(1), (0, 0): c1}),
                MultiPoly(V, {(1, 1): Fraction(1), (0, 0): c2}),
            ])
        if self.which == DELAYED_SQUARE:
            a, c = self.parameters
            return SelfMap.affine([
                MultiPoly(V, {(0, 1): Fraction(1)}),
                MultiPoly(V, {(2, 0): Fraction(1), (1, 0): a, (0, 0): c}),
            ])
        a, c1, c2 = self.parameters
        return SelfMap.affine([
            MultiPoly(V, {(0, 1): a, (0, 0): c1}),
            MultiPoly(V, {(2, 0): Fraction(1), (1, 1): Fraction(-1), (0, 0): c2}),
        ])


def _require_unit_parameters(nf: NormalFormQuadratic, p: int):
    for c in nf.parameters:
        if c != 0 and valuation(c, p) != 0:
            raise ValueError(f"parameter {c} is not a unit at {p}")


def _region_membership_cert(kind_region: str, p: int, point: AffPoint,
                            level: int, extra: dict | None = None) -> MaximalityCertificate:
    payload = {
        "prime": p,
        "region": kind_region,
        "level": level,
        "point": [Fraction(c) for c in point.coords],
        "unit_coefficients": True,
    }
    if extra:
        payload.update(extra)
    return MaximalityCertificate(kind="region-membership", payload=payload)


def quad_normal_family(nf: NormalFormQuadratic, p: int, k: int,
                       avoid=()) -> FamilyResult:
    """Family of maximal-growth points for a quadratic normal form.

    Members are sampled on pairwise-distinct valuation levels inside the
    case-appropriate region; maximality is region membership itself (the
    local height grows at the full rate there), and disjointness reduces to
    exact valuation statements.
    """
    if k < 1:
        raise ValueError("family size must be >= 1")
    _require_unit_parameters(nf, p)
    avoid = list(avoid)

    if nf.which == XY_MIX:
        return _balanced_level_family(nf, p, k, avoid, region="balanced-expanding")
    if nf.which == SHEAR_DIFFERENCE:
        return _balanced_level_family(nf, p, k, avoid, region="second-dominant")
    return _iterate_reduction_family(nf, p, k, avoid)


def _balanced_level_family(nf, p, k, avoid, region) -> FamilyResult:
    points = []
    maximality = []
    disjointness = {}
    levels = []
    lvl = 0
    while len(points) < k:
        lvl += 1
        if region == "balanced-expanding":
            target = (-lvl, -lvl)
            level = lvl
        else:
            # 1 < |x| < |y|: keep the first coordinate one level below
            if lvl < 2:
                continue
            target = (-(lvl - 1), -lvl)
            level = lvl
        P = padic_box_sampler(p, target, avoid=avoid)
        idx = len(points)
        points.append(P)
        levels.append(level)
        maximality.append(_region_membership_cert(region, p, P, level))
        for j in range(idx):
            disjointness[(j, idx)] = DisjointnessCertificate(
                scheme="padic-invariant", variant="quad-level",
                payload={
                    "prime": p,
                    "level_x": levels[j], "level_y": level,
                    "delta_minpoly": list(_GOLDEN_MINPOLY),
                    "region": region,
                    "point_x": [Fraction(c) for c in points[j].coords],
                    "point_y": [Fraction(c) for c in P.coords],
                })
    return FamilyResult(scheme="padic-invariant", points=points,
                        maximality=maximality, disjointness=disjointness,
                        avoided=avoid, complete=True)


def _iterate_reduction_family(nf, p, k, avoid) -> FamilyResult:
    """Family for the delayed-square form via its stable square.

    The square acts coordinatewise, its boundary analysis is expanding with
    the fixed point [1:0:0], and orbits started in the attracting box keep a
    negative first-coordinate valuation while the odd translates of members
    have an integral first coordinate forever; both halves are certified.
    """
    f = nf.map()
    g = compose(f, f)
    d_g = g.degree  # growth factor of levels under the square

    points = []
    maximality = []
    disjointness = {}
    levels = []
    while len(points) < k:
        if not levels:
            lvl = 1
        else:
            lvl, _ = multiplier_avoiding_powers(Fraction(d_g), False, levels)
        P = padic_box_sampler(p, (-lvl, 0), avoid=avoid)
        idx = len(points)
        points.append(P)
        levels.append(lvl)
        maximality.append(_region_membership_cert(
            "box", p, P, lvl, extra={"iterate": 2}))
        for j in range(idx):
            claims = [
                {
                    "variant": "level",
                    "prime": p, "growth": d_g,
                    "level_x": levels[j], "level_y": lvl,
                    "point_x": [Fraction(c) for c in points[j].coords],
                    "point_y": [Fraction(c) for c in P.coords],
                },
                {
                    "variant": "integrality-split",
                    "prime": p, "coordinate": 0,
                    "point_integral": [Fraction(c) for c in
                                       f.evaluate_affine(points[j]).coords],
                    "point_expanding": [Fraction(c) for c in P.coords],
                    "coordinate_self_map": True,
                },
                {
                    "variant": "integrality-split",
                    "prime": p, "coordinate": 0,
                    "point_integral": [Fraction(c) for c in
                                       f.evaluate_affine(P).coords],
                    "point_expanding": [Fraction(c) for c in points[j].coords],
                    "coordinate_self_map": True,
                },
            ]
            disjointness[(j, idx)] = DisjointnessCertificate(
                scheme="padic-invariant", variant="iterate-reduction",
                payload={"iterate": 2, "prime": p, "claims": claims})
    return FamilyResult(scheme="padic-invariant", points=points,
                        maximality=maximality, disjointness=disjointness,
                        avoided=avoid, complete=True)


def scale_invariant_family(f: SelfMap, p: int | None, k: int,
                           avoid=()) -> FamilyResult:
    """Family in the scale region of a linear-scaling boundary map.

    Members carry pairwise-distinct values of the orbit invariant |x/y|,
    which is constant along forward orbits inside the region.
    """
    bd = boundary_analyze(f)
    if bd.case != LINEAR_SCALING:
        raise ValueError("scale-invariant families need the scaling boundary shape")
    if p is None:
        p = least_unit_prime(bd.map)
    elif not _coefficients_are_units(bd.map, p):
        raise ValueError(f"map coefficients are not units at {p}")
    d = bd.map.degree
    avoid = list(avoid)

    points = []
    maximality = []
    disjointness = {}
    invariants = []
    for S in range(1, k + 1):
        R = S * (d - 1) + 1
        P = padic_box_sampler(p, (-(R + S), -R), avoid=avoid)
        idx = len(points)
        points.append(P)
        invariants.append(S)
        maximality.append(MaximalityCertificate(
            kind="region-membership",
            payload={
                "prime": p, "region": "scale-region",
                "R_level": R, "S_level": S, "degree": d,
                "point": [Fraction(c) for c in P.coords],
                "unit_coefficients": True,
            }))
        for j in range(idx):
            disjointness[(j, idx)] = DisjointnessCertificate(
                scheme="padic-invariant", variant="scale-invariant",
                payload={
                    "prime": p,
                    "invariant_x": invariants[j], "invariant_y": S,
                    "point_x": [Fraction(c) for c in points[j].coords],
                    "point_y": [Fraction(c) for c in P.coords],
                })
    return FamilyResult(scheme="padic-invariant", points=points,
                        maximality=maximality, disjointness=disjointness,
                        avoided=avoid, complete=True)
