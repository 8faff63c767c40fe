"""Machine-checkable certificates that forward orbits are pairwise disjoint.

Three certificate schemes are produced, each carrying exactly the data a
standalone verifier re-checks without re-running any dynamical search:

* height-ratio: two positive canonical-height enclosures whose ratio interval
  excludes every integer power of the map degree.  If the orbits met, the
  functional equation would force the ratio to be such a power.
* prime-degree: a point of prime field degree p larger than the map degree
  and all recorded target degrees.  An orbit collision would factor p into
  integers smaller than p.
* padic-invariant: exact valuation data (levels, scale invariants, or
  integrality splits) that an orbit collision would force to coincide.

The inductive family builder keeps accepting candidates that certify against
everything accepted so far; the countable avoidance family of the underlying
density statement is replaced by the caller's finite list, which is recorded
in the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .exact_core import (
    MultiPoly,
    exact_linear_solve,
    is_prime,
    log_int_enclosure,
    next_prime,
    prime_factors,
    squarefree_part,
    sylvester_resultant_coeffs,
    valuation,
)
from .dynamics import SelfMap
from .heights import (
    AffPoint,
    AlgebraicNumber,
    ProjPoint,
    is_eisenstein,
    northcott_enumerate,
    northcott_window,
)
from .canonical import (
    CanonicalHeightValue,
    MorphismCertificate,
    PositivityCertificate,
    canonical_height,
    positive_canonical_height,
)


class GapExhaustedError(RuntimeError):
    """No usable height window was found below the fuel bound."""


@dataclass
class DisjointnessCertificate:
    """Tagged, self-contained proof that two forward orbits are disjoint."""

    scheme: str            # height-ratio | prime-degree | padic-invariant
    variant: str           # scheme-specific payload layout
    payload: dict

    def verify(self, subject: dict | None = None) -> list:
        return verify_disjointness(self, subject or {})


@dataclass
class MaximalityCertificate:
    """Proof data that a point's height growth achieves the maximal rate."""

    kind: str              # positive-canonical-height | height-floor | region-membership
    payload: dict

    def verify(self, subject: dict | None = None) -> list:
        return verify_maximality(self, subject or {})


# ---------------------------------------------------------------------------
# height-ratio scheme
# ---------------------------------------------------------------------------

def _enclosure_pair(v) -> tuple[Fraction, Fraction]:
    if isinstance(v, CanonicalHeightValue):
        v = v.value
    return Fraction(v.lo), Fraction(v.hi)


def _canonical_power_range(ratio_lo: Fraction, ratio_hi: Fraction, d: int) -> int:
    """Deterministic exponent bound: least K with d^K > ratio_hi and
    d^-K < ratio_lo, plus one."""
    K = 0
    dK = Fraction(1)
    while not (dK > ratio_hi and 1 / dK < ratio_lo):
        K += 1
        dK *= d
        if K > 10_000:
            raise ValueError("unreasonable enclosure for a power-exclusion bound")
    return K + 1


def ratio_not_power(hx, hy, d: int):
    """Certificate that h(x)/h(y) is no integer power of d, or None.

    Both arguments are canonical-height values (or bare enclosures) with
    strictly positive lower bounds.  None means the enclosures are too wide:
    some power of d is not excluded, and the caller should deepen and retry.
    """
    if d < 2:
        raise ValueError("power base must be >= 2")
    lx, hx_ = _enclosure_pair(hx)
    ly, hy_ = _enclosure_pair(hy)
    if lx <= 0 or ly <= 0:
        raise ValueError("ratio_not_power needs strictly positive enclosures; "
                         "certify maximality first")
    ratio_lo = lx / hy_
    ratio_hi = hx_ / ly
    K = _canonical_power_range(ratio_lo, ratio_hi, d)
    for k in range(-K, K + 1):
        pk = Fraction(d) ** k
        if ratio_lo <= pk <= ratio_hi:
            return None
    return DisjointnessCertificate(
        scheme="height-ratio", variant="interval",
        payload={
            "d": d, "K": K,
            "hx": (lx, hx_), "hy": (ly, hy_),
        })


def ratio_not_power_exact(ratio: Fraction, delta: Fraction, squares: bool,
                          witness_prime: int) -> DisjointnessCertificate:
    """Exact-ratio variant: v_p(ratio^s) != 0 while v_p(delta) = 0 shows
    ratio^s avoids every integer power of delta."""
    s = 2 if squares else 1
    vr = valuation(ratio, witness_prime)
    vd = valuation(delta, witness_prime)
    if vr == 0 or vd != 0:
        raise ValueError("witness prime fails the valuation split")
    return DisjointnessCertificate(
        scheme="height-ratio", variant="exact-ratio",
        payload={
            "ratio": Fraction(ratio), "delta": Fraction(delta),
            "squares": bool(squares), "witness_prime": int(witness_prime),
            "ratio_valuation": int(vr) * s,
        })


# ---------------------------------------------------------------------------
# valuation-based multiplier selection
# ---------------------------------------------------------------------------

def multiplier_avoiding_powers(delta: Fraction, squares: bool,
                               l_list: Sequence[int]) -> tuple[int, dict]:
    """Least prime l with v_l(l_i) = 0 for all i and v_l(delta) = 0.

    Then v_l((l_i/l)^s) = -s != 0 = v_l(delta^n), so the (squared) ratios
    avoid every integer power of delta.  Returns (l, proof table).
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not l_list:
        raise ValueError("l_list must be nonempty")
    excluded = set()
    for li in l_list:
        if li <= 0:
            raise ValueError("multipliers must be positive")
        excluded.update(prime_factors(li))
    excluded.update(prime_factors(delta.numerator))
    excluded.update(prime_factors(delta.denominator))
    p = 2
    while p in excluded:
        p = next_prime(p)
    s = 2 if squares else 1
    table = {
        "prime": p,
        "exponent": s,
        "delta": delta,
        "ratio_valuations": {int(li): -s for li in l_list},
        "input_valuations": {int(li): 0 for li in l_list},
    }
    return p, table


# ---------------------------------------------------------------------------
# prime-degree scheme
# ---------------------------------------------------------------------------

def prime_degree_sampler(A: int, B: float) -> AlgebraicNumber:
    """Point of A^1 with prime field degree p > A and height > B.

    Returns the real root of t^p - q (Eisenstein at q, hence irreducible of
    degree exactly p) with q the least prime making (log q)/p exceed B.
    """
    if A < 1:
        raise ValueError("degree bound must be >= 1")
    if B < 0:
        raise ValueError("height bound must be >= 0")
    p = next_prime(A)
    q = 2
    while not log_int_enclosure(q).lo > B * p:
        q = next_prime(q)
    minpoly = MultiPoly(("t",), {(p,): Fraction(1), (0,): Fraction(-q)})
    # unique positive real root in (1, q]; for even p the negative root is
    # excluded by the interval
    return AlgebraicNumber(minpoly, (Fraction(1), Fraction(q + 1)),
                           eisenstein_prime=q)


def _p1_affine_chart(f: SelfMap) -> tuple[list[Fraction], list[Fraction]]:
    """Coefficient lists (ascending, formal degree d) of f on an affine chart."""
    proj = f.homogenization() if f.is_affine else f
    if proj.dim != 1:
        raise ValueError("expected a self-map of the projective line")
    d = proj.degree
    num = [Fraction(0)] * (d + 1)
    den = [Fraction(0)] * (d + 1)
    for (i, j), c in proj.components[0].terms.items():
        num[i] = c
    for (i, j), c in proj.components[1].terms.items():
        den[i] = c
    return num, den


def pushforward_minpoly(f: SelfMap, minpoly: MultiPoly) -> MultiPoly:
    """Minimal polynomial of f(alpha) from the minimal polynomial of alpha.

    Computed as the squarefree part of the t-resultant of m(t) and
    z*q(t) - p(t) (f = p/q on an affine chart), by exact evaluation and
    Lagrange interpolation in z.
    """
    num, den = _p1_affine_chart(f)
    name = minpoly.variables[0]
    dm = minpoly.total_degree()
    m_coeffs = [Fraction(0)] * (dm + 1)
    for (e,), c in minpoly.terms.items():
        m_coeffs[e] = c

    d = len(num) - 1
    lead_num = num[d]
    lead_den = den[d]
    samples: list[tuple[Fraction, Fraction]] = []
    z = Fraction(0)
    while len(samples) < dm + 1:
        if lead_den == 0 or z * lead_den - lead_num != 0:
            h = [z * qc - pc for pc, qc in zip(num, den)]
            res = sylvester_resultant_coeffs(m_coeffs, h)
            samples.append((z, res))
        z += 1

    # exact Lagrange interpolation
    out = MultiPoly.zero((name,))
    tvar = MultiPoly.variable((name,), name)
    for i, (zi, ri) in enumerate(samples):
        if ri == 0:
            continue
        basis = MultiPoly.constant((name,), 1)
        denom = Fraction(1)
        for j, (zj, _) in enumerate(samples):
            if i == j:
                continue
            basis = basis * (tvar - MultiPoly.constant((name,), zj))
            denom *= (zi - zj)
        out = out + basis.scale(ri / denom)
    if out.is_zero():
        raise ValueError("degenerate pushforward (resultant vanished identically)")
    return squarefree_part(out, name)


def prime_degree_disjointness(f: SelfMap, x: AlgebraicNumber,
                              targets: Sequence[int]) -> DisjointnessCertificate:
    """Certificate that the orbit of x avoids orbits of the target points.

    On the projective line every fiber degree factors into integers <= d, so
    an orbit collision would write the prime p = deg(x) as a product of
    fiber factors < p times a divisor of a target degree; that forces p to
    divide the target degree.  Hypotheses: p > d and p divides no recorded
    target degree (distinct primes > d certify each other mutually).
    """
    proj = f.homogenization() if f.is_affine else f
    if proj.dim != 1:
        raise ValueError("the prime-degree scheme is restricted to the projective line")
    d = proj.degree
    num, den = _p1_affine_chart(proj)
    if sylvester_resultant_coeffs(num, den) == 0:
        raise ValueError("map is not a morphism of the projective line")
    p = x.degree
    if not is_prime(p):
        raise ValueError(f"field degree {p} is not prime")
    if p <= d:
        raise ValueError(f"prime degree {p} must exceed the map degree {d}")
    for t in targets:
        if int(t) % p == 0:
            raise ValueError(f"prime degree {p} divides target degree {t}")
    if x.eisenstein_prime is None:
        raise ValueError("degree certification requires an Eisenstein witness")
    coeffs = [0] * (p + 1)
    for (e,), c in x.minpoly.terms.items():
        coeffs[e] = int(c)
    return DisjointnessCertificate(
        scheme="prime-degree", variant="eisenstein",
        payload={
            "p": p, "d": d,
            "targets": [int(t) for t in targets],
            "minpoly": coeffs,
            "eisenstein_prime": x.eisenstein_prime,
        })


# ---------------------------------------------------------------------------
# p-adic box sampling
# ---------------------------------------------------------------------------

def _units_coprime_to(p: int) -> Iterator[int]:
    u = 1
    while True:
        if u % p:
            yield u
        u += 1


def _unit(p: int, index: int) -> int:
    for i, u in enumerate(_units_coprime_to(p)):
        if i == index:
            return u
    raise AssertionError


def _index_tuples(n: int) -> Iterator[tuple]:
    """All index tuples, graded by max entry then lexicographic."""
    s = 0
    while True:
        def rec(prefix, hit, remaining):
            if remaining == 0:
                if hit:
                    yield tuple(prefix)
                return
            for v in range(0, s + 1):
                if not (hit or v == s) and remaining == 1:
                    continue
                yield from rec(prefix + [v], hit or v == s, remaining - 1)
        if s == 0:
            yield (0,) * n
        else:
            yield from rec([], False, n)
        s += 1


def padic_box_sampler(p: int, a: Sequence[int], avoid: Sequence[MultiPoly] = (),
                      fuel: int = 10_000) -> AffPoint:
    """Deterministic point with v_p(x_i) = a_i exactly, avoiding given hypersurfaces.

    Coordinates are x_i = p^(a_i) * u_i with u_i positive integers coprime
    to p, enumerated in a fixed graded order; density of the box guarantees
    an avoiding point exists, and the fuel bound is only defensive.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    for g in avoid:
        if g.is_zero():
            raise ValueError("avoidance polynomials must be nonzero")
    n = len(a)
    tried = 0
    for idx in _index_tuples(n):
        tried += 1
        if tried > fuel:
            raise RuntimeError("sampler fuel exhausted (defensive bound)")
        coords = [Fraction(p) ** ai * _unit(p, i) for ai, i in zip(a, idx)]
        P = AffPoint(coords)
        ok = True
        for g in avoid:
            values = {name: c for name, c in zip(g.variables, P.coords)}
            if g.evaluate(values) == 0:
                ok = False
                break
        if ok:
            return P
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# gap-window search
# ---------------------------------------------------------------------------

class LineMap:
    """Linear parameterization of a line P^1 -> P^N with exact distortion bounds."""

    def __init__(self, forms: Sequence[MultiPoly]):
        forms = list(forms)
        variables = forms[0].variables
        if len(variables) != 2:
            raise ValueError("line forms live in two parameters")
        for g in forms:
            if g.variables != variables or (not g.is_zero() and g.total_degree() != 1):
                raise ValueError("line components must be linear forms")
        rows = [[g.coefficient((1, 0)) for g in forms],
                [g.coefficient((0, 1)) for g in forms]]
        r0 = [c for c in rows[0]]
        r1 = [c for c in rows[1]]
        rank2 = any(r0[i] * r1[j] - r0[j] * r1[i] != 0
                    for i in range(len(forms)) for j in range(len(forms)))
        if not rank2:
            raise ValueError("line forms share a zero (degenerate parameterization)")
        self.forms = forms
        self._rows = rows

    def apply(self, a: ProjPoint) -> ProjPoint:
        values = {name: Fraction(c) for name, c in
                  zip(self.forms[0].variables, a.coords)}
        return ProjPoint([g.evaluate(values) for g in self.forms])

    def distortion(self) -> float:
        """c with |h(line(a)) - h(a)| <= c for all a, from exact identities."""
        up = max(int(sum(abs(c) for c in g.terms.values())) for g in self.forms
                 if not g.is_zero())
        c_up = log_int_enclosure(up).hi if up > 1 else 0.0

        worst = Fraction(1)
        gcd_bound = 1
        for target in ((1, 0), (0, 1)):
            A = [self._rows[0], self._rows[1]]
            sol = exact_linear_solve(A, [Fraction(target[0]), Fraction(target[1])])
            if sol is None:
                raise AssertionError("rank-2 line failed parameter recovery")
            den = 1
            for v in sol:
                den = den * v.denominator // math.gcd(den, v.denominator)
            total = sum(abs(v * den) for v in sol)
            worst = max(worst, Fraction(int(total), den))
            gcd_bound = gcd_bound * den // math.gcd(gcd_bound, den)
        c_down_val = worst * gcd_bound
        c_down = (log_int_enclosure(c_down_val.numerator).hi if c_down_val > 1 else 0.0)
        return max(c_up, c_down)


@dataclass
class GapStructure:
    """The height-value structure a window was chosen from."""

    targets: list
    modulus: float
    floor: float
    window: tuple
    level_values: list


@dataclass
class GapSearchResult:
    point: ProjPoint
    parameter: ProjPoint
    height: CanonicalHeightValue
    gap: GapStructure | None
    certificates: list


def gap_window_search(cert: MorphismCertificate, line: LineMap,
                      seeds: Sequence[ProjPoint], avoid: Sequence[MultiPoly] = (),
                      fuel: int = 4000, width: float = 1e-10) -> GapSearchResult:
    """Point on the line with positive canonical height whose orbit provably
    avoids every seed orbit.

    The seed heights spread into geometric progressions under iteration;
    consecutive progression values leave windows of length > 2c (c = the
    certificate's O(1) constant plus the line's height distortion), and any
    parameter whose height lands in such a window yields a point whose
    canonical height splits away from every progression.  The emitted
    certificates are checked individually, so window choice affects only
    completeness, never soundness.
    """
    d = cert.map.degree
    avoid = list(avoid)

    def off_avoid(x: ProjPoint) -> bool:
        for g in avoid:
            values = {name: Fraction(c) for name, c in zip(g.variables, x.coords)}
            if g.evaluate(values) == 0:
                return False
        return True

    if not seeds:
        for a in northcott_enumerate(1, 200):
            x = line.apply(a)
            if not off_avoid(x):
                continue
            pos = positive_canonical_height(cert, x)
            if pos is None:
                continue
            h = canonical_height(cert, x, target_width=width)
            return GapSearchResult(point=x, parameter=a, height=h,
                                   gap=None, certificates=[])
        raise GapExhaustedError("no positive-height point found on the line")

    seed_values = [canonical_height(cert, s, target_width=width) for s in seeds]
    for sv in seed_values:
        if not sv.value.strictly_positive():
            raise ValueError("seeds must carry strictly positive canonical height")

    c_line = line.distortion()
    c_total = cert.error_constant.hi / (d - 1) + c_line

    # geometric progression values of the seed heights, sorted
    levels = []
    top = max(sv.value.hi for sv in seed_values)
    ceiling = max(top * d ** 3, (c_total * 8 + 1) * d ** 2)
    for i, sv in enumerate(seed_values):
        v = sv.value
        k = 0
        while v.lo * d ** k <= ceiling:
            levels.append((v.lo * d ** k, v.hi * d ** k, i, k))
            k += 1
    levels.sort()

    windows = []
    for (lo1, hi1, _, _), (lo2, hi2, _, _) in zip(levels, levels[1:]):
        if lo2 - hi1 > 2 * c_total + 1e-6:
            windows.append((hi1 + c_total, lo2 - c_total))
    # also the window above all levels
    last_hi = levels[-1][1]
    windows.append((last_hi + c_total, last_hi + c_total + math.log(d) + 1.0))
    if not windows:
        raise GapExhaustedError("no positive-length window between height levels")

    tried = 0
    for w_lo, w_hi in windows:
        H_lo = math.exp(max(w_lo, 0.0))
        H_hi = math.exp(w_hi)
        for a in northcott_window(1, H_lo, H_hi):
            tried += 1
            if tried > fuel:
                raise GapExhaustedError("window enumeration fuel exhausted")
            x = line.apply(a)
            if not off_avoid(x):
                continue
            hx = canonical_height(cert, x, target_width=width)
            if not hx.value.strictly_positive():
                continue
            certs = []
            ok = True
            for sv in seed_values:
                c = ratio_not_power(hx, sv, d)
                retry = 0
                w = width
                while c is None and retry < 3:
                    w /= 100
                    hx = canonical_height(cert, x, target_width=w)
                    c = ratio_not_power(hx, sv, d)
                    retry += 1
                if c is None:
                    ok = False
                    break
                certs.append(c)
            if not ok:
                continue
            gap = GapStructure(
                targets=[sv.value for sv in seed_values],
                modulus=math.log(d), floor=levels[0][0],
                window=(w_lo, w_hi),
                level_values=[(lv[0], lv[1]) for lv in levels])
            return GapSearchResult(point=x, parameter=a, height=hx,
                                   gap=gap, certificates=certs)
    raise GapExhaustedError("no qualifying point found in any window")


# ---------------------------------------------------------------------------
# the inductive family builder
# ---------------------------------------------------------------------------

@dataclass
class FamilyResult:
    """A finite family with full pairwise disjointness and maximality data."""

    scheme: str
    points: list
    maximality: list
    disjointness: dict
    avoided: list
    complete: bool


def _point_avoids(point, polys: Sequence[MultiPoly]) -> bool:
    for g in polys:
        if isinstance(point, ProjPoint):
            values = {name: Fraction(c) for name, c in zip(g.variables, point.coords)}
        elif isinstance(point, AffPoint):
            values = {name: c for name, c in zip(g.variables, point.coords)}
        else:
            return True
        if g.evaluate(values) == 0:
            return False
    return True


def family_builder(context, k: int, avoid: Sequence[MultiPoly] = (),
                   fuel: int = 20_000) -> FamilyResult:
    """Inductive family construction.

    Walks the context's deterministic candidate stream; a candidate is
    accepted when it avoids every avoidance polynomial, carries a
    maximality certificate, and certifies disjointness against every
    accepted point.  Selection is first-qualifying-in-order, so results
    are reproducible.
    """
    if k < 1:
        raise ValueError("family size must be >= 1")
    avoid = list(avoid)
    points = []
    maximality = []
    disjointness = {}
    tried = 0
    for cand in context.candidates():
        tried += 1
        if tried > fuel:
            break
        if not _point_avoids(cand, avoid):
            continue
        if not context.point_allowed(cand, points):
            continue
        max_cert = context.maximality(cand)
        if max_cert is None:
            continue
        pair_certs = {}
        ok = True
        for j, other in enumerate(points):
            c = context.pairwise(cand, max_cert, other, maximality[j])
            if c is None:
                ok = False
                break
            pair_certs[j] = c
        if not ok:
            continue
        idx = len(points)
        points.append(cand)
        maximality.append(max_cert)
        for j, c in pair_certs.items():
            disjointness[(j, idx)] = c
        if len(points) == k:
            return FamilyResult(scheme=context.scheme, points=points,
                                maximality=maximality, disjointness=disjointness,
                                avoided=avoid, complete=True)
    return FamilyResult(scheme=context.scheme, points=points,
                        maximality=maximality, disjointness=disjointness,
                        avoided=avoid, complete=False)


class HeightRatioContext:
    """Family context for morphisms: candidates stream by height, maximality
    is certified positive canonical height, pairs certify by power-exclusion
    of the height ratio."""

    scheme = "height-ratio"

    def __init__(self, cert: MorphismCertificate, width: float = 1e-10,
                 height_limit: int = 2000):
        self.cert = cert
        self.width = width
        self.height_limit = height_limit
        self._values: dict = {}

    def candidates(self):
        return northcott_enumerate(self.cert.map.dim, self.height_limit)

    def point_allowed(self, cand, accepted) -> bool:
        return all(cand != p for p in accepted)

    def maximality(self, cand):
        pos = positive_canonical_height(self.cert, cand)
        if pos is None:
            return None
        return MaximalityCertificate(
            kind="positive-canonical-height",
            payload={
                "point": cand,
                "depth": pos.depth,
                "orbit_height": (Fraction(pos.orbit_height.lo),
                                 Fraction(pos.orbit_height.hi)),
                "value": (Fraction(pos.value.lo), Fraction(pos.value.hi)),
                "c_minus_hi": Fraction(self.cert.c_minus.hi),
                "d": self.cert.map.degree,
            })

    def _value(self, point, width):
        key = (point, width)
        if key not in self._values:
            self._values[key] = canonical_height(self.cert, point, target_width=width)
        return self._values[key]

    def pairwise(self, cand, cand_max, other, other_max):
        d = self.cert.map.degree
        w = self.width
        for _ in range(3):
            try:
                c = ratio_not_power(self._value(cand, w), self._value(other, w), d)
            except ValueError:
                return None
            if c is not None:
                return c
            w /= 100
        return None


class PrimeDegreeContext:
    """Family context on the projective line via points of large prime degree."""

    scheme = "prime-degree"

    def __init__(self, f: SelfMap, cert: MorphismCertificate | None = None,
                 height_margin: float = 0.1):
        proj = f.homogenization() if f.is_affine else f
        if proj.dim != 1:
            raise ValueError("prime-degree families need a self-map of P^1")
        self.map = proj
        self.cert = cert
        floor = 0.0
        if cert is not None:
            floor = cert.error_constant.hi / (proj.degree - 1)
        self.height_floor = floor + height_margin

    def candidates(self):
        p = self.map.degree
        while True:
            p = next_prime(p)
            yield prime_degree_sampler(p - 1, self.height_floor)

    def point_allowed(self, cand, accepted) -> bool:
        return all(cand.degree != other.degree for other in accepted)

    def maximality(self, cand: AlgebraicNumber):
        q = cand.eisenstein_prime
        return MaximalityCertificate(
            kind="height-floor",
            payload={
                "q": q, "p": cand.degree,
                "floor": Fraction(self.height_floor).limit_denominator(10**12),
                "minpoly": _minpoly_coeff_list(cand.minpoly),
            })

    def pairwise(self, cand, cand_max, other, other_max):
        return prime_degree_disjointness(self.map, cand, [other.degree])


def _minpoly_coeff_list(m: MultiPoly) -> list:
    d = m.total_degree()
    out = [0] * (d + 1)
    for (e,), c in m.terms.items():
        out[e] = int(c)
    return out


# ---------------------------------------------------------------------------
# verification (no searches, only re-checks)
# ---------------------------------------------------------------------------

def verify_disjointness(cert: DisjointnessCertificate, subject: dict) -> list:
    """Re-check a disjointness certificate from its payload; returns a list of
    problems (empty = valid)."""
    issues: list = []
    p = cert.payload
    if cert.scheme == "height-ratio" and cert.variant == "interval":
        d = int(p["d"])
        K = int(p["K"])
        lx, hx = (Fraction(v) for v in p["hx"])
        ly, hy = (Fraction(v) for v in p["hy"])
        if "map_degree" in subject and subject["map_degree"] != d:
            issues.append("power base does not match the subject map degree")
        if d < 2:
            issues.append("power base must be >= 2")
            return issues
        if lx <= 0 or ly <= 0:
            issues.append("enclosures must be strictly positive")
            return issues
        ratio_lo, ratio_hi = lx / hy, hx / ly
        try:
            expected_K = _canonical_power_range(ratio_lo, ratio_hi, d)
        except ValueError:
            issues.append("enclosures give no finite exponent bound")
            return issues
        if K != expected_K:
            issues.append(f"exponent bound K={K} is not the canonical value {expected_K}")
        dK = Fraction(d) ** K
        if not (dK > ratio_hi and 1 / dK < ratio_lo):
            issues.append("geometric bound fails: far powers not excluded")
        for k in range(-K, K + 1):
            if ratio_lo <= Fraction(d) ** k <= ratio_hi:
                issues.append(f"power {d}^{k} lies inside the ratio interval")
    elif cert.scheme == "height-ratio" and cert.variant == "exact-ratio":
        ratio = Fraction(p["ratio"])
        delta = Fraction(p["delta"])
        wp = int(p["witness_prime"])
        s = 2 if p["squares"] else 1
        if not is_prime(wp):
            issues.append("witness is not prime")
            return issues
        vr = valuation(ratio, wp)
        if vr == 0:
            issues.append("witness prime does not separate the ratio")
        if valuation(delta, wp) != 0:
            issues.append("witness prime divides delta")
        if int(p["ratio_valuation"]) != (0 if vr == 0 else int(vr) * s):
            issues.append("recorded ratio valuation is wrong")
    elif cert.scheme == "prime-degree":
        pp = int(p["p"])
        d = int(p["d"])
        if "map_degree" in subject and subject["map_degree"] != d:
            issues.append("recorded map degree does not match the subject")
        if not is_prime(pp):
            issues.append(f"{pp} is not prime")
        if pp <= d:
            issues.append("prime degree does not exceed the map degree")
        for t in p["targets"]:
            t = int(t)
            if t < 1 or t % pp == 0:
                issues.append(f"target degree {t} is divisible by p")
        coeffs = [int(c) for c in p["minpoly"]]
        if len(coeffs) - 1 != pp:
            issues.append("minimal polynomial degree does not equal p")
        q = int(p["eisenstein_prime"])
        mp_poly = MultiPoly(("t",), {(i,): Fraction(c) for i, c in enumerate(coeffs) if c})
        if not is_eisenstein(mp_poly, q):
            issues.append("Eisenstein witness fails (irreducibility not certified)")
    elif cert.scheme == "padic-invariant":
        issues.extend(_verify_padic(cert, subject))
    else:
        issues.append(f"unknown scheme/variant {cert.scheme}/{cert.variant}")
    return issues


def _verify_padic(cert: DisjointnessCertificate, subject: dict) -> list:
    """Valuation re-checks shared by the appendix-style schemes."""
    issues: list = []
    p = cert.payload
    prime = int(p["prime"])
    if not is_prime(prime):
        return [f"{prime} is not prime"]

    def coords(key):
        return [Fraction(v) for v in p[key]]

    if "map" in subject and cert.variant in ("level", "quad-level", "scale-invariant"):
        m = subject["map"]
        comps = m.affine_components if m.is_affine else m.components
        for comp in comps:
            for c in comp.terms.values():
                if valuation(c, prime) != 0:
                    issues.append(
                        "map coefficient is not a unit at the certificate prime")
                    break

    if cert.variant == "level":
        d = int(p["growth"])
        lx, ly = int(p["level_x"]), int(p["level_y"])
        if lx <= 0 or ly <= 0:
            issues.append("levels must be positive")
        if _int_ratio_is_power(lx, ly, d):
            issues.append(f"levels {lx}/{ly} differ by a power of {d}")
        for key, lvl in (("x", lx), ("y", ly)):
            cs = coords(f"point_{key}")
            # box membership: the first coordinate realizes the level and
            # strictly dominates every other coordinate and 1
            if -_val(cs[0], prime) != lvl:
                issues.append(f"first coordinate of point {key} has the wrong level")
            if not all(_val(c, prime) > -lvl for c in cs[1:]):
                issues.append(f"point {key} leaves the attracting box")
    elif cert.variant == "quad-level":
        lx, ly = int(p["level_x"]), int(p["level_y"])
        if lx == ly:
            issues.append("levels must be distinct")
        mp_coeffs = [Fraction(c) for c in p["delta_minpoly"]]
        if len(mp_coeffs) - 1 != 2:
            issues.append("growth-rate minimal polynomial must be quadratic")
        else:
            a0, a1, a2 = mp_coeffs
            disc = a1 * a1 - 4 * a0 * a2
            if disc >= 0 and _is_rational_square(disc):
                issues.append("growth rate is rational: the equal-level argument fails")
        for key, lvl in (("x", lx), ("y", ly)):
            cs = coords(f"point_{key}")
            region = p["region"]
            vals = [-_val(c, prime) for c in cs]
            if region == "balanced-expanding":
                if not (vals[0] == vals[1] == lvl and lvl >= 1):
                    issues.append(f"point {key} not on the balanced level {lvl}")
            elif region == "second-dominant":
                if not (vals[1] == lvl and 0 < vals[0] < lvl):
                    issues.append(f"point {key} not in the dominated region at level {lvl}")
            else:
                issues.append(f"unknown region {region}")
    elif cert.variant == "scale-invariant":
        sx, sy = int(p["invariant_x"]), int(p["invariant_y"])
        if sx == sy:
            issues.append("scale invariants must differ")
        for key, s in (("x", sx), ("y", sy)):
            cs = coords(f"point_{key}")
            if _val(cs[0], prime) - _val(cs[1], prime) != -s:
                issues.append(f"recorded invariant of point {key} is wrong")
    elif cert.variant == "integrality-split":
        cs_in = coords("point_integral")
        cs_out = coords("point_expanding")
        idx = int(p.get("coordinate", 0))
        if _val(cs_in[idx], prime) < 0:
            issues.append("integral-side coordinate is not p-integral")
        if _val(cs_out[idx], prime) >= 0:
            issues.append("expanding-side coordinate is p-integral")
        if not p.get("coordinate_self_map", False):
            issues.append("integrality invariance requires a self-mapped coordinate")
        if "map" in subject:
            m = subject["map"]
            if not m.is_affine:
                issues.append("integrality split needs an affine subject map")
            else:
                comp = m.affine_components[idx]
                nvars = len(comp.variables)
                for e, c in comp.terms.items():
                    if any(e[i] > 0 for i in range(nvars) if i != idx):
                        issues.append("claimed coordinate is not self-mapped")
                        break
                    if valuation(c, prime) < 0:
                        issues.append("self-mapped coordinate has a non-integral coefficient")
                        break
    elif cert.variant == "iterate-reduction":
        it = int(p["iterate"])
        if it < 2:
            issues.append("iterate reduction needs an iterate >= 2")
        claims = p.get("claims", [])
        if not claims:
            issues.append("iterate reduction carries no claims")
        sub_subject = dict(subject)
        if "map" in subject:
            sub_subject["map"] = subject["map"].iterate(it)
        for i, claim in enumerate(claims):
            inner = DisjointnessCertificate(
                scheme="padic-invariant", variant=claim["variant"],
                payload=claim)
            for issue in _verify_padic(inner, sub_subject):
                issues.append(f"claim {i}: {issue}")
    else:
        issues.append(f"unknown padic variant {cert.variant}")
    return issues


def _val(x: Fraction, p: int):
    return valuation(Fraction(x), p)


def _int_ratio_is_power(a: int, b: int, d: int) -> bool:
    r = Fraction(a, b)
    if r == 1:
        return True
    x = Fraction(d)
    v = r if r > 1 else 1 / r
    pk = x
    while pk <= v:
        if pk == v:
            return True
        pk *= d
    return False


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    rn = math.isqrt(n)
    rd = math.isqrt(d)
    return rn * rn == n and rd * rd == d


def verify_maximality(cert: MaximalityCertificate, subject: dict) -> list:
    issues: list = []
    p = cert.payload
    if cert.kind == "positive-canonical-height":
        d = int(p["d"])
        n = int(p["depth"])
        h_lo = Fraction(p["orbit_height"][0])
        c_minus = Fraction(p["c_minus_hi"])
        bound = h_lo / d ** n - c_minus / (d ** n * (d - 1))
        if not bound > 0:
            issues.append("positivity bound fails at the recorded depth")
        v_lo = Fraction(p["value"][0])
        if v_lo <= 0:
            issues.append("recorded value enclosure is not positive")
    elif cert.kind == "height-floor":
        q = int(p["q"])
        pp = int(p["p"])
        floor = Fraction(p["floor"])
        if not (is_prime(q) and is_prime(pp)):
            issues.append("height-floor primes are not prime")
        if not Fraction(log_int_enclosure(q).lo) > floor * pp:
            issues.append("height floor not exceeded: (log q)/p <= floor")
        coeffs = [int(c) for c in p["minpoly"]]
        expect = [0] * (pp + 1)
        expect[0] = -q
        expect[pp] = 1
        if coeffs != expect:
            issues.append("minimal polynomial is not the recorded radical polynomial")
    elif cert.kind == "region-membership":
        prime = int(p["prime"])
        if not is_prime(prime):
            issues.append("region prime is not prime")
        vals = [_val(Fraction(c), prime) for c in p["point"]]
        region = p["region"]
        lvl = int(p.get("level", 0))
        if region == "balanced-expanding":
            if not (vals[0] == vals[1] == -lvl and lvl >= 1):
                issues.append("point is not on the balanced expanding level")
        elif region == "second-dominant":
            if not (vals[1] == -lvl and -lvl < vals[0] < 0):
                issues.append("point is not in the second-dominant region")
        elif region == "box":
            if not (vals[0] == -lvl and lvl >= 1
                    and all(v > -lvl for v in vals[1:])):
                issues.append("point is not in the attracting box")
        elif region == "scale-region":
            # |x| = p^(R+S), |y| = p^R with R, S >= 1 and |y|^d > |x|^(d-1),
            # which on levels reads R > S*(d-1)
            R = int(p["R_level"])
            S = int(p["S_level"])
            dd = int(p["degree"])
            if vals[1] != -R or vals[0] != -(R + S):
                issues.append("point does not realize the recorded scale levels")
            if not (R >= 1 and S >= 1 and R > S * (dd - 1)):
                issues.append("scale-region inequalities fail on the levels")
        else:
            issues.append(f"unknown region {region}")
        if "unit_coefficients" in p and not p["unit_coefficients"]:
            issues.append("map coefficients are not units at the region prime")
    else:
        issues.append(f"unknown maximality kind {cert.kind}")
    return issues
