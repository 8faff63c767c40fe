"""Elliptic curves over Q: exact group law, certified canonical heights via
the duplication limit, torsion-versus-positive-height decisions, and
disjoint-orbit families under multiply-and-translate dynamics.

The x-coordinate of point duplication is a degree-4 morphism of the
projective line, so the whole certified-height machinery applies unchanged:
the curve's duplication error constant comes from the same cofactor
certificate as any other morphism, and the canonical height is the
depth-limited duplication limit with two-sided error.

Multiply-and-translate dynamics f(P) = m*P + a with a = (1-m)*b is conjugate
(by translation) to multiplication by m, so members z = l*x0 + b of a family
satisfy f^n(z) = m^n*l*x0 + b; an orbit collision forces the squared
multiplier ratio into an integer power of m^2, which exact valuations refute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact_core import MultiPoly, RealEnclosure
from .dynamics import SelfMap
from .heights import ProjPoint
from .canonical import (
    CanonicalHeightValue,
    MorphismCertificate,
    PositivityCertificate,
    canonical_height,
    certify_morphism,
    positive_canonical_height,
)
from .certify import (
    DisjointnessCertificate,
    FamilyResult,
    MaximalityCertificate,
    multiplier_avoiding_powers,
    ratio_not_power_exact,
)


class ECPoint:
    """Affine rational point (x, y) or the point at infinity."""

    __slots__ = ("x", "y", "infinity")

    def __init__(self, x=None, y=None, infinity=False):
        if infinity:
            self.x = None
            self.y = None
            self.infinity = True
        else:
            self.x = Fraction(x)
            self.y = Fraction(y)
            self.infinity = False

    @classmethod
    def at_infinity(cls) -> "ECPoint":
        return cls(infinity=True)

    def __eq__(self, other):
        if not isinstance(other, ECPoint):
            return NotImplemented
        if self.infinity or other.infinity:
            return self.infinity and other.infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y, self.infinity))

    def __repr__(self):
        if self.infinity:
            return "O"
        return f"({self.x}, {self.y})"


class EllipticCurve:
    """y^2 = x^3 + a*x + b with nonzero discriminant, certified at creation.

    Construction builds the x-coordinate duplication morphism on P^1 and its
    height certificate; the duplication error constant bounds
    |h_x(2P) - 4 h_x(P)| for every P.
    """

    def __init__(self, a, b):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.discriminant = -16 * (4 * self.a ** 3 + 27 * self.b ** 2)
        if self.discriminant == 0:
            raise ValueError("singular curve: discriminant vanishes")
        self.duplication = _duplication_map(self.a, self.b)
        cert = certify_morphism(self.duplication)
        if not isinstance(cert, MorphismCertificate):
            raise AssertionError("duplication map failed morphism certification")
        self.duplication_certificate = cert

    @property
    def duplication_error(self) -> RealEnclosure:
        return self.duplication_certificate.error_constant

    def contains(self, P: ECPoint) -> bool:
        if P.infinity:
            return True
        return P.y ** 2 == P.x ** 3 + self.a * P.x + self.b

    def point(self, x, y) -> ECPoint:
        P = ECPoint(x, y)
        if not self.contains(P):
            raise ValueError(f"({x}, {y}) is not on y^2 = x^3 + {self.a}x + {self.b}")
        return P

    def infinity(self) -> ECPoint:
        return ECPoint.at_infinity()

    def __repr__(self):
        return f"EllipticCurve(y^2 = x^3 + {self.a}*x + {self.b})"


def _duplication_map(a: Fraction, b: Fraction) -> SelfMap:
    """x(2P) as a degree-4 self-map of P^1 in coordinates [X : W]."""
    V = ("X", "W")
    num = MultiPoly(V, {
        (4, 0): Fraction(1),
        (2, 2): -2 * a,
        (1, 3): -8 * b,
        (0, 4): a * a,
    })
    den = MultiPoly(V, {
        (3, 1): Fraction(4),
        (1, 3): 4 * a,
        (0, 4): 4 * b,
    })
    return SelfMap.projective([num, den])


# ---------------------------------------------------------------------------
# group law
# ---------------------------------------------------------------------------

def neg(E: EllipticCurve, P: ECPoint) -> ECPoint:
    if P.infinity:
        return P
    return ECPoint(P.x, -P.y)


def add(E: EllipticCurve, P: ECPoint, Q: ECPoint) -> ECPoint:
    """Chord-tangent addition; inputs are validated against the curve."""
    for R in (P, Q):
        if not E.contains(R):
            raise ValueError(f"{R} is not on {E}")
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return ECPoint.at_infinity()
        # tangent line (P == Q with y != 0)
        slope = (3 * P.x ** 2 + E.a) / (2 * P.y)
    else:
        slope = (Q.y - P.y) / (Q.x - P.x)
    x3 = slope ** 2 - P.x - Q.x
    y3 = slope * (P.x - x3) - P.y
    return ECPoint(x3, y3)


def double(E: EllipticCurve, P: ECPoint) -> ECPoint:
    return add(E, P, P)


def multiply(E: EllipticCurve, n: int, P: ECPoint) -> ECPoint:
    """n*P by double-and-add; negative n through the involution."""
    if n < 0:
        return multiply(E, -n, neg(E, P))
    R = ECPoint.at_infinity()
    Q = P
    while n:
        if n & 1:
            R = add(E, R, Q)
        n >>= 1
        if n:
            Q = double(E, Q)
    return R


def x_projective(P: ECPoint) -> ProjPoint:
    if P.infinity:
        return ProjPoint([1, 0])
    return ProjPoint([P.x, 1])


# ---------------------------------------------------------------------------
# canonical height on the curve
# ---------------------------------------------------------------------------

def neron_tate_height(E: EllipticCurve, P: ECPoint,
                      target_width: float = 1e-8) -> CanonicalHeightValue:
    """Canonical height limit h_x(2^n P)/4^n with certified two-sided error.

    Normalized on the symmetric degree-2 divisor class: doubling multiplies
    the value by exactly 4, and h(l*P) = l^2 h(P).
    """
    if not E.contains(P):
        raise ValueError(f"{P} is not on {E}")
    if P.infinity:
        return CanonicalHeightValue(
            value=RealEnclosure.zero(), depth=0,
            certificate=E.duplication_certificate,
            orbit_height=RealEnclosure.zero())
    return canonical_height(E.duplication_certificate, x_projective(P),
                            target_width=target_width)


@dataclass
class TorsionResult:
    order: int


@dataclass
class NontorsionResult:
    certificate: PositivityCertificate


@dataclass
class UndecidedResult:
    torsion_bound: int
    depth_budget: int


def torsion_zero_locus_test(E: EllipticCurve, P: ECPoint, bound: int = 16,
                            depth_budget: int = 30):
    """Decide torsion (finite multiple search) versus positive canonical height.

    The multiple bound is configuration: by the uniform rational torsion
    bound the default 16 covers every rational torsion order.  Returns a
    TorsionResult, a NontorsionResult, or UndecidedResult when both sides
    stay inconclusive within budget.
    """
    if not E.contains(P):
        raise ValueError(f"{P} is not on {E}")
    R = ECPoint.at_infinity()
    for n in range(1, bound + 1):
        R = add(E, R, P)
        if R.infinity:
            return TorsionResult(order=n)
    pos = positive_canonical_height(E.duplication_certificate, x_projective(P),
                                    depth_budget=depth_budget)
    if pos is not None:
        return NontorsionResult(certificate=pos)
    return UndecidedResult(torsion_bound=bound, depth_budget=depth_budget)


@dataclass
class QuadraticityReport:
    multiplier: int
    height: CanonicalHeightValue
    scaled_height: RealEnclosure
    multiple_height: CanonicalHeightValue
    consistent: bool


def quadraticity_check(E: EllipticCurve, P: ECPoint, l: int,
                       target_width: float = 1e-8) -> QuadraticityReport:
    """Compare the height of l*P against l^2 times the height of P."""
    hP = neron_tate_height(E, P, target_width)
    hlP = neron_tate_height(E, multiply(E, l, P), target_width)
    scaled = hP.value * (l * l) if l != 0 else RealEnclosure.zero()
    return QuadraticityReport(
        multiplier=l, height=hP, scaled_height=scaled, multiple_height=hlP,
        consistent=hlP.value.intersects(scaled))


# ---------------------------------------------------------------------------
# multiply-and-translate families
# ---------------------------------------------------------------------------

@dataclass
class ECDynamics:
    """f(P) = multiplier * P + translation, with |multiplier| >= 2."""

    multiplier: int
    translation: ECPoint

    def __post_init__(self):
        if abs(self.multiplier) < 2:
            raise ValueError("dynamics needs |multiplier| >= 2")

    @property
    def dynamical_degree(self) -> int:
        return self.multiplier ** 2

    def apply(self, E: EllipticCurve, P: ECPoint) -> ECPoint:
        return add(E, multiply(E, self.multiplier, P), self.translation)


def translated_multiple_family(E: EllipticCurve, dyn: ECDynamics,
                               x0: ECPoint, base: ECPoint, k: int,
                               nontorsion: NontorsionResult | None = None,
                               target_width: float = 1e-8) -> FamilyResult:
    """Family z_j = l_j * x0 + base with pairwise-disjoint forward orbits.

    Requires the compatibility translation = (1 - m) * base, which makes the
    dynamics conjugate to plain multiplication by m via translation by base.
    Multipliers come from iterated valuation selection: each new prime l
    keeps every squared ratio (l_i/l_j)^2 outside the powers of m^2, which
    is exactly what an orbit collision would force (x0 being nontorsion).
    """
    if k < 1:
        raise ValueError("family size must be >= 1")
    m = dyn.multiplier
    expected = multiply(E, 1 - m, base)
    if dyn.translation != expected:
        raise ValueError("translation must equal (1 - multiplier) * base")
    if nontorsion is None:
        out = torsion_zero_locus_test(E, x0)
        if not isinstance(out, NontorsionResult):
            raise ValueError(
                "x0 lacks a positive-height certificate: on a rank-0 curve no "
                "such family exists over the rationals")
        nontorsion = out

    delta = Fraction(m * m)
    multipliers = [1]
    while len(multipliers) < k:
        l, _ = multiplier_avoiding_powers(delta, True, multipliers)
        multipliers.append(l)

    points = []
    maximality = []
    disjointness = {}
    for j, l in enumerate(multipliers):
        z = add(E, multiply(E, l, x0), base)
        points.append(z)
        pos = positive_canonical_height(E.duplication_certificate,
                                        x_projective(z))
        if pos is None:
            raise AssertionError(
                f"member {l}*x0 + base unexpectedly lacks positive height")
        maximality.append(MaximalityCertificate(
            kind="positive-canonical-height",
            payload={
                "point": x_projective(z),
                "depth": pos.depth,
                "orbit_height": (Fraction(pos.orbit_height.lo),
                                 Fraction(pos.orbit_height.hi)),
                "value": (Fraction(pos.value.lo), Fraction(pos.value.hi)),
                "c_minus_hi": Fraction(E.duplication_certificate.c_minus.hi),
                "d": 4,
            }))
        for i in range(j):
            witness = multipliers[j] if multipliers[j] > 1 else multipliers[i]
            cert = ratio_not_power_exact(
                Fraction(multipliers[i], multipliers[j]), delta, True, witness)
            disjointness[(i, j)] = cert
    return FamilyResult(scheme="height-ratio", points=points,
                        maximality=maximality, disjointness=disjointness,
                        avoided=[], complete=len(points) == k)
