"""Tests for morphism certificates and certified canonical heights."""

import math
import random
from fractions import Fraction

import pytest

from arithdyn.exact_core import MultiPoly, sylvester_resultant_coeffs
from arithdyn.dynamics import SelfMap
from arithdyn.heights import ProjPoint, weil_height
from arithdyn.canonical import (
    ArithDegreeEstimate,
    CanonicalHeightValue,
    MorphismCertificate,
    NotAMorphism,
    TruncatedOrbitError,
    alpha_estimate,
    canonical_height,
    certify_morphism,
    positive_canonical_height,
)

XY = ("X", "Y")


def p2(s_terms, vars_=XY):
    return MultiPoly(vars_, {tuple(k): Fraction(v) for k, v in s_terms.items()})


def power_map(d=2):
    return SelfMap.projective([p2({(d, 0): 1}), p2({(0, d): 1})])


def plus_map():
    """[X^2 + Y^2 : Y^2]"""
    return SelfMap.projective([p2({(2, 0): 1, (0, 2): 1}), p2({(0, 2): 1})])


def cubic_map():
    """[X^3 + 2Y^3 : Y^3]"""
    return SelfMap.projective([p2({(3, 0): 1, (0, 3): 2}), p2({(0, 3): 1})])


def gcd_loss_map():
    """[X^2 + Y^2 : 2Y^2]: iterates shed a factor of 2 at odd points."""
    return SelfMap.projective([p2({(2, 0): 1, (0, 2): 1}), p2({(0, 2): 2})])


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def test_power_map_certificate_zero_constants():
    cert = certify_morphism(power_map(2))
    assert isinstance(cert, MorphismCertificate)
    assert cert.c_plus.hi == 0.0
    assert cert.c_minus.hi == 0.0
    assert cert.verify_identity()


def test_plus_map_certificate():
    cert = certify_morphism(plus_map())
    assert isinstance(cert, MorphismCertificate)
    # triangle inequality constant: log of the max coefficient sum = log 2
    assert cert.coeff_sum_bound == 2
    assert cert.c_plus.contains(Fraction(math.log(2)).limit_denominator(10**12)) or \
        cert.c_plus.lo <= math.log(2) <= cert.c_plus.hi
    # the components have nonzero resultant (Sylvester oracle)
    res = sylvester_resultant_coeffs([1, 0, 1], [1, 0, 0])
    assert res != 0


def test_shared_zero_is_not_a_morphism():
    # raw component pair [X^2 : X*Y] shares the zero [0:1]
    out = certify_morphism([p2({(2, 0): 1}), p2({(1, 1): 1})])
    assert isinstance(out, NotAMorphism)


def test_certificate_identity_is_exact():
    for f in (power_map(3), plus_map(), cubic_map(), gcd_loss_map()):
        cert = certify_morphism(f)
        assert isinstance(cert, MorphismCertificate)
        assert cert.verify_identity()


def test_two_sided_bound_exact_on_random_points():
    rng = random.Random(42)
    for f in (power_map(2), plus_map(), cubic_map()):
        cert = certify_morphism(f)
        for _ in range(100):
            a, b = rng.randint(-80, 80), rng.randint(-80, 80)
            if a == 0 and b == 0:
                continue
            assert cert.check_two_sided_exact(ProjPoint([a, b]))


def test_affine_input_is_homogenized():
    # x -> x^2 + 1 on the affine line extends to a morphism of P^1
    f = SelfMap.affine([MultiPoly(("x",), {(2,): Fraction(1), (0,): Fraction(1)})])
    cert = certify_morphism(f)
    assert isinstance(cert, MorphismCertificate)
    assert cert.map.is_projective


# ---------------------------------------------------------------------------
# canonical heights
# ---------------------------------------------------------------------------

def test_power_map_height_is_weil_height():
    cert = certify_morphism(power_map(2))
    v = canonical_height(cert, ProjPoint([2, 1]), target_width=1e-12)
    assert v.value.lo <= math.log(2) <= v.value.hi
    assert v.width() <= 1e-12


def test_fixed_point_height_zero():
    cert = certify_morphism(plus_map())
    v = canonical_height(cert, ProjPoint([1, 0]), target_width=1e-10)
    assert v.value.lo <= 0.0 <= v.value.hi
    assert v.width() <= 1e-10


def test_plus_map_positive_height_matches_exact_orbit_oracle():
    cert = certify_morphism(plus_map())
    v = canonical_height(cert, ProjPoint([1, 1]), target_width=1e-10)
    assert v.value.lo > 0
    # oracle: x_{n+1} = x_n^2 + 1 exactly; h_n/2^n brackets the limit with
    # the certificate constants
    x = 1
    for _ in range(20):
        x = x * x + 1
    h20 = math.log(x)
    lo = h20 / 2**20 - cert.c_minus.hi / (2**20 * 1)
    hi = h20 / 2**20 + cert.c_plus.hi / (2**20 * 1)
    assert v.value.lo <= hi and lo <= v.value.hi


def test_gcd_loss_map_tracker_matches_exact_iteration():
    f = gcd_loss_map()
    cert = certify_morphism(f)
    assert 2 in cert.tracked_primes()
    x = ProjPoint([3, 1])
    # exact orbit with canonical reduction
    pts = [x]
    for _ in range(8):
        pts.append(f.evaluate(pts[-1]))
    for depth in (3, 6, 8):
        v = canonical_height(cert, x, depth=depth)
        h_exact = weil_height(pts[depth])
        d = 2
        lo = h_exact.lo / d**depth - cert.c_minus.hi / (d**depth * (d - 1))
        hi = h_exact.hi / d**depth + cert.c_plus.hi / (d**depth * (d - 1))
        assert v.value.lo <= hi + 1e-12 and lo - 1e-12 <= v.value.hi
        # the tracked orbit height is the exact one
        assert v.orbit_height.lo - 1e-9 <= h_exact.hi
        assert h_exact.lo <= v.orbit_height.hi + 1e-9


def test_telescoping_widths_decay():
    cert = certify_morphism(plus_map())
    x = ProjPoint([2, 3])
    prev = canonical_height(cert, x, depth=2)
    for depth in range(3, 12):
        cur = canonical_height(cert, x, depth=depth)
        assert cur.value.intersects(prev.value)
        assert cur.width() <= prev.width() / 2 + 1e-13
        prev = cur


def test_functional_equation():
    rng = random.Random(7)
    for f in (plus_map(), cubic_map(), power_map(3)):
        cert = certify_morphism(f)
        d = f.degree
        for _ in range(30):
            a, b = rng.randint(-30, 30), rng.randint(-30, 30)
            if a == 0 and b == 0:
                continue
            x = ProjPoint([a, b])
            fx = f.evaluate(x)
            hx = canonical_height(cert, x, target_width=1e-9)
            hfx = canonical_height(cert, fx, target_width=1e-9)
            scaled = hx.value * d
            assert hfx.value.intersects(scaled)


def test_width_invariant():
    cert = certify_morphism(plus_map())
    for depth in (2, 5, 9):
        v = canonical_height(cert, ProjPoint([3, 2]), depth=depth)
        formula = (cert.c_plus.hi + cert.c_minus.hi) / (2**depth * (2 - 1))
        assert v.width() <= formula + 1e-12


# ---------------------------------------------------------------------------
# positivity
# ---------------------------------------------------------------------------

def test_positive_at_depth_zero_for_power_map():
    cert = certify_morphism(power_map(2))
    pos = positive_canonical_height(cert, ProjPoint([2, 1]))
    assert pos is not None
    assert pos.depth == 0
    assert pos.value.lo > 0


def test_preperiodic_inconclusive():
    cert = certify_morphism(power_map(2))
    assert positive_canonical_height(cert, ProjPoint([1, 1])) is None
    assert positive_canonical_height(cert, ProjPoint([1, 0])) is None


def test_positive_small_depth_plus_map():
    cert = certify_morphism(plus_map())
    pos = positive_canonical_height(cert, ProjPoint([1, 1]))
    assert pos is not None
    assert pos.depth <= 5


# ---------------------------------------------------------------------------
# arithmetic degree estimates
# ---------------------------------------------------------------------------

def test_alpha_exact_for_wandering_point():
    f = power_map(2)
    cert = certify_morphism(f)
    est = alpha_estimate(f, ProjPoint([2, 1]), 10, cert=cert)
    assert est.exact_value == 2


def test_alpha_collapses_for_fixed_point():
    f = power_map(2)
    est = alpha_estimate(f, ProjPoint([1, 1]), 10)
    assert est.exact_value is None
    assert abs(est.upper.hi - 1.0) < 1e-9
    assert abs(est.lower.lo - 1.0) < 1e-9


def test_alpha_xy_mix_ratio_near_golden():
    from tests_helpers_maps import xy_mix
    f = xy_mix(1, 1)
    x = ProjPoint([Fraction(1, 2), Fraction(3, 2), 1])
    est = alpha_estimate(f, x, 14)
    phi = (1 + math.sqrt(5)) / 2
    assert abs(est.ratio.midpoint() - phi) < 0.05


def test_alpha_truncated_orbit():
    V = ("X", "Y", "Z")
    crem = SelfMap.projective([
        p2({(0, 1, 1): 1}, V), p2({(1, 0, 1): 1}, V), p2({(1, 1, 0): 1}, V)])
    with pytest.raises(TruncatedOrbitError) as exc:
        alpha_estimate(crem, ProjPoint([1, 1, 0]), 6)
    assert isinstance(exc.value.partial, ArithDegreeEstimate)


def test_alpha_upper_below_degree_margin():
    rng = random.Random(11)
    maps = [power_map(2), power_map(3), plus_map(), cubic_map(), power_map(5)]
    for f in maps:
        d = f.degree
        cert = certify_morphism(f)
        for _ in range(20):
            a, b = rng.randint(-9, 9), rng.randint(-9, 9)
            if a == 0 and b == 0:
                continue
            est = alpha_estimate(f, ProjPoint([a, b]), 12, cert=cert)
            assert est.upper.hi <= d + 0.1
            assert est.lower.lo <= est.upper.hi
