"""Tests for disjointness certificates, samplers, and the family builder."""

import math
import random
from fractions import Fraction

import pytest
import sympy

from arithdyn.exact_core import MultiPoly, RealEnclosure
from arithdyn.dynamics import SelfMap, orbit
from arithdyn.heights import AffPoint, ProjPoint
from arithdyn.canonical import canonical_height, certify_morphism
from arithdyn.certify import (
    DisjointnessCertificate,
    FamilyResult,
    GapExhaustedError,
    HeightRatioContext,
    LineMap,
    PrimeDegreeContext,
    family_builder,
    gap_window_search,
    multiplier_avoiding_powers,
    padic_box_sampler,
    prime_degree_disjointness,
    prime_degree_sampler,
    pushforward_minpoly,
    ratio_not_power,
    ratio_not_power_exact,
    verify_disjointness,
    verify_maximality,
)

XY = ("X", "Y")


def p2(s_terms, vars_=XY):
    return MultiPoly(vars_, {tuple(k): Fraction(v) for k, v in s_terms.items()})


def squaring():
    return SelfMap.projective([p2({(2, 0): 1}), p2({(0, 2): 1})])


def cubing():
    return SelfMap.projective([p2({(3, 0): 1}), p2({(0, 3): 1})])


# ---------------------------------------------------------------------------
# height-ratio scheme
# ---------------------------------------------------------------------------

def test_ratio_not_power_certifies_log3_over_log2():
    cert = certify_morphism(squaring())
    h2 = canonical_height(cert, ProjPoint([2, 1]), target_width=1e-12)
    h3 = canonical_height(cert, ProjPoint([3, 1]), target_width=1e-12)
    c = ratio_not_power(h3, h2, 2)
    assert c is not None
    assert c.payload["K"] >= 2
    assert verify_disjointness(c, {"map_degree": 2}) == []


def test_ratio_not_power_inconclusive_on_meeting_orbits():
    cert = certify_morphism(squaring())
    h4 = canonical_height(cert, ProjPoint([4, 1]), target_width=1e-13)
    h2 = canonical_height(cert, ProjPoint([2, 1]), target_width=1e-13)
    # 4 = f(2): the ratio is exactly 2 and can never be excluded
    assert ratio_not_power(h4, h2, 2) is None


def test_ratio_not_power_rejects_nonpositive():
    cert = certify_morphism(squaring())
    h0 = canonical_height(cert, ProjPoint([1, 1]), target_width=1e-10)
    h2 = canonical_height(cert, ProjPoint([2, 1]), target_width=1e-10)
    with pytest.raises(ValueError):
        ratio_not_power(h0, h2, 2)


def test_ratio_soundness_spot_check_on_small_orbits():
    # the certifier must never certify a pair whose orbits provably intersect
    f = squaring()
    cert = certify_morphism(f)
    rng = random.Random(3)
    checked = 0
    while checked < 1000:
        a = rng.randint(2, 40)
        k = rng.randint(0, 3)
        x = ProjPoint([a, 1])
        y = ProjPoint([a ** (2 ** k), 1])  # y = f^k(x): orbits intersect
        hx = canonical_height(cert, x, target_width=1e-13)
        hy = canonical_height(cert, y, target_width=1e-13)
        assert ratio_not_power(hx, hy, 2) is None
        checked += 1


def test_tampered_interval_certificate_fails():
    cert = certify_morphism(squaring())
    h2 = canonical_height(cert, ProjPoint([2, 1]), target_width=1e-12)
    h3 = canonical_height(cert, ProjPoint([3, 1]), target_width=1e-12)
    c = ratio_not_power(h3, h2, 2)
    tampered = DisjointnessCertificate(
        scheme=c.scheme, variant=c.variant,
        payload={**c.payload, "K": c.payload["K"] + 1})
    assert verify_disjointness(tampered, {}) != []


# ---------------------------------------------------------------------------
# valuation multiplier selection
# ---------------------------------------------------------------------------

def test_multiplier_examples():
    l, proof = multiplier_avoiding_powers(Fraction(2), False, [3])
    assert l == 5
    l, proof = multiplier_avoiding_powers(Fraction(4), True, [2])
    assert l == 3
    l, proof = multiplier_avoiding_powers(Fraction(6, 5), True, [10, 12])
    assert l == 7


def test_multiplier_valuation_property():
    rng = random.Random(4)
    for _ in range(50):
        delta = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        ls = [rng.randint(1, 60) for _ in range(rng.randint(1, 4))]
        l, proof = multiplier_avoiding_powers(delta, True, ls)
        assert proof["prime"] == l
        for li in ls:
            ratio = Fraction(li, l) ** 2
            # direct re-check over a window of exponents
            for n in range(-64, 65):
                assert ratio != delta ** n


def test_exact_ratio_certificate():
    c = ratio_not_power_exact(Fraction(9, 1), Fraction(4), True, 3)
    assert verify_disjointness(c, {}) == []
    with pytest.raises(ValueError):
        ratio_not_power_exact(Fraction(4), Fraction(4), True, 3)


# ---------------------------------------------------------------------------
# prime-degree scheme
# ---------------------------------------------------------------------------

def test_sampler_examples():
    a = prime_degree_sampler(2, 1.0)
    assert a.degree == 3 and a.eisenstein_prime == 23
    b = prime_degree_sampler(1, 0.0)
    assert b.degree == 2 and b.eisenstein_prime == 2
    c = prime_degree_sampler(4, 0.0)
    assert c.degree == 5 and c.eisenstein_prime == 2


def test_pushforward_minpoly_matches_sympy_resultant():
    f = squaring()
    m = MultiPoly(("t",), {(3,): Fraction(1), (0,): Fraction(-23)})
    out = pushforward_minpoly(f, m)
    t, z = sympy.symbols("t z")
    res = sympy.resultant(t**3 - 23, z - t**2, t)
    expected = sympy.Poly(sympy.factor_list(res)[1][0][0], z).all_coeffs()
    got = sympy.Poly(sympy.sympify(str(out).replace("^", "**").replace("t", "z")), z).all_coeffs()
    # compare up to sign normalization
    e = [abs(x) for x in expected]
    g = [abs(int(x)) for x in got]
    assert g == e
    assert out.total_degree() == 3


def test_prime_degree_disjointness_example():
    f = squaring()
    x = prime_degree_sampler(2, 1.0)  # degree 3
    c = prime_degree_disjointness(f, x, targets=[1])
    assert verify_disjointness(c, {"map_degree": 2}) == []


def test_prime_degree_rejects_small_prime():
    f = cubing()
    x = prime_degree_sampler(2, 0.0)  # degree 3 = map degree
    with pytest.raises(ValueError):
        prime_degree_disjointness(f, x, targets=[])


def test_prime_degree_mutual_certificates():
    f = squaring()
    x3 = prime_degree_sampler(2, 0.0)
    x5 = prime_degree_sampler(3, 0.0)
    assert (x3.degree, x5.degree) == (3, 5)
    c1 = prime_degree_disjointness(f, x3, targets=[x5.degree])
    c2 = prime_degree_disjointness(f, x5, targets=[x3.degree])
    assert verify_disjointness(c1, {}) == []
    assert verify_disjointness(c2, {}) == []
    # orbit degrees of each stay divisors of the sampled prime (pushforward check)
    m = x3.minpoly
    for _ in range(3):
        m = pushforward_minpoly(f, m)
        assert m.total_degree() in (1, 3)


def test_tampered_degree_breaks_prime_scheme():
    f = squaring()
    x = prime_degree_sampler(2, 0.0)
    c = prime_degree_disjointness(f, x, targets=[1])
    bad = DisjointnessCertificate(
        scheme=c.scheme, variant=c.variant,
        payload={**c.payload, "targets": [3]})
    assert verify_disjointness(bad, {}) != []
    bad2 = DisjointnessCertificate(
        scheme=c.scheme, variant=c.variant,
        payload={**c.payload, "p": 9})
    assert verify_disjointness(bad2, {}) != []


# ---------------------------------------------------------------------------
# p-adic box sampler
# ---------------------------------------------------------------------------

def test_box_sampler_examples():
    P = padic_box_sampler(2, (3, 1))
    assert P == AffPoint([8, 2])
    Q = padic_box_sampler(2, (-2, 0))
    assert Q == AffPoint([Fraction(1, 4), 1])
    g = p2({(1, 0): 1, (0, 1): -1}, ("x", "y"))
    R = padic_box_sampler(2, (3, 1), avoid=[g])
    assert R == AffPoint([8, 2])  # 8 != 2 already avoids the diagonal


def test_box_sampler_valuations_exact():
    from arithdyn.exact_core import valuation
    rng = random.Random(5)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        a = (rng.randint(-4, 4), rng.randint(-4, 4), rng.randint(-4, 4))
        P = padic_box_sampler(p, a)
        for ai, x in zip(a, P.coords):
            assert valuation(x, p) == ai


def test_box_sampler_density_bound():
    # any single cubic in two variables is dodged within 100 candidates
    rng = random.Random(6)
    for _ in range(20):
        terms = {}
        for _ in range(4):
            e = (rng.randint(0, 2), rng.randint(0, 1))
            if sum(e) <= 3:
                terms[e] = Fraction(rng.randint(-5, 5))
        g = MultiPoly(("x", "y"), terms)
        if g.is_zero():
            continue
        P = padic_box_sampler(2, (1, 1), avoid=[g], fuel=100)
        values = {n: c for n, c in zip(("x", "y"), P.coords)}
        assert g.evaluate(values) != 0


# ---------------------------------------------------------------------------
# gap-window search
# ---------------------------------------------------------------------------

def identity_line():
    return LineMap([p2({(1, 0): 1}, ("S", "T")), p2({(0, 1): 1}, ("S", "T"))])


def test_gap_window_with_one_seed():
    cert = certify_morphism(squaring())
    res = gap_window_search(cert, identity_line(), [ProjPoint([3, 1])])
    assert res.height.value.lo > 0
    assert len(res.certificates) == 1
    assert verify_disjointness(res.certificates[0], {"map_degree": 2}) == []
    # the found height is excluded from the seed's geometric progression
    assert res.gap is not None
    assert res.gap.window[0] < res.gap.window[1]


def test_gap_window_empty_seeds():
    cert = certify_morphism(squaring())
    res = gap_window_search(cert, identity_line(), [])
    assert res.point == ProjPoint([1, -2])
    assert res.certificates == []


def test_gap_window_respects_avoid():
    cert = certify_morphism(squaring())
    avoid = [p2({(1, 0): 1, (0, 1): -2})]  # X - 2Y
    res = gap_window_search(cert, identity_line(), [ProjPoint([2, 1])], avoid=avoid)
    assert res.point != ProjPoint([2, 1])
    assert len(res.certificates) == 1
    assert verify_disjointness(res.certificates[0], {"map_degree": 2}) == []


def test_line_distortion_identity_zero():
    assert identity_line().distortion() == 0.0


def test_degenerate_line_rejected():
    with pytest.raises(ValueError):
        LineMap([p2({(1, 0): 1}, ("S", "T")), p2({(1, 0): 2}, ("S", "T"))])


# ---------------------------------------------------------------------------
# family builder
# ---------------------------------------------------------------------------

def test_family_height_ratio_k3():
    cert = certify_morphism(squaring())
    ctx = HeightRatioContext(cert)
    fam = family_builder(ctx, 3)
    assert fam.complete
    # oracle: the squaring map's canonical height is the exact Weil height,
    # so acceptance is forced: first positive-height points with
    # multiplicatively independent height values
    assert fam.points == [ProjPoint([1, -2]), ProjPoint([1, -3]), ProjPoint([1, -5])]
    assert len(fam.disjointness) == 3
    for c in fam.disjointness.values():
        assert verify_disjointness(c, {"map_degree": 2}) == []
    for m in fam.maximality:
        assert verify_maximality(m, {}) == []
    # sanity oracle: exact orbits stay pairwise disjoint at small depth
    orbits = []
    for pt in fam.points:
        pts, _ = orbit(squaring(), pt, 8)
        orbits.append(set(q.coords for q in pts))
    for i in range(3):
        for j in range(i + 1, 3):
            assert not (orbits[i] & orbits[j])


def test_family_k1_no_pairs():
    cert = certify_morphism(squaring())
    fam = family_builder(HeightRatioContext(cert), 1)
    assert fam.complete and len(fam.points) == 1
    assert fam.disjointness == {}
    assert len(fam.maximality) == 1


def test_family_respects_avoid_list():
    cert = certify_morphism(squaring())
    # 2X + Y vanishes at [1:-2], so the first usual member is skipped
    fam = family_builder(HeightRatioContext(cert), 2,
                         avoid=[p2({(1, 0): 2, (0, 1): 1})])
    assert ProjPoint([1, -2]) not in fam.points
    assert fam.complete
    assert fam.avoided != []


def test_family_prime_degree_scheme():
    f = squaring()
    cert = certify_morphism(f)
    ctx = PrimeDegreeContext(f, cert)
    fam = family_builder(ctx, 2)
    assert fam.complete
    degrees = [a.degree for a in fam.points]
    assert degrees == [3, 5]
    for c in fam.disjointness.values():
        assert verify_disjointness(c, {"map_degree": 2}) == []
    for m in fam.maximality:
        assert verify_maximality(m, {}) == []
