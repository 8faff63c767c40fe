"""Tests for Weil/local/algebraic heights and bounded-height enumeration."""

import itertools
import math
import random
from fractions import Fraction

import pytest
from mpmath import mp

from arithdyn.exact_core import MultiPoly, RealEnclosure, log_int_enclosure
from arithdyn.heights import (
    AffPoint,
    AlgebraicNumber,
    INFINITE_PLACE,
    FiniteLocalHeight,
    ProjPoint,
    algebraic_height,
    count_real_roots,
    height_from_local,
    is_eisenstein,
    local_height,
    northcott_enumerate,
    northcott_window,
    point_count,
    schanuel_ratio,
    weil_height,
)

T1 = ("t",)


def tpoly(*coeffs):
    return MultiPoly(T1, {(i,): Fraction(c) for i, c in enumerate(coeffs) if c})


# ---------------------------------------------------------------------------
# canonical projective representatives
# ---------------------------------------------------------------------------

def test_projpoint_canonicalization():
    assert ProjPoint([4, 6]).coords == (2, 3)
    assert ProjPoint([-1, 1]).coords == (1, -1)
    assert ProjPoint([0, -5]).coords == (0, 1)
    assert ProjPoint([Fraction(1, 2), Fraction(1, 3)]).coords == (3, 2)
    with pytest.raises(ValueError):
        ProjPoint([0, 0])


def test_weil_height_examples():
    e = weil_height(ProjPoint([3, 2]))
    assert e.lo <= math.log(3) <= e.hi
    e2 = weil_height(ProjPoint([4, 6]))  # canonicalizes to [2:3]
    assert e2.lo <= math.log(3) <= e2.hi
    e3 = weil_height(ProjPoint([1, 0]))
    assert e3.lo == e3.hi == 0.0


def test_weil_height_scaling_invariance():
    rng = random.Random(20)
    for _ in range(1000):
        coords = [rng.randint(-50, 50) for _ in range(3)]
        if all(c == 0 for c in coords):
            continue
        lam = rng.choice([-7, -2, 3, 5, 11])
        a = weil_height(ProjPoint(coords))
        b = weil_height(ProjPoint([lam * c for c in coords]))
        assert a.lo == b.lo and a.hi == b.hi


# ---------------------------------------------------------------------------
# local heights
# ---------------------------------------------------------------------------

def test_local_height_examples():
    P = AffPoint([Fraction(1, 8), 3])
    lh = local_height(P, 2)
    assert lh == FiniteLocalHeight(3, 2)

    Q = AffPoint([3, Fraction(1, 2)])
    arch = local_height(Q, INFINITE_PLACE)
    assert arch.lo <= math.log(3) <= arch.hi

    lh2 = local_height(Q, 2)
    assert lh2 == FiniteLocalHeight(1, 2)
    total = height_from_local(Q)
    w = weil_height(Q.to_projective())
    assert ProjPoint([6, 1, 2]) == Q.to_projective()
    assert total.intersects(w)


def test_local_height_rejects_composite_place():
    with pytest.raises(ValueError):
        local_height(AffPoint([1, 2]), 4)


def test_local_global_consistency():
    rng = random.Random(21)
    for _ in range(1000):
        P = AffPoint([
            Fraction(rng.randint(-60, 60), rng.randint(1, 60)),
            Fraction(rng.randint(-60, 60), rng.randint(1, 60)),
        ])
        total = height_from_local(P)
        w = weil_height(P.to_projective())
        assert total.intersects(w)


# ---------------------------------------------------------------------------
# algebraic numbers
# ---------------------------------------------------------------------------

def _mahler_reference(coeffs, prec=120):
    """Oracle: Mahler measure via numerically computed roots."""
    mp.prec = prec
    roots = mp.polyroots([mp.mpf(c) for c in reversed(coeffs)], maxsteps=200)
    m = mp.mpf(abs(coeffs[-1]))
    for r in roots:
        m *= max(1, abs(r))
    return mp.log(m)


def test_algebraic_height_sqrt2():
    alpha = AlgebraicNumber(tpoly(-2, 0, 1), (1, 2))
    h = algebraic_height(alpha, tol=1e-10)
    truth = math.log(2) / 2
    assert h.lo <= truth <= h.hi
    assert h.width() < 1e-9
    ref = _mahler_reference([-2, 0, 1]) / 2
    assert h.lo <= float(ref) <= h.hi


def test_algebraic_height_rational_point_consistency():
    alpha = AlgebraicNumber(tpoly(-3, 1), (2, 4))
    h = algebraic_height(alpha)
    w = weil_height(ProjPoint([3, 1]))
    assert h.intersects(w)


def test_algebraic_height_cbrt23():
    alpha = AlgebraicNumber(tpoly(-23, 0, 0, 1), (2, 3), eisenstein_prime=23)
    h = algebraic_height(alpha, tol=1e-10)
    truth = math.log(23) / 3
    assert h.lo <= truth <= h.hi
    assert h.width() < 1e-9
    ref = _mahler_reference([-23, 0, 0, 1]) / 3
    assert h.lo <= float(ref) <= h.hi


def test_algebraic_height_random_vs_root_oracle():
    rng = random.Random(22)
    done = 0
    while done < 10:
        coeffs = [rng.randint(-9, 9) for _ in range(rng.randint(2, 5))] + [rng.randint(1, 9)]
        f = tpoly(*coeffs)
        if f.total_degree() < 1:
            continue
        g = 0
        for c in coeffs:
            g = math.gcd(g, c)
        if g != 1:
            continue
        # needs one real root with a clean isolating interval; skip if none
        bound = 1 + max(abs(c) for c in coeffs)
        if count_real_roots(f, Fraction(-bound), Fraction(bound)) == 0:
            continue
        lo = Fraction(-bound)
        hi = Fraction(bound)
        while count_real_roots(f, lo, hi) > 1:
            mid = (lo + hi) / 2
            if count_real_roots(f, lo, mid) >= 1:
                hi = mid
            else:
                lo = mid
        try:
            alpha = AlgebraicNumber(f, (lo, hi))
        except ValueError:
            continue
        h = algebraic_height(alpha, tol=1e-9)
        actual = f.total_degree()
        ref = float(_mahler_reference([int(c) for c in _ascending(f)])) / actual
        assert h.lo - 1e-9 <= ref <= h.hi + 1e-9
        done += 1


def _ascending(f):
    d = f.total_degree()
    out = [0] * (d + 1)
    for (e,), c in f.terms.items():
        out[e] = int(c)
    return out


def test_eisenstein_check():
    assert is_eisenstein(tpoly(-2, 0, 1), 2)
    assert is_eisenstein(tpoly(-23, 0, 0, 1), 23)
    assert not is_eisenstein(tpoly(-4, 0, 1), 2)  # 4 divisible by p^2
    assert not is_eisenstein(tpoly(-6, 5, 1), 3)  # middle coefficient not divisible


def test_isolation_contract():
    with pytest.raises(ValueError):
        AlgebraicNumber(tpoly(-2, 0, 1), (-2, 2))  # two roots inside


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _oracle_points(N, T):
    """Independent brute-force oracle for P^N(Q) with H < T."""
    limit = math.ceil(T) - 1
    pts = set()
    for tup in itertools.product(range(-limit, limit + 1), repeat=N + 1):
        if all(a == 0 for a in tup):
            continue
        if max(abs(a) for a in tup) >= T:
            continue
        g = 0
        for a in tup:
            g = math.gcd(g, a)
        norm = tuple(a // g for a in tup)
        for a in norm:
            if a != 0:
                if a < 0:
                    norm = tuple(-b for b in norm)
                break
        pts.add(norm)
    return pts


def test_northcott_height_below_two_count_fixed_by_oracle():
    oracle = _oracle_points(1, 2)
    got = list(northcott_enumerate(1, 2))
    assert len(oracle) == 4  # oracle-fixed exact count for H < 2 on P^1
    assert set(p.coords for p in got) == oracle
    assert [p.coords for p in got] == sorted([p.coords for p in got], key=lambda c: (max(abs(a) for a in c), c))


def test_northcott_strict_bound_empty():
    assert list(northcott_enumerate(1, 1)) == []


def test_northcott_exhaustive_no_duplicates():
    for N, T in [(1, 50), (2, 12)]:
        got = [p.coords for p in northcott_enumerate(N, T)]
        assert len(got) == len(set(got))
        assert set(got) == _oracle_points(N, T)


def test_northcott_order_is_by_height_then_lex():
    seq = [p.coords for p in northcott_enumerate(1, 6)]
    keyed = sorted(seq, key=lambda c: (max(abs(a) for a in c), c))
    assert seq == keyed


def test_northcott_window():
    inside = list(northcott_window(1, 3, 5))
    assert all(3 <= p.multiplicative_height() < 5 for p in inside)
    full = [p.coords for p in northcott_enumerate(1, 5)]
    expected = [c for c in full if max(abs(a) for a in c) >= 3]
    assert [p.coords for p in inside] == expected


def test_schanuel_count_matches_oracle_small():
    count, ratio = schanuel_ratio(1, 2)
    assert count == len(_oracle_points(1, 2)) == 4
    assert ratio == Fraction(4, 4)


def test_schanuel_ratio_stabilizes_p1():
    _, r1 = schanuel_ratio(1, 60)
    _, r2 = schanuel_ratio(1, 120)
    assert abs(float(r1 - r2)) / float(r2) < 0.05


def test_schanuel_ratio_stabilizes_p2():
    _, r1 = schanuel_ratio(2, 16)
    _, r2 = schanuel_ratio(2, 32)
    assert abs(float(r1 - r2)) / float(r2) < 0.10


def test_point_count_monotone():
    assert point_count(1, 3) > point_count(1, 2)
