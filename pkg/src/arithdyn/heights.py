"""Heights of rational and algebraic points.

Projective points are stored on their canonical representative: coprime
integer coordinates whose first nonzero entry is positive.  With that
normalisation the multiplicative height is just max |coordinate| and the
logarithmic Weil height is its log, which we return as a certified enclosure.

Heights of algebraic numbers go through the Mahler measure of the minimal
polynomial, bounded by root-squaring in interval bigfloat arithmetic; the
L2-norm sandwich at each squaring level gives a two-sided certified bound
without ever isolating complex roots.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Sequence

from .exact_core import (
    MultiPoly,
    RealEnclosure,
    Rational,
    is_prime,
    log_fraction_enclosure,
    log_int_enclosure,
    poly_gcd,
    squarefree_part,
    valuation,
)


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

class ProjPoint:
    """Point of P^N(Q) on its canonical integer representative."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        vals = [Fraction(c) for c in coords]
        if all(v == 0 for v in vals):
            raise ValueError("projective point needs a nonzero coordinate")
        den = 1
        for v in vals:
            den = den * v.denominator // math.gcd(den, v.denominator)
        ints = [int(v * den) for v in vals]
        g = 0
        for n in ints:
            g = math.gcd(g, n)
        ints = [n // g for n in ints]
        for n in ints:
            if n != 0:
                if n < 0:
                    ints = [-m for m in ints]
                break
        self.coords = tuple(ints)

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def multiplicative_height(self) -> int:
        return max(abs(c) for c in self.coords)

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "[" + ":".join(str(c) for c in self.coords) + "]"


class AffPoint:
    """Point of A^N(Q), exact rational coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        self.coords = tuple(Fraction(c) for c in coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def to_projective(self) -> ProjPoint:
        """[x_1 : ... : x_N : 1] cleared to the canonical representative."""
        return ProjPoint(list(self.coords) + [Fraction(1)])

    def __eq__(self, other):
        return isinstance(other, AffPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


# ---------------------------------------------------------------------------
# Weil and local heights
# ---------------------------------------------------------------------------

def weil_height(x: ProjPoint) -> RealEnclosure:
    """log max |coordinate| on the canonical representative; always >= 0."""
    return log_int_enclosure(x.multiplicative_height())


class FiniteLocalHeight:
    """Exact finite local height m * log p (m a nonnegative integer)."""

    __slots__ = ("multiple", "prime")

    def __init__(self, multiple: int, prime: int):
        self.multiple = multiple
        self.prime = prime

    def enclosure(self) -> RealEnclosure:
        if self.multiple == 0:
            return RealEnclosure.zero()
        return log_int_enclosure(self.prime ** self.multiple)

    def __eq__(self, other):
        return (isinstance(other, FiniteLocalHeight)
                and (self.multiple, self.prime) == (other.multiple, other.prime))

    def __repr__(self):
        return f"{self.multiple}*log({self.prime})"


INFINITE_PLACE = "inf"


def local_height(P: AffPoint, v):
    """Local height log max(|x_i|_v, 1).

    Finite places return the exact answer as a FiniteLocalHeight; the
    archimedean place returns a certified enclosure.
    """
    if v == INFINITE_PLACE or v == math.inf:
        m = Fraction(1)
        for x in P.coords:
            if abs(x) > m:
                m = abs(x)
        return log_fraction_enclosure(m)
    p = int(v)
    if not is_prime(p):
        raise ValueError(f"finite place must be prime, got {v}")
    worst = 0
    for x in P.coords:
        if x == 0:
            continue
        m = -valuation(x, p)
        if m > worst:
            worst = m
    return FiniteLocalHeight(worst, p)


def denominator_primes(P: AffPoint) -> list[int]:
    """Primes where P has a nontrivial finite local height."""
    den = 1
    for x in P.coords:
        den = den * x.denominator // math.gcd(den, x.denominator)
    out = []
    d = 2
    n = den
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def height_from_local(P: AffPoint) -> RealEnclosure:
    """Sum of all local heights (finite support plus the real place)."""
    total = local_height(P, INFINITE_PLACE)
    for p in denominator_primes(P):
        total = total + local_height(P, p).enclosure()
    return total


# ---------------------------------------------------------------------------
# algebraic numbers
# ---------------------------------------------------------------------------

def _univar_int_coeffs(f: MultiPoly) -> list[int]:
    if len(f.variables) != 1:
        raise ValueError("expected a univariate polynomial")
    d = f.total_degree()
    out = [0] * (d + 1)
    for (e,), c in f.terms.items():
        if c.denominator != 1:
            raise ValueError("minimal polynomial must have integer coefficients")
        out[e] = c.numerator
    return out


def _sturm_chain(coeffs: list[Fraction]) -> list[list[Fraction]]:
    def deriv(c):
        return [c[i] * i for i in range(1, len(c))]

    def rem(a, b):
        a = a[:]
        while len(a) >= len(b) and any(a):
            while a and a[-1] == 0:
                a.pop()
            if len(a) < len(b):
                break
            q = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] -= q * bc
            a.pop()
        while a and a[-1] == 0:
            a.pop()
        return a

    chain = [coeffs[:], deriv(coeffs)]
    while chain[-1]:
        r = rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if c]


def _eval_coeffs(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign_changes(chain, x):
    signs = []
    for c in chain:
        v = _eval_coeffs(c, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(f: MultiPoly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of f in (lo, hi], via a Sturm chain."""
    name = f.variables[0]
    sf = squarefree_part(f, name)
    coeffs = [Fraction(0)] * (sf.total_degree() + 1)
    for (e,), c in sf.terms.items():
        coeffs[e] = c
    chain = _sturm_chain(coeffs)
    return _sign_changes(chain, Fraction(lo)) - _sign_changes(chain, Fraction(hi))


class AlgebraicNumber:
    """Real algebraic number given by an integer minimal polynomial plus an
    isolating rational interval containing exactly one of its roots.

    Irreducibility is the constructor's contract; the built-in samplers only
    produce Eisenstein-certified polynomials, for which the witness prime is
    recorded and re-checkable.
    """

    __slots__ = ("minpoly", "isolation", "eisenstein_prime")

    def __init__(self, minpoly: MultiPoly, isolation: tuple, eisenstein_prime: int | None = None):
        coeffs = _univar_int_coeffs(minpoly)
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        g = 0
        for c in coeffs:
            g = math.gcd(g, c)
        if g != 1:
            raise ValueError("minimal polynomial must have content 1")
        if coeffs[-1] < 0:
            raise ValueError("leading coefficient must be positive")
        lo, hi = Fraction(isolation[0]), Fraction(isolation[1])
        if count_real_roots(minpoly, lo, hi) != 1:
            raise ValueError("isolating interval must contain exactly one root")
        if eisenstein_prime is not None and not _is_eisenstein(coeffs, eisenstein_prime):
            raise ValueError("polynomial is not Eisenstein at the given prime")
        self.minpoly = minpoly
        self.isolation = (lo, hi)
        self.eisenstein_prime = eisenstein_prime

    @property
    def degree(self) -> int:
        return self.minpoly.total_degree()

    def refine(self, width: Fraction) -> tuple:
        """Shrink the isolating interval below the requested width by bisection."""
        lo, hi = self.isolation
        while hi - lo > width:
            mid = (lo + hi) / 2
            if count_real_roots(self.minpoly, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        self.isolation = (lo, hi)
        return self.isolation

    def __repr__(self):
        lo, hi = self.isolation
        return f"AlgebraicNumber({self.minpoly}, in [{lo}, {hi}])"


def _is_eisenstein(coeffs: list[int], p: int) -> bool:
    if not is_prime(p):
        return False
    if coeffs[-1] % p == 0:
        return False
    if any(c % p for c in coeffs[:-1]):
        return False
    return coeffs[0] % (p * p) != 0


def is_eisenstein(minpoly: MultiPoly, p: int) -> bool:
    """Eisenstein criterion at p (certifies irreducibility over Q)."""
    return _is_eisenstein(_univar_int_coeffs(minpoly), p)


def algebraic_height(alpha: AlgebraicNumber, tol: float = 1e-10) -> RealEnclosure:
    """Certified enclosure of the absolute logarithmic height of alpha.

    h(alpha) = (1/deg) log M(minpoly) with M the Mahler measure.  Each
    root-squaring step squares M, and the L2 norm pins M within a factor
    2^deg, so k steps leave an uncertainty of deg*log2/2^k.  Coefficients
    are interval bigfloats: exponents grow doubly exponentially but stay
    exact-width-certified.
    """
    from mpmath import iv

    coeffs = _univar_int_coeffs(alpha.minpoly)
    n = len(coeffs) - 1
    levels = max(1, math.ceil(math.log2(2 * n * math.log(2) / tol)))

    old = iv.prec
    try:
        iv.prec = 120 + 2 * levels
        cur = [iv.mpf(c) for c in coeffs]
        for _ in range(levels):
            deg = len(cur) - 1
            prod = [iv.mpf(0)] * (2 * deg + 1)
            for i, a in enumerate(cur):
                if a == 0:
                    continue
                for j, b in enumerate(cur):
                    sign = -1 if j % 2 else 1
                    prod[i + j] += a * b * sign
            cur = [prod[2 * k] for k in range(deg + 1)]
        norm_sq = iv.mpf(0)
        for c in cur:
            norm_sq += c * c
        if float(norm_sq.a) <= 0:
            raise ArithmeticError("precision exhausted in Mahler-measure bound")
        log_norm = iv.log(norm_sq) / 2
        scale = 1 << levels
        upper = float(log_norm.b) / scale
        lower = float(log_norm.a) / scale - n * math.log(2) / scale
    finally:
        iv.prec = old

    # Mahler measure of a nonzero integer polynomial is >= 1, so log M >= 0
    pad = 1e-14 * max(1.0, abs(upper))
    lo = max(lower - pad, 0.0)
    hi = upper + pad
    return RealEnclosure(lo / n, hi / n)


# ---------------------------------------------------------------------------
# bounded-height enumeration
# ---------------------------------------------------------------------------

def _canonical_tuples_of_height(n_coords: int, m: int) -> Iterator[tuple]:
    """Canonical coprime tuples with max |entry| exactly m, lexicographic order.

    Canonical means: first nonzero entry positive.  Only the surface
    max = m is walked, so streaming heights 1..T costs O(T^(N+1)) overall.
    """

    def rec(prefix: list, started: bool, hit: bool, remaining: int):
        if remaining == 0:
            if hit:
                yield tuple(prefix)
            return
        if not started:
            lo = 0  # leading entries before the first nonzero must be 0, then positive
        else:
            lo = -m
        for a in range(lo, m + 1):
            now_started = started or a != 0
            if not started and a == 0:
                yield from rec(prefix + [0], False, hit, remaining - 1)
                continue
            if not started and a < 0:
                continue
            # feasibility: max must reach m somewhere
            if not (hit or abs(a) == m) and remaining == 1:
                continue
            yield from rec(prefix + [a], now_started, hit or abs(a) == m, remaining - 1)

    yield from rec([], False, False, n_coords)


def northcott_enumerate(N: int, T) -> Iterator[ProjPoint]:
    """All points of P^N(Q) with multiplicative height < T, each exactly once,
    ordered by height then lexicographically on canonical coordinates."""
    T = Fraction(T)
    if T < 1:
        return
    m = 1
    while m < T:
        for tup in _canonical_tuples_of_height(N + 1, m):
            g = 0
            for a in tup:
                g = math.gcd(g, a)
            if g == 1:
                yield ProjPoint(tup)
        m += 1


def northcott_window(N: int, lo, hi) -> Iterator[ProjPoint]:
    """Points with multiplicative height in the half-open window [lo, hi)."""
    lo = Fraction(lo)
    hi = Fraction(hi)
    m = max(1, math.ceil(lo))
    while m < hi:
        if m >= lo:
            for tup in _canonical_tuples_of_height(N + 1, m):
                g = 0
                for a in tup:
                    g = math.gcd(g, a)
                if g == 1:
                    yield ProjPoint(tup)
        m += 1


def point_count(N: int, T) -> int:
    """|{x in P^N(Q) : H(x) < T}| by exact enumeration."""
    T = Fraction(T)
    count = 0
    m = 1
    while m < T:
        for tup in _canonical_tuples_of_height(N + 1, m):
            g = 0
            for a in tup:
                g = math.gcd(g, a)
            if g == 1:
                count += 1
        m += 1
    return count


def schanuel_ratio(N: int, T) -> tuple[int, Fraction]:
    """Exact point count below T and the ratio count / T^(N+1).

    The ratio tends to a positive constant as T grows; we report it for
    convergence inspection and assert no closed-form value.
    """
    if Fraction(T) < 2:
        raise ValueError("schanuel_ratio needs T >= 2")
    count = point_count(N, T)
    return count, Fraction(count) / (Fraction(T) ** (N + 1))
