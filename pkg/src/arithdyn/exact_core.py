"""Exact arbitrary-precision arithmetic substrate.

Rationals are ``fractions.Fraction`` (reduced, positive denominator, 0 = 0/1,
which is exactly the representation contract the rest of the package relies
on).  Multivariate polynomials are sparse dictionaries mapping exponent
tuples to nonzero Fraction coefficients.  Certified real numbers are closed
floating-point intervals with an explicit outward bump after every operation,
so every enclosure produced here contains the mathematically exact value.

Everything in this module is immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Rational = Fraction

_INF = math.inf


# ---------------------------------------------------------------------------
# primality (deterministic far beyond 2**64, which is all we need at desk scale)
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Miller-Rabin with these bases is a proof of primality for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (exact for every n below 3.3e24)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Least prime strictly greater than n."""
    k = n + 1
    if k <= 2:
        return 2
    if k % 2 == 0:
        k += 1
    while not is_prime(k):
        k += 2
    return k


def primes() -> Iterator[int]:
    """Unbounded increasing stream of primes."""
    p = 2
    while True:
        yield p
        p = next_prime(p)


def prime_factors(n: int) -> dict[int, int]:
    """Factor |n| by trial division; desk-scale inputs only."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# p-adic valuation
# ---------------------------------------------------------------------------

class InfiniteValuation:
    """Sentinel for v_p(0).  Compares above every integer; never an int."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "VALUATION_INFINITY"

    def __gt__(self, other):
        return not isinstance(other, InfiniteValuation)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, InfiniteValuation)

    def __eq__(self, other):
        return isinstance(other, InfiniteValuation)

    def __hash__(self):
        return hash("VALUATION_INFINITY")


VALUATION_INFINITY = InfiniteValuation()


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(q: Rational | int, p: int):
    """v_p(q): exponent of the prime p in the rational q.

    Returns VALUATION_INFINITY for q = 0.  Additive on products.
    """
    if not is_prime(p):
        raise ValueError(f"valuation requires a prime, got {p}")
    q = Fraction(q)
    if q == 0:
        return VALUATION_INFINITY
    if q.numerator % p == 0:
        return _int_valuation(q.numerator, p)
    return -_int_valuation(q.denominator, p)


# ---------------------------------------------------------------------------
# multivariate polynomials
# ---------------------------------------------------------------------------

def _gcd_many(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, v)
        if g == 1:
            break
    return g


def _lcm_many(values: Iterable[int]) -> int:
    l = 1
    for v in values:
        l = l * v // math.gcd(l, v)
    return l


class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    terms maps exponent tuples (one entry per variable, in the order of
    ``variables``) to nonzero Fractions.  The zero polynomial has no terms.
    Binary operations require identical variable tuples.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Rational] | None = None):
        self.variables = tuple(variables)
        nv = len(self.variables)
        clean: dict[tuple, Fraction] = {}
        if terms:
            for exps, c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                exps = tuple(exps)
                if len(exps) != nv or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent tuple {exps} for variables {self.variables}")
                clean[exps] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "MultiPoly":
        c = Fraction(c)
        if c == 0:
            return cls.zero(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        variables = tuple(variables)
        idx = variables.index(name)
        e = [0] * len(variables)
        e[idx] = 1
        return cls(variables, {tuple(e): Fraction(1)})

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Max total degree of stored terms; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        i = self.variables.index(name)
        return max(e[i] for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coefficient(self, exps: tuple) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def leading_term(self) -> tuple[tuple, Fraction]:
        """Leading term under lexicographic order on exponent tuples."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.variables == other.variables
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly(self.variables, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) - c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly(self.variables, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        if c == 0:
            return MultiPoly.zero(self.variables)
        return MultiPoly(self.variables, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.variables)
        if len(self.terms) * len(other.terms) <= 4096:
            return self._mul_naive(other)
        return _mul_fast(self, other)

    def _mul_naive(self, other: "MultiPoly") -> "MultiPoly":
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return MultiPoly(self.variables, out)

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- evaluation and substitution ------------------------------------------

    def evaluate(self, values: Mapping[str, Rational]) -> Fraction:
        """Exact evaluation; every variable must be assigned."""
        vals = [Fraction(values[v]) for v in self.variables]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def substitute(self, mapping: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Substitute polynomials for variables (full composition).

        Every variable of self must be mapped; all images must share one
        variable tuple.  Power caches keep repeated exponents cheap.
        """
        images = [mapping[v] for v in self.variables]
        tvars = images[0].variables
        for im in images:
            if im.variables != tvars:
                raise ValueError("substitution images must share variables")
        caches: list[dict[int, MultiPoly]] = [dict() for _ in images]

        def power(i: int, k: int) -> MultiPoly:
            cache = caches[i]
            if k in cache:
                return cache[k]
            if k == 0:
                r = MultiPoly.constant(tvars, 1)
            elif k == 1:
                r = images[i]
            else:
                half = power(i, k // 2)
                r = half * half
                if k & 1:
                    r = r * images[i]
            cache[k] = r
            return r

        total = MultiPoly.zero(tvars)
        for e, c in self.terms.items():
            term = MultiPoly.constant(tvars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def rename(self, variables: Sequence[str]) -> "MultiPoly":
        if len(variables) != len(self.variables):
            raise ValueError("rename must preserve arity")
        return MultiPoly(variables, self.terms)

    def extend(self, variables: Sequence[str]) -> "MultiPoly":
        """View this polynomial in a superset of variables (appended at the end)."""
        variables = tuple(variables)
        if variables[:len(self.variables)] != self.variables:
            raise ValueError("extend only appends variables")
        pad = (0,) * (len(variables) - len(self.variables))
        return MultiPoly(variables, {e + pad: c for e, c in self.terms.items()})

    def derivative(self, name: str) -> "MultiPoly":
        i = self.variables.index(name)
        out: dict[tuple, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
        return MultiPoly(self.variables, out)

    # -- normal forms ---------------------------------------------------------

    def content_and_primitive(self) -> tuple[Fraction, "MultiPoly"]:
        """Write self = c * P with c > 0 rational and P integer-coprime.

        The sign of P's coefficients matches self; c carries only magnitude.
        """
        if not self.terms:
            return Fraction(0), self
        num_gcd = _gcd_many(abs(c.numerator) for c in self.terms.values())
        den_lcm = _lcm_many(c.denominator for c in self.terms.values())
        c = Fraction(num_gcd, den_lcm)
        prim = MultiPoly(self.variables, {e: v / c for e, v in self.terms.items()})
        return c, prim

    def normalized(self) -> "MultiPoly":
        """Content-1 representative with positive lex-leading coefficient."""
        if not self.terms:
            return self
        _, prim = self.content_and_primitive()
        _, lead = prim.leading_term()
        if lead < 0:
            prim = -prim
        return prim

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact polynomial quotient; raises if the division is not exact."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return self
        # monomial divisor: strip exponents directly
        if divisor.is_monomial():
            (de, dc), = divisor.terms.items()
            out = {}
            for e, c in self.terms.items():
                ne = tuple(a - b for a, b in zip(e, de))
                if any(x < 0 for x in ne):
                    raise ValueError("division is not exact")
                out[ne] = c / dc
            return MultiPoly(self.variables, out)
        rem = self
        out: dict[tuple, Fraction] = {}
        dlead, dlc = divisor.leading_term()
        while rem.terms:
            rlead, rlc = rem.leading_term()
            qe = tuple(a - b for a, b in zip(rlead, dlead))
            if any(x < 0 for x in qe):
                raise ValueError("division is not exact")
            qc = rlc / dlc
            out[qe] = out.get(qe, Fraction(0)) + qc
            rem = rem - divisor._mul_naive(MultiPoly(self.variables, {qe: qc}))
        return MultiPoly(self.variables, out)

    # -- display --------------------------------------------------------------

    def _term_str(self, e: tuple, c: Fraction) -> str:
        parts = []
        for name, k in zip(self.variables, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        if not parts:
            return str(c)
        body = "*".join(parts)
        if c == 1:
            return body
        if c == -1:
            return f"-{body}"
        return f"{c}*{body}"

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), reverse=True)
        s = self._term_str(*items[0])
        for e, c in items[1:]:
            t = self._term_str(e, c)
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s

    def __repr__(self):
        return f"MultiPoly({self.variables}, {self})"


# ---------------------------------------------------------------------------
# fast multiplication: Kronecker packing into Python big integers
# ---------------------------------------------------------------------------

_KRONECKER_SLOT_LIMIT = 8_000_000


def _mul_fast(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    # a common-degree homogeneous pair can drop its last variable; the Newton
    # polytope of the product then lives one dimension lower
    if (len(a.variables) >= 2 and a.is_homogeneous() and b.is_homogeneous()
            and a.terms and b.terms):
        da = a.total_degree()
        db = b.total_degree()
        a2 = MultiPoly(a.variables[:-1], {e[:-1]: c for e, c in a.terms.items()})
        b2 = MultiPoly(b.variables[:-1], {e[:-1]: c for e, c in b.terms.items()})
        prod = a2 * b2
        d = da + db
        terms = {e + (d - sum(e),): c for e, c in prod.terms.items()}
        return MultiPoly(a.variables, terms)

    nv = len(a.variables)
    radix = []
    for i in range(nv):
        da = max(e[i] for e in a.terms)
        db = max(e[i] for e in b.terms)
        radix.append(da + db + 1)
    slots = 1
    for r in radix:
        slots *= r
    if slots > _KRONECKER_SLOT_LIMIT:
        return a._mul_naive(b)

    strides = [0] * nv
    acc = 1
    for i in range(nv - 1, -1, -1):
        strides[i] = acc
        acc *= radix[i]

    den_a = _lcm_many(c.denominator for c in a.terms.values())
    den_b = _lcm_many(c.denominator for c in b.terms.values())

    ia = {e: int(c * den_a) for e, c in a.terms.items()}
    ib = {e: int(c * den_b) for e, c in b.terms.items()}

    max_a = max(abs(c) for c in ia.values())
    max_b = max(abs(c) for c in ib.values())
    bound = min(len(ia), len(ib)) * max_a * max_b
    nbytes = (bound.bit_length() + 2 + 7) // 8
    bits = nbytes * 8
    half = 1 << (bits - 1)

    def pack(coeffs: dict[tuple, int]) -> int:
        pos = bytearray(slots * nbytes)
        neg = bytearray(slots * nbytes)
        for e, c in coeffs.items():
            idx = 0
            for k, s in zip(e, strides):
                idx += k * s
            off = idx * nbytes
            if c > 0:
                pos[off:off + nbytes] = c.to_bytes(nbytes, "little")
            else:
                neg[off:off + nbytes] = (-c).to_bytes(nbytes, "little")
        return int.from_bytes(bytes(pos), "little") - int.from_bytes(bytes(neg), "little")

    product = pack(ia) * pack(ib)

    # shift every slot by `half` so all digits become nonnegative, then slice
    offset_pattern = half.to_bytes(nbytes, "little") * slots
    offset = int.from_bytes(offset_pattern, "little")
    shifted = product + offset
    raw = shifted.to_bytes(slots * nbytes + 16, "little")

    scale = Fraction(1, den_a * den_b)
    half_bytes = half.to_bytes(nbytes, "little")
    out: dict[tuple, Fraction] = {}
    for idx in range(slots):
        off = idx * nbytes
        chunk = raw[off:off + nbytes]
        if chunk == half_bytes:
            continue
        digit = int.from_bytes(chunk, "little") - half
        if digit == 0:
            continue
        # idx = sum e_i * strides_i with strides decreasing, so peel greedily
        rem = idx
        e = [0] * nv
        for i in range(nv):
            e[i] = rem // strides[i]
            rem -= e[i] * strides[i]
        out[tuple(e)] = digit * scale
    return MultiPoly(a.variables, out)


# ---------------------------------------------------------------------------
# gcd
# ---------------------------------------------------------------------------

def _univar_coeff_list(f: MultiPoly, name: str) -> list[MultiPoly]:
    """Coefficients of f as a polynomial in `name` (index = power of name)."""
    i = f.variables.index(name)
    d = f.degree_in(name)
    coeffs = [dict() for _ in range(d + 1)]
    for e, c in f.terms.items():
        ne = list(e)
        k = ne[i]
        ne[i] = 0
        coeffs[k][tuple(ne)] = c
    return [MultiPoly(f.variables, t) for t in coeffs]


def _from_coeff_list(coeffs: list[MultiPoly], name: str, variables: tuple) -> MultiPoly:
    i = variables.index(name)
    out: dict[tuple, Fraction] = {}
    for k, p in enumerate(coeffs):
        for e, c in p.terms.items():
            ne = list(e)
            ne[i] += k
            out[tuple(ne)] = out.get(tuple(ne), Fraction(0)) + c
    return MultiPoly(variables, out)


def _pseudo_rem(f: list[MultiPoly], g: list[MultiPoly]) -> list[MultiPoly]:
    """Pseudo-remainder of coefficient lists (univariate over a poly ring)."""
    f = list(f)
    dg = len(g) - 1
    lg = g[-1]
    while len(f) - 1 >= dg and any(not c.is_zero() for c in f):
        while f and f[-1].is_zero():
            f.pop()
        if len(f) - 1 < dg or not f:
            break
        lf = f[-1]
        shift = len(f) - 1 - dg
        f = [c * lg for c in f]
        for j in range(dg + 1):
            f[shift + j] = f[shift + j] - g[j] * lf
        f.pop()
        while f and f[-1].is_zero():
            f.pop()
    return f


def _poly_content(coeffs: list[MultiPoly]) -> MultiPoly:
    g = None
    for c in coeffs:
        if c.is_zero():
            continue
        g = c if g is None else poly_gcd(g, c)
    if g is None:
        raise ValueError("content of zero polynomial")
    return g


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Polynomial gcd, normalised to content 1 with positive lex-leading coefficient.

    gcd(0, g) is the normalised g; gcd(0, 0) is an error.  Uses a primitive
    pseudo-remainder sequence, recursing on the coefficient ring for
    multivariate inputs.
    """
    if f.variables != g.variables:
        raise ValueError("gcd requires a common variable set")
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()

    # monomial fast path: exponentwise min, used heavily by map reduction
    if f.is_monomial() or g.is_monomial():
        mono = f if f.is_monomial() else g
        other = g if f.is_monomial() else f
        (me, _), = mono.terms.items()
        mins = list(me)
        for e in other.terms:
            mins = [min(a, b) for a, b in zip(mins, e)]
        return MultiPoly(f.variables, {tuple(mins): Fraction(1)})

    active = [v for v in f.variables if f.degree_in(v) > 0 or g.degree_in(v) > 0]
    if not active:
        return MultiPoly.constant(f.variables, 1)

    # pick the active variable of least combined degree as the main one
    main = min(active, key=lambda v: f.degree_in(v) + g.degree_in(v))

    fc = _univar_coeff_list(f, main)
    gc = _univar_coeff_list(g, main)
    if len(fc) < len(gc):
        fc, gc = gc, fc

    if len(gc) == 1:
        # g is free of the main variable: gcd divides the content of f
        cont_f = _poly_content(fc)
        return poly_gcd(cont_f, gc[0])

    cont_f = _poly_content(fc)
    cont_g = _poly_content(gc)
    a = [c.exact_div(cont_f) for c in fc]
    b = [c.exact_div(cont_g) for c in gc]

    while True:
        r = _pseudo_rem(a, b)
        if not r or all(c.is_zero() for c in r):
            break
        if len(r) == 1:
            # nonzero constant remainder (in the main variable): coprime parts
            b = [MultiPoly.constant(f.variables, 1)]
            break
        cont_r = _poly_content(r)
        a, b = b, [c.exact_div(cont_r) for c in r]

    cont = poly_gcd(cont_f, cont_g)
    if len(b) == 1 and not b[0].is_zero():
        return cont.normalized()
    pp = _from_coeff_list(b, main, f.variables)
    return (pp.normalized() * cont).normalized()


def squarefree_part(f: MultiPoly, name: str) -> MultiPoly:
    """f / gcd(f, df/dname), normalised; f must be univariate in name."""
    df = f.derivative(name)
    if df.is_zero():
        return f.normalized()
    g = poly_gcd(f, df)
    return f.exact_div(g).normalized()


# ---------------------------------------------------------------------------
# resultants and exact linear algebra
# ---------------------------------------------------------------------------

def _bareiss_det(rows: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    m = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def sylvester_resultant_coeffs(fc: Sequence[Rational], gc: Sequence[Rational]) -> Fraction:
    """Resultant from coefficient lists (ascending powers, formal degrees fixed
    by list length).  Callers that need a formal degree larger than the actual
    one pass explicit trailing zeros."""
    m = len(fc) - 1
    n = len(gc) - 1
    if m < 0 or n < 0:
        raise ValueError("empty coefficient list")
    if m == 0 and n == 0:
        return Fraction(1)
    if m == 0:
        return Fraction(fc[0]) ** n
    if n == 0:
        return Fraction(gc[0]) ** m
    den_f = _lcm_many(Fraction(c).denominator for c in fc)
    den_g = _lcm_many(Fraction(c).denominator for c in gc)
    fi = [int(Fraction(c) * den_f) for c in fc]
    gi = [int(Fraction(c) * den_g) for c in gc]
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(fi)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(gi)):
            row[i + j] = c
        rows.append(row)
    det = _bareiss_det(rows)
    return Fraction(det, den_f ** n * den_g ** m)


def resultant(f: MultiPoly, g: MultiPoly) -> Fraction:
    """Sylvester resultant of two univariate polynomials in the same variable.

    Zero exactly when f and g share a root in the algebraic closure.
    """
    if f.variables != g.variables:
        raise ValueError("resultant requires a common variable")
    active = [v for v in f.variables if f.degree_in(v) > 0 or g.degree_in(v) > 0]
    if len(active) > 1:
        raise ValueError("resultant requires univariate inputs")
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial")
    if not active:
        return Fraction(1)
    name = active[0]
    fc = [c.coefficient((0,) * len(f.variables)) for c in _univar_coeff_list(f, name)]
    gc = [c.coefficient((0,) * len(g.variables)) for c in _univar_coeff_list(g, name)]
    return sylvester_resultant_coeffs(fc, gc)


def exact_linear_solve(A: Sequence[Sequence[Rational]], b: Sequence[Rational]):
    """One exact solution of A x = b, or None when the system is inconsistent.

    A may be rectangular; free variables are fixed at 0, which makes the
    returned solution deterministic.  The result is verified by substitution.
    """
    rows = len(A)
    if rows != len(b):
        raise ValueError("dimension mismatch between A and b")
    cols = len(A[0]) if rows else 0
    for row in A:
        if len(row) != cols:
            raise ValueError("ragged matrix")
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]

    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append((r, c))
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if m[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for (i, c) in pivots:
        x[c] = m[i][cols]
    for row, y in zip(A, b):
        if sum(Fraction(a) * v for a, v in zip(row, x)) != Fraction(y):
            return None
    return x


# ---------------------------------------------------------------------------
# certified real enclosures
# ---------------------------------------------------------------------------

def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


class RealEnclosure:
    """Closed interval [lo, hi] of doubles certified to contain a real value.

    Arithmetic rounds outward by one ulp per endpoint, so results stay sound
    on top of round-to-nearest hardware.  Library functions (log, exp) get a
    two-ulp bump to absorb libm's error.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float):
        if not (lo <= hi) or math.isnan(lo) or math.isnan(hi):
            raise ValueError(f"invalid enclosure [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- constructors ---------------------------------------------------------

    @classmethod
    def exact(cls, x) -> "RealEnclosure":
        """Tightest enclosure of an exact rational (or int/float) value."""
        if isinstance(x, float):
            return cls(x, x)
        q = Fraction(x)
        f = float(q)
        if math.isinf(f):
            raise OverflowError("value out of double range")
        fq = Fraction(f)
        if fq == q:
            return cls(f, f)
        if fq < q:
            return cls(f, _up(f))
        return cls(_down(f), f)

    @classmethod
    def zero(cls) -> "RealEnclosure":
        return cls(0.0, 0.0)

    # -- queries ---------------------------------------------------------------

    def width(self) -> float:
        return _up(self.hi - self.lo)

    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x) -> bool:
        q = Fraction(x) if not isinstance(x, float) else Fraction(x)
        return Fraction(self.lo) <= q <= Fraction(self.hi)

    def intersects(self, other: "RealEnclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def strictly_positive(self) -> bool:
        return self.lo > 0.0

    def strictly_negative(self) -> bool:
        return self.hi < 0.0

    def __repr__(self):
        return f"RealEnclosure({self.lo!r}, {self.hi!r})"

    def __str__(self):
        return f"[{self.lo:.17g}, {self.hi:.17g}]"

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other) -> "RealEnclosure":
        other = _as_enclosure(other)
        return RealEnclosure(_down(self.lo + other.lo), _up(self.hi + other.hi))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other) -> "RealEnclosure":
        other = _as_enclosure(other)
        return RealEnclosure(_down(self.lo - other.hi), _up(self.hi - other.lo))

    def __rsub__(self, other):
        return _as_enclosure(other).__sub__(self)

    def __neg__(self) -> "RealEnclosure":
        return RealEnclosure(-self.hi, -self.lo)

    def __mul__(self, other) -> "RealEnclosure":
        other = _as_enclosure(other)
        prods = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return RealEnclosure(_down(min(prods)), _up(max(prods)))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other) -> "RealEnclosure":
        other = _as_enclosure(other)
        if other.lo <= 0.0 <= other.hi:
            raise ZeroDivisionError("division by an enclosure containing zero")
        quots = (self.lo / other.lo, self.lo / other.hi,
                 self.hi / other.lo, self.hi / other.hi)
        return RealEnclosure(_down(min(quots)), _up(max(quots)))

    def __abs__(self) -> "RealEnclosure":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealEnclosure(0.0, max(-self.lo, self.hi))

    def union(self, other: "RealEnclosure") -> "RealEnclosure":
        return RealEnclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def max_with(self, other) -> "RealEnclosure":
        other = _as_enclosure(other)
        return RealEnclosure(max(self.lo, other.lo), max(self.hi, other.hi))

    def exp(self) -> "RealEnclosure":
        lo = _down(_down(math.exp(self.lo)))
        hi = _up(_up(math.exp(self.hi)))
        return RealEnclosure(max(lo, 0.0), hi)

    def log(self) -> "RealEnclosure":
        if self.lo <= 0:
            raise ValueError("log of an enclosure touching zero")
        return RealEnclosure(_down(_down(math.log(self.lo))),
                             _up(_up(math.log(self.hi))))


def _as_enclosure(x) -> RealEnclosure:
    if isinstance(x, RealEnclosure):
        return x
    return RealEnclosure.exact(x)


# natural log of 2 with a two-ulp cushion around the libm value
_L2 = math.log(2.0)
LOG2_ENCLOSURE = RealEnclosure(_down(_down(_L2)), _up(_up(_L2)))


def int_enclosure(n: int) -> RealEnclosure:
    """Enclosure of an arbitrary-size integer."""
    f = float(n) if abs(n) < (1 << 53) else None
    if f is not None:
        return RealEnclosure(f, f)
    return RealEnclosure.exact(Fraction(n))


def log_int_enclosure(n: int) -> RealEnclosure:
    """Certified enclosure of log n for a positive integer of any size."""
    if n <= 0:
        raise ValueError("log of a nonpositive integer")
    if n == 1:
        return RealEnclosure.zero()
    L = n.bit_length()
    if L <= 53:
        v = math.log(float(n))
        return RealEnclosure(_down(_down(v)), _up(_up(v)))
    s = L - 53
    m = n >> s
    # m*2^s <= n < (m+1)*2^s
    lo_m = math.log(float(m))
    hi_m = math.log(float(m + 1))
    lo = RealEnclosure(_down(_down(lo_m)), _up(_up(lo_m)))
    hi = RealEnclosure(_down(_down(hi_m)), _up(_up(hi_m)))
    shift = int_enclosure(s) * LOG2_ENCLOSURE
    return RealEnclosure((lo + shift).lo, (hi + shift).hi)


def log_fraction_enclosure(q) -> RealEnclosure:
    """Certified enclosure of log q for a positive rational q."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log of a nonpositive rational")
    return log_int_enclosure(q.numerator) - log_int_enclosure(q.denominator)


def log_fraction_hp(q, prec_bits: int = 200) -> RealEnclosure:
    """High-precision certified log via interval bigfloats, collapsed to doubles.

    Used when a caller's tolerance is too tight for the plain double path;
    the result is still a double interval but with endpoints derived from a
    prec_bits-certified computation.
    """
    from mpmath import iv

    q = Fraction(q)
    if q <= 0:
        raise ValueError("log of a nonpositive rational")
    old = iv.prec
    try:
        iv.prec = prec_bits
        val = iv.log(iv.mpf(q.numerator)) - iv.log(iv.mpf(q.denominator))
        lo = _down(float(val.a))
        hi = _up(float(val.b))
    finally:
        iv.prec = old
    return RealEnclosure(lo, hi)
