"""Canonical heights for projective morphisms, with certified two-sided error.

A morphism certificate carries an exact cofactor identity
``sum_j G_ij * F_j = R_i * x_i^e`` (found by exact linear algebra on a graded
piece, with e one past the degree where the component ideal must saturate).
The identity yields, by elementary inequalities that we also re-check in
exact integer arithmetic, one-sided constants c_plus and c_minus with

    d*h(x) - c_minus  <=  h(f(x))  <=  d*h(x) + c_plus.

Telescoping the limit h(f^n x)/d^n then gives an enclosure of the canonical
height whose width decays like 1/d^n.

Orbits to depth ~40 cannot be stored exactly (coordinate digits double each
step), so the tracker below keeps coordinates as unit-scale double intervals
together with an exact binary exponent; rescaling is by powers of two only,
hence exact.  Coordinate gcd corrections are supported on the primes dividing
the certificate scalars and are recovered exactly from residues tracked at
those primes.  The resulting height enclosures are certified; only their
width floor (a few ULPs) exceeds the textbook formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .exact_core import (
    LOG2_ENCLOSURE,
    MultiPoly,
    RealEnclosure,
    exact_linear_solve,
    int_enclosure,
    log_int_enclosure,
    prime_factors,
)
from .dynamics import ResourceLimitError, SelfMap, orbit
from .heights import ProjPoint, weil_height

DEFAULT_DEPTH_BUDGET = 60


class NotAMorphism:
    """Marker result: the components share a projective zero."""

    def __init__(self, reason: str):
        self.reason = reason

    def __repr__(self):
        return f"NotAMorphism({self.reason})"


class TruncatedOrbitError(RuntimeError):
    """Orbit hit the indeterminacy locus; carries the partial estimate."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def _monomials(variables: tuple, degree: int) -> list[tuple]:
    n = len(variables)
    out = []
    for combo in combinations_with_replacement(range(n), degree):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort()
    return out


@dataclass
class MorphismCertificate:
    """Proof object that f is a morphism, with explicit height constants.

    cofactors[i][j] are integer polynomials with
    sum_j cofactors[i][j] * F_j = scalars[i] * x_i^exponent, all verified
    exactly at construction time.
    """

    map: SelfMap
    exponent: int
    cofactors: list
    scalars: list
    c_plus: RealEnclosure
    c_minus: RealEnclosure
    coeff_sum_bound: int
    lower_bound_factor: Fraction
    gcd_bound: int

    @property
    def error_constant(self) -> RealEnclosure:
        return self.c_plus.max_with(self.c_minus)

    def tracked_primes(self) -> dict[int, int]:
        """Primes where coordinate gcd loss can occur, with exponent bounds."""
        out: dict[int, int] = {}
        for r in self.scalars:
            for p, k in prime_factors(int(r)).items():
                out[p] = max(out.get(p, 0), k)
        return out

    def verify_identity(self) -> bool:
        comps = self.map.components
        variables = comps[0].variables
        for i, (row, r) in enumerate(zip(self.cofactors, self.scalars)):
            total = MultiPoly.zero(variables)
            for g, f in zip(row, comps):
                total = total + g * f
            target = (MultiPoly.variable(variables, variables[i]) ** self.exponent).scale(r)
            if total != target:
                return False
        return True

    def check_two_sided_exact(self, x: ProjPoint) -> bool:
        """The height inequality at x, checked in exact integer arithmetic."""
        comps = self.map.components
        variables = comps[0].variables
        values = {name: Fraction(c) for name, c in zip(variables, x.coords)}
        raw = [comp.evaluate(values) for comp in comps]
        ints = [int(v) for v in raw]
        if all(v == 0 for v in ints):
            return False
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        reduced_max = max(abs(v) for v in ints) // g
        A = max(abs(c) for c in x.coords)
        d = self.map.degree
        if reduced_max > self.coeff_sum_bound * A ** d:
            return False
        # lower side: reduced_max >= A^d / lower_bound_factor
        return reduced_max * self.lower_bound_factor >= A ** d


def certify_morphism(f, budget: int = 400):
    """Build a MorphismCertificate, or report that f is not a morphism.

    Accepts a SelfMap (reduced representative) or a raw homogeneous component
    list, which is checked exactly as given.  The cofactor search solves one
    exact linear system per coordinate on the graded piece of degree
    e = (N+1)(d-1)+1; infeasibility of any system is equivalent to a common
    projective zero of the components.
    """
    selfmap = None
    if isinstance(f, SelfMap):
        selfmap = f.homogenization() if f.is_affine else f
        comps = selfmap.components
    else:
        comps = list(f)
        degs = {c.total_degree() for c in comps if not c.is_zero()}
        if len(degs) != 1 or any(not c.is_homogeneous() for c in comps):
            raise ValueError("components must be homogeneous of one common degree")
    variables = comps[0].variables
    N = len(comps) - 1
    d = max(c.total_degree() for c in comps if not c.is_zero())
    e = (N + 1) * (d - 1) + 1
    rows_mons = _monomials(variables, e)
    cof_mons = _monomials(variables, e - d)
    n_cols = len(cof_mons) * len(comps)
    if len(rows_mons) > budget or n_cols > budget:
        raise ResourceLimitError(
            f"certificate system {len(rows_mons)}x{n_cols} exceeds budget {budget}")

    row_index = {m: i for i, m in enumerate(rows_mons)}
    columns = []
    for comp in comps:
        for mon in cof_mons:
            col = [Fraction(0)] * len(rows_mons)
            for te, tc in comp.terms.items():
                key = tuple(a + b for a, b in zip(te, mon))
                col[row_index[key]] = tc
            columns.append(col)
    A = [[columns[c][r] for c in range(n_cols)] for r in range(len(rows_mons))]

    cofactors = []
    scalars = []
    for i in range(len(comps)):
        target = [0] * len(variables)
        target[i] = e
        b = [Fraction(0)] * len(rows_mons)
        b[row_index[tuple(target)]] = Fraction(1)
        sol = exact_linear_solve(A, b)
        if sol is None:
            return NotAMorphism(f"coordinate {variables[i]}^{e} is not in the component ideal")
        den = 1
        for v in sol:
            den = den * v.denominator // math.gcd(den, v.denominator)
        row = []
        for j in range(len(comps)):
            terms = {}
            for k, mon in enumerate(cof_mons):
                c = sol[j * len(cof_mons) + k] * den
                if c != 0:
                    terms[mon] = c
            row.append(MultiPoly(variables, terms))
        cofactors.append(row)
        scalars.append(den)

    coeff_sum = max(sum(abs(c) for c in comp.terms.values()) for comp in comps)
    coeff_sum = int(coeff_sum)
    c_plus = log_int_enclosure(coeff_sum) if coeff_sum > 1 else RealEnclosure.zero()

    lcm_r = 1
    for r in scalars:
        lcm_r = lcm_r * r // math.gcd(lcm_r, r)
    worst = Fraction(1)
    for row, r in zip(cofactors, scalars):
        t = sum(sum(abs(c) for c in g.terms.values()) for g in row)
        ratio = Fraction(int(t), r)
        if ratio > worst:
            worst = ratio
    factor = worst * lcm_r
    if factor > 1:
        num = log_int_enclosure(factor.numerator)
        den = (log_int_enclosure(factor.denominator)
               if factor.denominator > 1 else RealEnclosure.zero())
        c_minus = (num - den).max_with(0)
    else:
        c_minus = RealEnclosure.zero()

    if selfmap is None:
        selfmap = SelfMap.projective(comps)
        if selfmap.components != tuple(comps):
            # reduction changed the representative: the raw tuple had a
            # common factor, hence a shared zero
            return NotAMorphism("components share a polynomial factor")
    cert = MorphismCertificate(
        map=selfmap, exponent=e, cofactors=cofactors, scalars=scalars,
        c_plus=c_plus, c_minus=c_minus,
        coeff_sum_bound=coeff_sum, lower_bound_factor=factor,
        gcd_bound=lcm_r)
    if not cert.verify_identity():
        raise AssertionError("cofactor identity failed its exact re-check")
    return cert


# ---------------------------------------------------------------------------
# scale-tracked certified orbits
# ---------------------------------------------------------------------------

class _ScaledOrbitTracker:
    """Certified orbit heights h(f^n x) without exact big coordinates.

    Coordinates are 2^exponent * u_i with u_i double intervals of magnitude
    <= 1 (rescaling uses powers of two, which are exact in floating point).
    Exact residues at the certificate's tracked primes recover each step's
    coordinate gcd, so the tracked value equals the canonical representative.
    """

    def __init__(self, cert: MorphismCertificate, x: ProjPoint, max_steps: int):
        self.cert = cert
        self.map = cert.map
        self.depth = 0
        coords = x.coords
        top = max(abs(c) for c in coords)
        k0 = top.bit_length()
        self.exponent = k0
        scale = Fraction(1, 1 << k0)
        self.units = [RealEnclosure.exact(Fraction(c) * scale) for c in coords]
        self.residues = {}
        for p, bound in cert.tracked_primes().items():
            K = (max_steps + 2) * bound + 4
            mod = p ** K
            self.residues[p] = ([c % mod for c in coords], K)

    def step(self):
        comps = self.map.components
        variables = comps[0].variables
        d = self.map.degree

        # exact gcd of the image coordinates from residues
        g = 1
        new_residues = {}
        for p, (res, K) in self.residues.items():
            values = []
            mod = p ** K
            vals = {name: r for name, r in zip(variables, res)}
            for comp in comps:
                acc = 0
                for e, c in comp.terms.items():
                    term = int(c)
                    for name, k in zip(variables, e):
                        if k:
                            term = term * pow(vals[name], k, mod) % mod
                    acc = (acc + term) % mod
                values.append(acc)
            v = min(_residue_valuation(val, p, K) for val in values)
            if v >= K:
                raise ArithmeticError("residue precision exhausted")
            g *= p ** v
            newK = K - v
            pv = p ** v
            new_residues[p] = ([(val // pv) % (p ** newK) for val in values], newK)
        self.residues = new_residues

        env = {name: u for name, u in zip(variables, self.units)}
        images = [_interval_eval(comp, env) for comp in comps]
        if g > 1:
            ginv = RealEnclosure.exact(Fraction(1, g))
            images = [im * ginv for im in images]
        m_hi = max(max(abs(im.hi), abs(im.lo)) for im in images)
        if m_hi <= 0:
            raise ArithmeticError("interval collapse in orbit tracking")
        _, k = math.frexp(m_hi)
        scale = math.ldexp(1.0, -k)  # power-of-two rescale: exact in doubles
        self.units = [RealEnclosure(im.lo * scale, im.hi * scale) for im in images]
        self.exponent = d * self.exponent + k
        self.depth += 1

    def height_enclosure(self) -> RealEnclosure:
        """Certified enclosure of h(f^depth x) = log max |coordinate|."""
        mags = [abs(u) for u in self.units]
        lo = max(m.lo for m in mags)
        hi = max(m.hi for m in mags)
        if lo <= 0.0:
            raise ArithmeticError("interval collapse: cannot take log")
        log_u = RealEnclosure(lo, hi).log()
        return int_enclosure(self.exponent) * LOG2_ENCLOSURE + log_u


def _residue_valuation(value: int, p: int, K: int) -> int:
    if value == 0:
        return K
    v = 0
    while value % p == 0:
        value //= p
        v += 1
    return v


def _interval_eval(comp: MultiPoly, env: dict) -> RealEnclosure:
    total = RealEnclosure.zero()
    for e, c in comp.terms.items():
        term = RealEnclosure.exact(c)
        for name, k in zip(comp.variables, e):
            if k:
                u = env[name]
                for _ in range(k):
                    term = term * u
        total = total + term
    return total


@dataclass
class CanonicalHeightValue:
    """Enclosure of the canonical height plus the data that produced it."""

    value: RealEnclosure
    depth: int
    certificate: MorphismCertificate
    orbit_height: RealEnclosure

    def width(self) -> float:
        return self.value.width()


def _height_value_at_depth(cert: MorphismCertificate, tracker: _ScaledOrbitTracker) -> CanonicalHeightValue:
    n = tracker.depth
    d = cert.map.degree
    h_n = tracker.height_enclosure()
    scale = RealEnclosure.exact(Fraction(1, d ** n))
    err = RealEnclosure.exact(Fraction(1, d ** n * (d - 1)))
    lo_term = (err * cert.c_minus).hi
    hi_term = (err * cert.c_plus).hi
    centered = h_n * scale
    return CanonicalHeightValue(
        value=RealEnclosure(centered.lo - lo_term, centered.hi + hi_term),
        depth=n, certificate=cert, orbit_height=h_n)


def canonical_height(cert: MorphismCertificate, x: ProjPoint,
                     target_width: float = 1e-10,
                     depth: int | None = None,
                     depth_budget: int = DEFAULT_DEPTH_BUDGET) -> CanonicalHeightValue:
    """Canonical height enclosure at the least depth reaching target_width.

    Passing an explicit depth overrides the width-driven choice (used by the
    telescoping tests).  The enclosure is
    [h(f^n x)/d^n - c_minus/(d^n(d-1)), h(f^n x)/d^n + c_plus/(d^n(d-1))]
    widened by the certified width of the orbit-height enclosure itself.
    """
    if target_width <= 0:
        raise ValueError("target_width must be positive")
    d = cert.map.degree
    c2 = cert.c_plus.hi + cert.c_minus.hi
    width_driven = depth is None
    if width_driven:
        if c2 <= 0:
            depth = 0
        else:
            need = c2 / (target_width * 0.9 * (d - 1))
            depth = max(0, math.ceil(math.log(need, d))) if need > 1 else 0
    if depth > depth_budget:
        raise ResourceLimitError(
            f"depth {depth} for width {target_width} exceeds budget {depth_budget}",
            completed=depth_budget)
    tracker = _ScaledOrbitTracker(cert, x, max_steps=depth + 10)
    for _ in range(depth):
        tracker.step()
    out = _height_value_at_depth(cert, tracker)
    if width_driven:
        # a couple of spare steps if interval slop pushed us past the target
        extra = 0
        while out.width() > target_width and extra < 8 and tracker.depth < depth_budget:
            tracker.step()
            out = _height_value_at_depth(cert, tracker)
            extra += 1
    return out


@dataclass
class PositivityCertificate:
    """Proof that the canonical height of x is strictly positive: at the
    recorded depth, h(f^n x)/d^n - c_minus/(d^n(d-1)) > 0."""

    point: ProjPoint
    depth: int
    orbit_height: RealEnclosure
    value: RealEnclosure
    certificate: MorphismCertificate


def positive_canonical_height(cert: MorphismCertificate, x: ProjPoint,
                              depth_budget: int = 30):
    """Certificate that the canonical height of x is positive, or None.

    None means inconclusive: x may be preperiodic, but zero height is never
    certified by a finite positive-width interval.
    """
    tracker = _ScaledOrbitTracker(cert, x, max_steps=depth_budget + 2)
    for _ in range(depth_budget + 1):
        try:
            out = _height_value_at_depth(cert, tracker)
            if out.value.lo > 0:
                return PositivityCertificate(
                    point=x, depth=out.depth, orbit_height=out.orbit_height,
                    value=out.value, certificate=cert)
            tracker.step()
        except ArithmeticError:
            # interval widths outgrew the scale (deep preperiodic orbits):
            # nothing positive was certified within the budget
            break
    return None


# ---------------------------------------------------------------------------
# arithmetic-degree estimation
# ---------------------------------------------------------------------------

@dataclass
class ArithDegreeEstimate:
    """Finite-depth statistics for the height growth rate along an orbit.

    lower/upper bracket the tail behaviour of both diagnostics (n-th roots
    of heights and successive height ratios); they are estimates, not
    certified bounds, except when exact_value is set (positive canonical
    height forces the growth rate to equal the map degree).
    """

    lower: RealEnclosure
    upper: RealEnclosure
    ratio: RealEnclosure
    samples: list
    exact_value: int | None = None


def alpha_estimate(f: SelfMap, x: ProjPoint, n: int,
                   cert: MorphismCertificate | None = None) -> ArithDegreeEstimate:
    """Height-growth diagnostics along the first n orbit steps.

    Heights are clamped below at 1 for the growth statistics, so bounded
    orbits collapse to rate 1 rather than oscillating.  When a morphism
    certificate is supplied, orbit heights come from the certified scaled
    tracker (exact coordinates of a degree-d orbit have d^n-digit growth);
    and if positivity of the canonical height is certified, the exact growth
    rate d is reported.
    """
    if n < 2:
        raise ValueError("alpha_estimate needs depth >= 2")
    if cert is not None:
        tracker = _ScaledOrbitTracker(cert, x, max_steps=n + 2)
        heights = [tracker.height_enclosure()]
        for _ in range(n):
            tracker.step()
            heights.append(tracker.height_enclosure())
        samples = list(enumerate(heights))
    else:
        proj = f.homogenization() if f.is_affine else f
        pts, truncated = orbit(proj, x, n)
        heights = [weil_height(p) for p in pts]
        samples = list(enumerate(heights))
        if truncated:
            raise TruncatedOrbitError(
                f"orbit hit indeterminacy after {len(pts) - 1} steps",
                partial=ArithDegreeEstimate(
                    lower=RealEnclosure(0.0, 0.0), upper=RealEnclosure(0.0, 0.0),
                    ratio=RealEnclosure(0.0, 0.0), samples=samples))

    clamped = [h.max_with(1) for h in heights]
    tail = min(4, n)
    roots = []
    for k in range(n - tail + 1, n + 1):
        h = clamped[k]
        root = RealEnclosure(h.log().lo / k, h.log().hi / k).exp()
        roots.append(root)
    ratios = []
    for k in range(n - tail + 1, n + 1):
        ratios.append(clamped[k] / clamped[k - 1])
    max_root = max(roots, key=lambda e: e.hi)
    min_root = min(roots, key=lambda e: e.lo)
    max_ratio = max(ratios, key=lambda e: e.hi)
    min_ratio = min(ratios, key=lambda e: e.lo)
    upper = max_root if max_root.hi <= max_ratio.hi else max_ratio
    lower = min_root if min_root.lo <= min_ratio.lo else min_ratio

    exact = None
    if cert is not None:
        pos = positive_canonical_height(cert, x)
        if pos is not None:
            exact = cert.map.degree
    return ArithDegreeEstimate(lower=lower, upper=upper, ratio=ratios[-1],
                               samples=samples, exact_value=exact)
