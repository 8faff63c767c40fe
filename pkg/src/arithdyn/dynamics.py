"""Self-maps of projective and affine space as exact polynomial tuples.

A projective map is stored on its minimal representative: integer-coprime
homogeneous components of a common degree with no common polynomial factor
and a fixed sign convention, so degree bookkeeping is exact by construction.
Affine polynomial maps are first-class citizens: they keep their affine
components (iteration and composition happen there, where no gcd clearing is
ever needed) together with the degree-d homogenization used at the boundary.

Degree sequences of iterates are computed by full symbolic composition; the
degree drop of a non-stable map is a cancellation phenomenon and must be
exact.  A randomized evaluation cross-check guards the reduction logic.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_core import (
    MultiPoly,
    RealEnclosure,
    log_int_enclosure,
    poly_gcd,
)
from .heights import AffPoint, ProjPoint


class ResourceLimitError(RuntimeError):
    """Raised when symbolic data outgrows the desk-scale budget."""

    def __init__(self, message: str, completed: int | None = None):
        super().__init__(message)
        self.completed = completed


class _Indeterminate:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INDETERMINATE"


INDETERMINATE = _Indeterminate()

_TERM_BUDGET = 1_500_000

_HOM_VAR_CANDIDATES = ("z", "w", "Z", "W", "_h")


def _pick_hom_var(names: Sequence[str]) -> str:
    for c in _HOM_VAR_CANDIDATES:
        if c not in names:
            return c
    raise ValueError("no free homogenizing variable name")


def homogenize(poly: MultiPoly, degree: int, hom_var: str) -> MultiPoly:
    """Homogenize to the given degree by padding with the new last variable."""
    variables = poly.variables + (hom_var,)
    terms = {}
    for e, c in poly.terms.items():
        total = sum(e)
        if total > degree:
            raise ValueError("polynomial degree exceeds homogenization degree")
        terms[e + (degree - total,)] = c
    return MultiPoly(variables, terms)


def dehomogenize(poly: MultiPoly) -> MultiPoly:
    """Set the last variable to 1."""
    variables = poly.variables[:-1]
    terms: dict[tuple, Fraction] = {}
    for e, c in poly.terms.items():
        key = e[:-1]
        terms[key] = terms.get(key, Fraction(0)) + c
    return MultiPoly(variables, terms)


def _joint_scale_sign(components: list[MultiPoly]) -> list[MultiPoly]:
    """Scale a component tuple to coprime integer coefficients and fix the
    overall sign (first nonzero component gets a positive lex-leading
    coefficient)."""
    den = 1
    for comp in components:
        for c in comp.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
    comps = [comp.scale(den) for comp in components]
    g = 0
    for comp in comps:
        for c in comp.terms.values():
            g = math.gcd(g, abs(c.numerator))
    if g > 1:
        comps = [comp.scale(Fraction(1, g)) for comp in comps]
    for comp in comps:
        if not comp.is_zero():
            _, lead = comp.leading_term()
            if lead < 0:
                comps = [-c for c in comps]
            break
    return comps


def _joint_canonical(components: list[MultiPoly]) -> list[MultiPoly]:
    """Full canonical form: integer-coprime scaling, common polynomial factor
    removed, sign fixed."""
    comps = _joint_scale_sign(components)
    common = None
    for comp in comps:
        if comp.is_zero():
            continue
        common = comp if common is None else poly_gcd(common, comp)
        if common.total_degree() == 0:
            common = None
            break
    if common is not None and common.total_degree() > 0:
        comps = [comp.exact_div(common) if not comp.is_zero() else comp
                 for comp in comps]
        return _joint_canonical(comps)
    return comps


class SelfMap:
    """Polynomial self-map of P^N or A^N with exact coefficients."""

    __slots__ = ("kind", "dim", "components", "affine_components", "degree",
                 "hom_var", "_iterates")

    def __init__(self, kind, dim, components, affine_components, degree, hom_var):
        self.kind = kind
        self.dim = dim
        self.components = components
        self.affine_components = affine_components
        self.degree = degree
        self.hom_var = hom_var
        self._iterates = {1: self}

    # -- constructors ----------------------------------------------------------

    @classmethod
    def projective(cls, components: Sequence[MultiPoly]) -> "SelfMap":
        components = list(components)
        if len(components) < 2:
            raise ValueError("a projective map needs at least two components")
        variables = components[0].variables
        if len(variables) != len(components):
            raise ValueError("component count must match coordinate count")
        degs = set()
        for comp in components:
            if comp.variables != variables:
                raise ValueError("components must share variables")
            if not comp.is_homogeneous():
                raise ValueError(f"component {comp} is not homogeneous")
            if not comp.is_zero():
                degs.add(comp.total_degree())
        if len(degs) != 1:
            raise ValueError("components must be homogeneous of one common degree")
        if all(c.is_zero() for c in components):
            raise ValueError("zero map")
        comps = _joint_canonical(components)
        d = max(c.total_degree() for c in comps if not c.is_zero())
        if d < 1:
            raise ValueError("map degree must be >= 1")
        return cls("projective", len(components) - 1, tuple(comps), None, d, None)

    @classmethod
    def affine(cls, components: Sequence[MultiPoly], hom_var: str | None = None) -> "SelfMap":
        components = list(components)
        variables = components[0].variables
        if len(variables) != len(components):
            raise ValueError("an affine self-map needs one component per variable")
        for comp in components:
            if comp.variables != variables:
                raise ValueError("components must share variables")
        d = max((c.total_degree() for c in components), default=-1)
        if d < 1:
            raise ValueError("map degree must be >= 1")
        hv = hom_var or _pick_hom_var(variables)
        homs = [homogenize(c, d, hv) for c in components]
        hvar_poly = MultiPoly(variables + (hv,),
                              {(0,) * len(variables) + (d,): Fraction(1)})
        # the homogenization of a degree-d affine map never carries a common
        # factor: it could only be a power of the new variable, and the
        # component realizing the top degree has a term free of it
        proj = tuple(_joint_scale_sign(homs + [hvar_poly]))
        return cls("affine", len(components), proj, tuple(components), d, hv)

    # -- queries -----------------------------------------------------------------

    @property
    def is_projective(self) -> bool:
        return self.kind == "projective"

    @property
    def is_affine(self) -> bool:
        return self.kind == "affine"

    def homogenization(self) -> "SelfMap":
        """The projective extension of an affine map (itself when projective)."""
        if self.is_projective:
            return self
        return SelfMap("projective", self.dim, self.components, None,
                       self.degree, None)

    def term_count(self) -> int:
        return sum(len(c.terms) for c in self.components)

    def __repr__(self):
        kind = "P" if self.is_projective else "A"
        comps = self.affine_components if self.is_affine else self.components
        return f"SelfMap<{kind}^{self.dim}, d={self.degree}>" + \
            "[" + " ; ".join(str(c) for c in comps) + "]"

    def __eq__(self, other):
        return (isinstance(other, SelfMap) and self.kind == other.kind
                and self.components == other.components
                and self.affine_components == other.affine_components)

    def __hash__(self):
        return hash((self.kind, self.components))

    # -- evaluation ----------------------------------------------------------------

    def evaluate(self, x: ProjPoint):
        """Exact evaluation at a projective point, canonicalized.

        Returns INDETERMINATE when every component vanishes; indeterminacy is
        a value, not an error.
        """
        if x.dim != self.dim:
            raise ValueError("point dimension mismatch")
        if self.is_affine and x.coords[-1] != 0:
            w = Fraction(x.coords[-1])
            aff = [Fraction(c) / w for c in x.coords[:-1]]
            img = self.evaluate_affine(AffPoint(aff))
            return img.to_projective()
        values = {name: Fraction(c) for name, c in
                  zip(self.components[0].variables, x.coords)}
        out = [comp.evaluate(values) for comp in self.components]
        if all(v == 0 for v in out):
            return INDETERMINATE
        return ProjPoint(out)

    def evaluate_affine(self, P: AffPoint) -> AffPoint:
        if not self.is_affine:
            raise ValueError("affine evaluation needs an affine map")
        values = {name: c for name, c in
                  zip(self.affine_components[0].variables, P.coords)}
        return AffPoint([comp.evaluate(values) for comp in self.affine_components])

    # -- iteration -------------------------------------------------------------------

    def iterate(self, k: int) -> "SelfMap":
        """f^k by repeated symbolic composition, cached on the map."""
        if k < 1:
            raise ValueError("iterate needs k >= 1")
        if k in self._iterates:
            return self._iterates[k]
        prev = self.iterate(k - 1)
        nxt = compose(self, prev)
        if nxt.term_count() > _TERM_BUDGET:
            raise ResourceLimitError(
                f"iterate {k} exceeds the symbolic budget", completed=k - 1)
        self._iterates[k] = nxt
        return nxt


def evaluate(f: SelfMap, x: ProjPoint):
    return f.evaluate(x)


def orbit(f: SelfMap, x: ProjPoint, n: int) -> tuple[list, bool]:
    """[x, f(x), ..., f^n(x)], truncated early at an indeterminate iterate.

    Returns (points, hit_indeterminacy).
    """
    if n < 0:
        raise ValueError("orbit length must be >= 0")
    pts = [x]
    cur = x
    for _ in range(n):
        nxt = f.evaluate(cur)
        if nxt is INDETERMINATE:
            return pts, True
        pts.append(nxt)
        cur = nxt
    return pts, False


def compose(f: SelfMap, g: SelfMap) -> SelfMap:
    """Symbolic composition f o g with exact common-factor removal."""
    if f.kind != g.kind or f.dim != g.dim:
        raise ValueError("composition requires a common ambient space")
    if f.is_affine:
        avars = f.affine_components[0].variables
        mapping = {name: comp for name, comp in zip(avars, g.affine_components)}
        comps = [c.substitute(mapping) for c in f.affine_components]
        return SelfMap.affine(comps, hom_var=f.hom_var)
    pvars = f.components[0].variables
    mapping = {name: comp for name, comp in zip(pvars, g.components)}
    comps = [c.substitute(mapping) for c in f.components]
    return SelfMap.projective(comps)


@dataclass(frozen=True)
class DegreeSequence:
    """deg(f^k) for k = 1..n, with submultiplicativity asserted."""

    degrees: tuple

    def __post_init__(self):
        ds = self.degrees
        for d in ds:
            if d < 1:
                raise ValueError("iterate degrees must be >= 1")
        n = len(ds)
        for a in range(1, n + 1):
            for b in range(1, n + 1 - a):
                if ds[a + b - 1] > ds[a - 1] * ds[b - 1]:
                    raise AssertionError(
                        f"submultiplicativity violated at {a}+{b}")

    def __getitem__(self, i):
        return self.degrees[i]

    def __len__(self):
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)


def _interpolation_degree_check(f: SelfMap, k: int, expected: int, rng: random.Random) -> bool:
    """Randomized guard: restrict f^k to a random rational line.

    The reduced iterate restricted to a generic line has coprime image
    polynomials of degree exactly deg(f^k); a reduction bug leaves a common
    factor of positive degree, which survives restriction.
    """
    fk = f.iterate(k)
    comps = fk.components
    variables = comps[0].variables
    t = MultiPoly.variable(("t",), "t")
    line = {}
    for name in variables:
        a = Fraction(rng.randint(-9, 9))
        b = Fraction(rng.randint(1, 9))
        line[name] = t.scale(b) + MultiPoly.constant(("t",), a)
    images = [c.substitute(line) for c in comps]
    nonzero = [img for img in images if not img.is_zero()]
    if not nonzero:
        return False
    common = nonzero[0]
    for img in nonzero[1:]:
        common = poly_gcd(common, img)
        if common.total_degree() == 0:
            break
    top = max(img.total_degree() for img in nonzero)
    return top == expected and common.total_degree() == 0


def degree_sequence(f: SelfMap, n: int, cross_check: bool = True) -> DegreeSequence:
    """Degrees of f, f^2, ..., f^n after exact common-factor removal."""
    if n < 1:
        raise ValueError("degree_sequence needs n >= 1")
    degs = []
    for k in range(1, n + 1):
        try:
            fk = f.iterate(k)
        except ResourceLimitError as exc:
            raise ResourceLimitError(
                f"degree_sequence stopped at k={exc.completed}: coefficient blow-up",
                completed=exc.completed) from exc
        degs.append(fk.degree)
    if cross_check and n >= 2:
        rng = random.Random(0xD15C0)
        k = min(n, 3)
        if not any(_interpolation_degree_check(f, k, degs[k - 1], rng)
                   for _ in range(3)):
            raise AssertionError("interpolation cross-check failed for iterate degrees")
    return DegreeSequence(tuple(degs))


@dataclass(frozen=True)
class DeltaEstimate:
    """Upper: certified bound min_k d_k^(1/k); heuristic: the ratio d_n/d_{n-1},
    which is NOT rigorous and is exposed only as a convergence hint."""

    upper: RealEnclosure
    heuristic: RealEnclosure
    sequence: DegreeSequence


def _root_enclosure(d: int, k: int) -> RealEnclosure:
    if d == 1:
        return RealEnclosure(1.0, 1.0)
    log_d = log_int_enclosure(d)
    scaled = RealEnclosure(log_d.lo / k, log_d.hi / k)
    return scaled.exp()


def delta_estimate(f: SelfMap, n: int) -> DeltaEstimate:
    """Dynamical-degree data from the first n iterate degrees."""
    if n < 2:
        raise ValueError("delta_estimate needs n >= 2")
    seq = degree_sequence(f, n)
    best = None
    for k, d in enumerate(seq, start=1):
        e = _root_enclosure(d, k)
        best = e if best is None else RealEnclosure(
            min(best.lo, e.lo), min(best.hi, e.hi))
    ratio = Fraction(seq[n - 1], seq[n - 2])
    return DeltaEstimate(upper=best, heuristic=RealEnclosure.exact(ratio), sequence=seq)


def is_stable_upto(f: SelfMap, n: int) -> tuple[bool, int | None]:
    """True when deg(f^k) = (deg f)^k for all k <= n; else the first drop index."""
    if n < 2:
        raise ValueError("is_stable_upto needs n >= 2")
    seq = degree_sequence(f, n)
    d1 = seq[0]
    for k, d in enumerate(seq, start=1):
        if d < d1 ** k:
            return False, k
    return True, None
