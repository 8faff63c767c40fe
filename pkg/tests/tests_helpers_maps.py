"""Shared map constructors for the test suite."""

from fractions import Fraction

from arithdyn.exact_core import MultiPoly
from arithdyn.dynamics import SelfMap

xy = ("x", "y")


def poly(terms, vars_=xy):
    return MultiPoly(vars_, {tuple(k): Fraction(v) for k, v in terms.items()})


def xy_mix(c1=1, c2=1):
    """(x, y) -> (y + c1, x*y + c2)"""
    return SelfMap.affine([
        poly({(0, 1): 1, (0, 0): c1}),
        poly({(1, 1): 1, (0, 0): c2}),
    ])


def delayed_square(a=0, c=1):
    """(x, y) -> (y, x^2 + a*x + c)"""
    return SelfMap.affine([
        poly({(0, 1): 1}),
        poly({(2, 0): 1, (1, 0): a, (0, 0): c}),
    ])


def shear_difference(a=1, c1=1, c2=1):
    """(x, y) -> (a*y + c1, x*(x - y) + c2)"""
    return SelfMap.affine([
        poly({(0, 1): a, (0, 0): c1}),
        poly({(2, 0): 1, (1, 1): -1, (0, 0): c2}),
    ])
