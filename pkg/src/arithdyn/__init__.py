"""Height growth, canonical heights, and orbit-disjointness certificates for
polynomial dynamics over the rationals."""

__version__ = "0.1.0"

from .exact_core import (
    MultiPoly,
    Rational,
    RealEnclosure,
    VALUATION_INFINITY,
    exact_linear_solve,
    poly_gcd,
    resultant,
    valuation,
)
from .heights import (
    AffPoint,
    AlgebraicNumber,
    ProjPoint,
    algebraic_height,
    local_height,
    northcott_enumerate,
    schanuel_ratio,
    weil_height,
)
from .dynamics import (
    INDETERMINATE,
    SelfMap,
    compose,
    degree_sequence,
    delta_estimate,
    is_stable_upto,
    orbit,
)
from .canonical import (
    CanonicalHeightValue,
    MorphismCertificate,
    NotAMorphism,
    alpha_estimate,
    canonical_height,
    certify_morphism,
    positive_canonical_height,
)
from .certify import (
    DisjointnessCertificate,
    FamilyResult,
    family_builder,
    gap_window_search,
    multiplier_avoiding_powers,
    padic_box_sampler,
    prime_degree_sampler,
    ratio_not_power,
)
