"""Exact arithmetic for untwisted affine Kac-Moody algebras.

Finite Cartan data, the loop algebra, affine roots, weights and Weyl group,
truncated characters, highest-weight modules, and the cohomology of the
positive nilpotent part with coefficients in an irreducible module.
"""

__version__ = "0.1.0"

from .affine_roots import AffineWeight, fundamental_weight, from_labels, rho_tilde
from .affine_weyl import WeylWord, dot, enumerate_words, s_index
from .characters import (
    FormalCharacter,
    denominator_identity_check,
    freudenthal_character,
    partition_fn,
    verma_character,
    weyl_kac_character,
)
from .cohomology import cohomology_dims, kostant_verify
from .errors import KacMoodyError
from .finite_cartan import FiniteCartan, build_finite_cartan, from_string
from .modules import build_irreducible, build_verma, shapovalov_gram

__all__ = [
    "AffineWeight",
    "FiniteCartan",
    "FormalCharacter",
    "KacMoodyError",
    "WeylWord",
    "build_finite_cartan",
    "build_irreducible",
    "build_verma",
    "cohomology_dims",
    "denominator_identity_check",
    "dot",
    "enumerate_words",
    "freudenthal_character",
    "from_labels",
    "from_string",
    "fundamental_weight",
    "kostant_verify",
    "partition_fn",
    "rho_tilde",
    "s_index",
    "shapovalov_gram",
    "verma_character",
    "weyl_kac_character",
]
