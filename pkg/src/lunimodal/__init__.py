"""Lambda-unimodal involutions: counts, descent polynomials, Gelfand characters."""

from .characters import Partition, gelfand, irreducible_character, regular_character
from .gf import (
    Engine, count_Di, count_L, count_Lj, expand_family, gelfand_G, gelfand_Gj,
    gelfand_Hi, poly_Dti, poly_Lt, poly_Ltj,
)
from .perm import Composition, Permutation

__all__ = [
    "Composition", "Permutation", "Partition", "Engine",
    "count_L", "count_Lj", "count_Di", "poly_Lt", "poly_Ltj", "poly_Dti",
    "gelfand_G", "gelfand_Gj", "gelfand_Hi", "expand_family",
    "gelfand", "irreducible_character", "regular_character",
]
