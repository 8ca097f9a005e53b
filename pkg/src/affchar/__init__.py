"""Affine characters of surface groups: twisted cohomology, Torelli actions and periods."""

__version__ = "0.1.0"

from .surface_group import Word, make_surface_group, abelianize, intersection_pairing
from .characters import Character, character, classify_character, random_character
from .twisted_cohomology import (Cocycle, make_cocycle, coboundary, cohomology_basis, cup_pairing,
                                 hermitian_pairing, volume_gram, signature)
from .dehn_twist import TwistData, genus2_standard_twists, higher_genus_rep
from .dynamics import WalkConfig, projective_walk, sp_walk, equidistribution_stat
from .haupt import PeriodCharacter, detect_lattice, haupt_check, symplectic_volume
