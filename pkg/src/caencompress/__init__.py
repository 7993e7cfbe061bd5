"""Linear 2-D cellular automata: rule matrices, Boolean-product algebra,
multiple-attractor analysis and binary-image encompression."""

from .algebra import audit, basic_generators, close_generators, element_inverse, translation_matrix, verify_axioms
from .bitmatrix import BitMatrix, bool_product, gf2_product, gf2_rank, gf2_solve_affine, is_permutation, matrix_power
from .codec import EncompressedContainer, Key, compression_ratio, dencompress, distortion, encompress, plan_layout
from .formats import PbmImage, key_parse, key_write, pbm_read, pbm_write
from .maca import (
    CAState, attractor_from_pef, build_std, classify, collapse_to_depth_one, evolve, find_maca, maca_profile,
    pef_positions, predecessors,
)
from .rules import RuleSpec, decompose_rule, fundamental_matrix, mask_sequence, neighbor_offset, rule_matrix

__version__ = "0.1.0"
