"""Derived structures computed from a scheme, each as an exact finite fragment."""

from .colorings import (
    BoundedColor,
    EntangledRealization,
    bounded_color_c,
    coherent_tree_eval,
    entangled_eval,
    entangled_realization,
    entangled_vector,
)
from .gaps import GapFragment, GapPairData, gap_pair_data, hausdorff_gap
from .luzin import (
    LuzinFragment,
    Poset,
    a_box,
    coherent_family_eval,
    jones_separator,
    level_box,
    luzin_family,
    luzin_representation,
)
from .orders import TreeNode, aronszajn_classify, aronszajn_node, chain_class, countryman_cmp, countryman_less, tree_leq
from .oscillation import (
    OscRecord,
    color_o,
    color_o_star,
    decode_map,
    encode_map,
    osc,
    partition_interval,
    partition_lookup,
)
from .sspace import SSpaceSets, c_k_set, c_set, h_set, s_space_sets

__all__ = [
    "BoundedColor",
    "EntangledRealization",
    "GapFragment",
    "GapPairData",
    "LuzinFragment",
    "OscRecord",
    "Poset",
    "SSpaceSets",
    "TreeNode",
    "a_box",
    "aronszajn_classify",
    "aronszajn_node",
    "bounded_color_c",
    "c_k_set",
    "c_set",
    "chain_class",
    "coherent_family_eval",
    "coherent_tree_eval",
    "color_o",
    "color_o_star",
    "countryman_cmp",
    "countryman_less",
    "decode_map",
    "encode_map",
    "entangled_eval",
    "entangled_realization",
    "entangled_vector",
    "gap_pair_data",
    "h_set",
    "hausdorff_gap",
    "jones_separator",
    "level_box",
    "luzin_family",
    "luzin_representation",
    "osc",
    "partition_interval",
    "partition_lookup",
    "s_space_sets",
    "tree_leq",
]
