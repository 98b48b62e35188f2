"""Finite strong subtrees of b-branching trees and their Ramsey-type searches."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .tree import (
    EMPTY,
    StrongSubtree,
    Universe,
    canonical_iso,
    decompose,
    graft,
    meet,
    node_str,
    parse_node,
    relative,
    relative_tree,
    validate_strong_subtree,
)
from .enumeration import (
    FamilySnapshot,
    ProductSubtree,
    approx,
    count_strong_subtrees,
    enum_extensions,
    enum_product,
    enum_strong_subtrees,
    enum_with_levels,
    fin_leq,
    is_initial_segment,
    iter_strong_subtrees,
)
from .envelopes import (
    ABSOLUTE,
    POSITION,
    NodeLevelSet,
    agrees,
    agrees_position,
    envelope,
    inner_part,
    product_envelope,
    translate,
    wedge_closure,
)
from .families import (
    NOT_UNIFORM,
    Family,
    SearchResult,
    derive,
    is_nash_williams,
    ramsey_witness,
    restrict,
    uniform_rank,
    verify_ramsey,
)
from .canonical import (
    Coloring,
    canonical_family_verify,
    envelope_union,
    er_classify,
    er_verify,
    milliken_classify,
    milliken_verify,
    set_coloring,
    tree_coloring,
)
from .pigeonhole import (
    a4_dichotomy,
    a4_step,
    axioms_check,
    hl_witness,
    level_product_coloring,
    milliken_witness,
)
