"""Topological minors of finite and regular rooted trees."""

from .corpus import CorpusSpec, corpus_generate
from .curtail import (
    AdfMember,
    CurtailReport,
    DesignatedRay,
    FamilyReport,
    LengthFunction,
    TruncationGenerator,
    adf_family,
    build_tf,
    curtail,
    curtail_fixed_point,
    curtailed_base,
    depth_covering_marks,
    designated_ray,
    family_report,
    mark_level,
    tail_alignment_check,
    tf_truncation,
)
from .errors import BudgetExceeded, ConsistencyError, InputError, ParseError, PreconditionError, TreemtError
from .formats import (
    export_dot,
    format_ftree,
    format_rtp,
    format_witness,
    parse_ftree,
    parse_rtp,
    parse_witness,
    read_ftree,
    read_rtp,
)
from .iso import (
    FixedLocus,
    ahu_code,
    automorphisms,
    branch_frame,
    fixed_locus,
    iso_rooted,
    iso_unrooted,
    iter_automorphisms,
    tree_center,
    unrooted_code,
)
from .minor import (
    ComparabilityCache,
    MinorWitness,
    antichain_search,
    brute_force_rooted_minor,
    equiv_sharp,
    increasing_subsequence,
    is_minor_unrooted,
    is_rooted_minor,
    maximum_antichain,
    root_rigidity_check,
    verify_witness,
    verify_witness_unrooted,
    wqo_find_comparable,
)
from .regular import (
    Entry,
    Presentation,
    expand_reg_witness,
    fixed_locus_regular,
    host_depth_bound,
    reg_equiv,
    reg_iso_rooted,
    reg_minor,
    refutation_bound,
    refutation_depth,
    self_similar,
    self_similar_subtree_exists,
    shape_classify,
    unfold,
    unfold_truncate,
)
from .trees import FiniteTree, RootedFiniteTree

__version__ = "0.1.0"
