"""Homomorphisms, cores and products of small digraphs, with checkers for
coreness criteria of products of cones, mountains and gadget graphs."""

from types import ModuleType as _ModuleType

from .cones import (
    ConedDigraph,
    FamilyReport,
    are_orthogonal,
    check_orthogonality,
    cone,
    orthogonalize_pair,
    verify_two_cone_theorem,
    verify_vsc_conditions,
)
from .digraph import (
    CapacityError,
    Digraph,
    DigraphParseError,
    VertexMap,
    complete_graph,
    cycle_graph,
    directed_cycle,
    directed_path,
    disjoint_union,
    format_digraph,
    parse_digraph,
    product,
    tensor_product,
    to_dot,
)
from .gadget import (
    GadgetGraph,
    build_gadget_graph,
    homomorphic_images,
    is_4_colorable,
    verify_gadget_equivalence,
)
from .mountains import (
    MountainSeq,
    gen_decreasing_mountains,
    mountain_from_sequence,
    omega_sequence,
    seq_homomorphic,
)
from .paths import PathWord, SumOfPaths, enumerate_kb_paths, kb_homomorphism
from .report import RunReport, Verdict
from .search import (
    Budget,
    CoreResult,
    SearchBudgetExceeded,
    all_homs_to_target_surjective,
    check_surjectivity,
    compute_core,
    find_homomorphism,
    has_homomorphism,
    is_core,
    is_isomorphic,
    iter_homomorphisms,
)

__version__ = "0.1.0"

__all__ = sorted(
    n for n, v in globals().items() if not n.startswith("_") and not isinstance(v, _ModuleType)
)
