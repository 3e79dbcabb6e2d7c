"""Exact machinery for small-support annihilators in group algebras F[G]:
group normal forms, sparse convolution arithmetic, cancellation-structure
recovery with chain-based relation extraction, realizability decisions, and
desk-scale exhaustive scans.
"""

from .algebra import AlgebraElement, SupportTriple, as_support_triple, parse_algebra
from .cancellation import (
    CancellationStructure,
    RecoveredInstance,
    extract_cycle_relation,
    extract_relation_B,
    extract_relation_M,
    recover_structure,
    validate_structure,
)
from .groups import FormalWord, GroupSpec, eval_word, parse_group_spec
from .scalars import field_from_text
from .search import scan_small_supports, search_annihilator_direct
from .wordeq import decide

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "CancellationStructure",
    "FormalWord",
    "GroupSpec",
    "RecoveredInstance",
    "SupportTriple",
    "as_support_triple",
    "decide",
    "eval_word",
    "extract_cycle_relation",
    "extract_relation_B",
    "extract_relation_M",
    "field_from_text",
    "parse_algebra",
    "parse_group_spec",
    "recover_structure",
    "scan_small_supports",
    "search_annihilator_direct",
    "validate_structure",
    "__version__",
]
