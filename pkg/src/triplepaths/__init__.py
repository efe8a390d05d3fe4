"""Loose and messy 3-uniform paths: detection, structure, colorings and search."""

from .coloring import Coloring, lower_bound_coloring, monochromatic_embedding, ramsey_exhaustive
from .extremal import ExtremalResult, extremal_number, is_intersecting, verify_messy_extremal
from .hypergraph import Hypergraph3, codegree, induced, m_core, parse_hypergraph, trace_vertex
from .multidigraph import ColoredMultidigraph, audit_identities, build_multidigraph, classify_pairs, compute_stats
from .patterns import PathPattern, PatternName, contains_pattern, parse_pattern, pattern
from .structure import StructureViolation, decompose_loose, decompose_messy, verify_decomposition

__version__ = "0.1.0"
