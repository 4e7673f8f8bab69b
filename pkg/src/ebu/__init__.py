"""Exact edge betweenness centrality, edge-betweenness uniformity and graph symmetry."""

from __future__ import annotations

from .canonical import CanonicalLabel, are_isomorphic, canonical_form, is_automorphism
from .centrality import (
    CutsetCheck,
    EdgeCentralityReport,
    closed_form_diameter2,
    closed_form_family,
    cutset_check,
    edge_betweenness,
    edge_betweenness_values,
    format_rational,
    is_edge_betweenness_uniform,
)
from .graph import (
    BfsResult,
    CirculantSpec,
    Graph,
    GraphError,
    bfs_count,
    circulant,
    diameter,
    diameter_info,
    family,
    is_connected,
)
from .graph6 import Graph6Error, parse_graph6, write_graph6
from .scan import ScanOptions, conjecture_check, scan_file, scan_stream, verify_vt_census
from .structure import (
    ClassId,
    EbuCertificate,
    PrunedAutomorphism,
    PrunedAutomorphismError,
    ebu_certificate,
    phi,
    predicted_unused_edges,
    shortest_path_edge_support,
    verify_pruned_automorphism,
)
from .symmetry import (
    circulant_distance_regular,
    circulant_isomorphic,
    circulant_lambda,
    is_distance_regular,
    is_edge_transitive,
    is_vertex_transitive,
    tetravalent_circulant_edge_transitive,
)

__version__ = "0.1.0"
