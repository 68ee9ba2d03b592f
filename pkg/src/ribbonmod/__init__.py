"""ribbonmod: an exact combinatorial engine for ribbon graphs, collapses,
stable ribbon graphs, rational metrics and the cell structure of
combinatorial moduli spaces."""

from . import errors
from .core import (BOUNDARY, VERTEX, CanonicalForm, PointedRibbonGraph,
                   RibbonGraph, attach_pointing, automorphisms,
                   canonical_form, certificate, distinguished_points, dual,
                   from_permutations, genus, graph_dumps, graph_from_obj,
                   graph_loads, graph_to_obj, pointing_complete, relabel,
                   smooth_bivalent, surface_complex, tile_monodromies,
                   to_standard)
from .collapse import (Context, EdgeSubset, ExceptionalData,
                       PseudosurfaceData, collapse_edge, edge_label_set,
                       exceptional_sets, is_negligible, pseudosurface,
                       quotient_ribbon, semistable_core, stable_core,
                       subgraph_ribbon)
from .stable import (PermissibleSequence, StableRibbonGraph, bar_graph,
                     bar_graph_chains, component_orders, glued_genus,
                     q_minimal_check, stabilize, stabilize_sequence,
                     validate_permissible, validate_stable)
from .metric import (ProjectedMetric, StableMetric, cell_lambda_map,
                     degenerate, degenerate_poly, extract_stable,
                     lambda_point, limits_from_path, project, project_limit,
                     reduce_almost_metric, stable_connected_subsets,
                     stable_metric_of, unital)
from .census import (CellInfo, ModuliCellComplex, all_pointings,
                     brute_force_classes, build_complex, enumerate_graphs,
                     enumerate_permissible, harer_zagier_euler, labels_for,
                     max_edges, orbifold_euler, random_membership_trials,
                     resolutions, rose, stable_certificate,
                     trivalent_classes, verify_dimensions)

__version__ = "0.1.0"
