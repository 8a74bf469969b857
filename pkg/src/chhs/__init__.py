"""chhs: combinatorial hierarchical hyperbolicity toolkit.

Finite flag simplicial complexes with graphs on their maximal simplices,
the full link/saturation calculus, exact graph hyperbolicity, coarse
projections, and verification of the combinatorial axiom systems with
witnesses and instance constants.
"""

from .complexes import (
    FlagComplex,
    SimplexClass,
    Subcomplex,
    build_flag_complex,
    complexity,
    link,
    saturation,
    simplex_classes,
)
from .documents import Instance, emit_instance, parse_instance
from .errors import ChhsError
from .generators import (
    AmalgamSpec,
    BlowupSpec,
    gen_amalgam,
    gen_blowup,
    gen_library,
)
from .metric import (
    INF,
    MetricGraph,
    QiReport,
    coarse_projection,
    gromov_delta,
    qi_constants,
    shortest_path_metric,
)
from .projections import (
    HHSConstants,
    ProjectionTable,
    bgi_constants,
    distance_formula_fit,
    hhs_constants,
    pi_projection,
    projection_table,
    realize_tuple,
    rho,
)
from .relations import Rel, RelationTable, co_level, iota_star, relation_table
from .spaces import (
    AugmentedGraph,
    XGraph,
    build_augmented,
    c_space,
    coned_intermediate,
    induced_link_graph,
    y_space,
)
from .verify import (
    VerificationReport,
    build_w_from_link_edges,
    check_action,
    check_condition4,
    check_thmA_conditions,
    verify_chhs,
)

__version__ = "0.1.0"

__all__ = [
    "AmalgamSpec", "AugmentedGraph", "BlowupSpec", "ChhsError", "FlagComplex",
    "HHSConstants", "INF", "Instance", "MetricGraph", "ProjectionTable",
    "QiReport", "Rel", "RelationTable", "SimplexClass", "Subcomplex",
    "VerificationReport", "XGraph", "bgi_constants", "build_augmented",
    "build_flag_complex", "build_w_from_link_edges", "c_space", "check_action",
    "check_condition4", "check_thmA_conditions", "co_level",
    "coarse_projection", "complexity", "coned_intermediate",
    "distance_formula_fit", "emit_instance", "gen_amalgam", "gen_blowup",
    "gen_library", "gromov_delta", "hhs_constants", "induced_link_graph",
    "iota_star", "link", "parse_instance", "pi_projection", "projection_table",
    "qi_constants", "realize_tuple", "relation_table", "rho", "saturation",
    "shortest_path_metric", "simplex_classes", "verify_chhs", "y_space",
]
