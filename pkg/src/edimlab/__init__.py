"""Metric and edge metric dimension of graphs, with G(n, p) theory and Monte Carlo checks."""

from .errors import (
    CapExceededError,
    DegenerateSamplingError,
    EdgeListFormatError,
    EdimlabError,
    InfeasibleError,
    SearchTooLargeError,
)
from .graph_core import (
    UNREACHABLE,
    DistanceMatrix,
    Graph,
    all_pairs_distances,
    bfs_distances,
    diameter,
    generate_er,
    read_edge_list,
    write_edge_list,
)
from .resolving import (
    CoverInstance,
    Mode,
    PairType,
    build_cover_instance,
    classify_pair,
    edge_signature,
    edge_vertex_distance,
    is_edge_generating_set,
    is_generating_set,
    vertex_signature,
)
from .solvers import (
    Method,
    SolveResult,
    branch_and_bound,
    brute_force_minimum,
    edge_metric_dimension,
    greedy_cover,
    metric_dimension,
)
from .theory import TheoryParams, theory_params

__version__ = "0.1.0"
