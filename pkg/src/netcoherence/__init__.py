"""Network topology design for low coherence (small trace of the Laplacian pseudoinverse)."""
from .coherence import CoherenceValue, coherence, coherence_spectral
from .graph import (
    CandidateEdge,
    Graph,
    GraphError,
    IncidenceRow,
    add_edge,
    candidate_edges,
    incidence_row,
    is_connected,
    laplacian,
    new_graph,
)
from .greedy import SelectionReport, greedy_bound, greedy_bound_certificate, lazy_greedy, naive_greedy
from .pinv import (
    PinvState,
    attach_gain,
    attach_update,
    graph_state,
    marginal_trace_decrease,
    pinv_symmetric,
    project_onto_nullspace,
    rank_one_update,
)
from .tree import attach_nodes, build_tree, star_certificate

__version__ = "0.1.0"
