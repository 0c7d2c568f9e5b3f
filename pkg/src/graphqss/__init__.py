"""Graph-state secret sharing: labeled graph states, access analysis and protocol simulation."""

from .errors import DomainError, ResourceError, UnsupportedError
from .graph_core import (
    Graph,
    LabeledGraphState,
    LabelVector,
    conjugate_graph,
    local_complement,
    measure_y_rule,
    measure_z_rule,
    neighbours,
    shuffle_p1,
)
from .pauli import PauliOperator, graph_stabilizers, group_member_with_support, pauli_mul
from .tableau import StabilizerTableau, tableau_from_graph, tableau_measure

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "Graph",
    "LabelVector",
    "LabeledGraphState",
    "PauliOperator",
    "ResourceError",
    "StabilizerTableau",
    "UnsupportedError",
    "conjugate_graph",
    "graph_stabilizers",
    "group_member_with_support",
    "local_complement",
    "measure_y_rule",
    "measure_z_rule",
    "neighbours",
    "pauli_mul",
    "shuffle_p1",
    "tableau_from_graph",
    "tableau_measure",
]
