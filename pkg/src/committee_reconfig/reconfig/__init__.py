"""Committee-graph search and constructive reconfiguration paths."""

from .approx import connect_ejr_4approx, connect_two_jr, four_ejr_core, removal_order
from .nonisolation import ONLY_COMMITTEE, UNIQUE, Neighbor, non_isolation_witness
from .rule_paths import (
    AffordableLink,
    connect_affordable,
    connect_rule_outputs,
    connect_to_affordable_jr,
)
from .search import (
    NOT_ISOLATED,
    BudgetExceeded,
    Path,
    PathError,
    Predicate,
    bfs_connect,
    committee_graph_dot,
    component,
    isolation_radius,
    neighbors,
)

__all__ = [
    "AffordableLink",
    "BudgetExceeded",
    "NOT_ISOLATED",
    "Neighbor",
    "ONLY_COMMITTEE",
    "Path",
    "PathError",
    "Predicate",
    "UNIQUE",
    "bfs_connect",
    "committee_graph_dot",
    "component",
    "connect_affordable",
    "connect_ejr_4approx",
    "connect_rule_outputs",
    "connect_to_affordable_jr",
    "connect_two_jr",
    "four_ejr_core",
    "isolation_radius",
    "neighbors",
    "non_isolation_witness",
    "removal_order",
]
