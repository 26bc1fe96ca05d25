"""Event-driven simulation of clustered dynamic networks.

The triadic chain lives in :mod:`clustnet.triadic`, the affiliation network
in :mod:`clustnet.affiliation`; :mod:`clustnet.theory` and
:mod:`clustnet.oracle` provide the closed-form and exact references.
"""
from .backend import NAME as BACKEND
from .errors import AbsorbedError
from .graph_state import GraphState, from_edges, new_empty, read_edgelist
from .stats import SnapshotStats, snapshot, time_average
from .triadic import Chain, TriadicParams, pair_intensity, run

__all__ = [
    "AbsorbedError",
    "BACKEND",
    "Chain",
    "GraphState",
    "SnapshotStats",
    "TriadicParams",
    "from_edges",
    "new_empty",
    "pair_intensity",
    "read_edgelist",
    "run",
    "snapshot",
    "time_average",
]

__version__ = "0.1.0"
