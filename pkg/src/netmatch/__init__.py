"""Housing markets on invitation networks: mechanisms, property checkers and benchmarks."""

from .market import (
    GRAPH,
    ORGANIZER,
    TREE,
    Allocation,
    InvitationNetwork,
    Market,
    MarketError,
    MarketInstance,
    OutcomeMetrics,
    ReportProfile,
    build_market,
    metrics,
    rank,
)
from .mechanisms import MechanismId, run

__version__ = "0.1.0"

__all__ = [
    "GRAPH",
    "ORGANIZER",
    "TREE",
    "Allocation",
    "InvitationNetwork",
    "Market",
    "MarketError",
    "MarketInstance",
    "MechanismId",
    "OutcomeMetrics",
    "ReportProfile",
    "build_market",
    "metrics",
    "rank",
    "run",
]
