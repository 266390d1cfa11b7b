"""In-vehicle switched-network simulation with credit-based shaping."""

from .budgets import (
    SR_A_MAX_JITTER,
    SR_A_MAX_LATENCY,
    SR_B_MAX_LATENCY,
    BudgetCheck,
    check_sr_class,
    margin_csv,
    seven_hop_closed_form,
    seven_hop_scenario,
)
from .cbs import CbsState, cbs_advance
from .flow import Flow, FlowValidationError, flows_from_rig, segment_payload
from .sim import FlowStats, SimResult, Simulator, simulate, stats_to_csv
from .topology import (
    Link,
    NetTopology,
    NodeSpec,
    build_topology,
    idle_path_latency,
    vehicle_topology,
)

__all__ = [
    "BudgetCheck", "CbsState", "Flow", "FlowStats", "FlowValidationError",
    "Link", "NetTopology", "NodeSpec", "SR_A_MAX_JITTER", "SR_A_MAX_LATENCY",
    "SR_B_MAX_LATENCY", "SimResult", "Simulator", "build_topology",
    "cbs_advance", "check_sr_class", "flows_from_rig", "idle_path_latency",
    "margin_csv", "segment_payload", "seven_hop_closed_form",
    "seven_hop_scenario", "simulate", "stats_to_csv", "vehicle_topology",
]
