"""Stream-reservation class budgets and the seven-hop stress scenario."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .flow import Flow
from .sim import FlowStats
from .topology import Link, NetTopology, NodeSpec

# Class A end-to-end budget over seven hops; Class B has no stated budget
# here, the default below follows common AVB guidance and is configurable.
SR_A_MAX_LATENCY = 2e-3
SR_A_MAX_JITTER = 125e-6
SR_B_MAX_LATENCY = 50e-3


@dataclass(frozen=True)
class BudgetCheck:
    """Pass/fail against the class budget with the remaining margins."""

    flow_id: str
    sr_class: str
    passed: bool
    latency_margin_s: float | None
    jitter_margin_s: float | None

    def describe(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        lat = "n/a" if self.latency_margin_s is None else f"{self.latency_margin_s:.6g} s"
        jit = "n/a" if self.jitter_margin_s is None else f"{self.jitter_margin_s:.6g} s"
        return (f"{verdict} {self.flow_id} [{self.sr_class}] "
                f"latency margin {lat}, jitter margin {jit}")


def check_sr_class(stats: FlowStats, sr_class: str | None = None, *,
                   sr_b_max_latency: float = SR_B_MAX_LATENCY) -> BudgetCheck:
    """Check one flow's statistics against its class budget.

    Class A requires max latency strictly below 2 ms and jitter strictly
    below 125 us; class B keeps a configurable latency bound; best effort
    always passes.
    """
    cls = sr_class or stats.sr_class
    if cls == "SR-A":
        lat_m = SR_A_MAX_LATENCY - stats.lat_max
        jit_m = SR_A_MAX_JITTER - stats.jitter
        return BudgetCheck(stats.flow_id, cls, lat_m > 0.0 and jit_m > 0.0, lat_m, jit_m)
    if cls == "SR-B":
        lat_m = sr_b_max_latency - stats.lat_max
        return BudgetCheck(stats.flow_id, cls, lat_m > 0.0, lat_m, None)
    return BudgetCheck(stats.flow_id, cls, True, None, None)


def seven_hop_scenario(*, link_rate: float = 1e9, processing_delay: float = 2e-6,
                       sr_frame_bytes: int = 128, sr_period: float = 250e-6,
                       cross_frame_bytes: int = 1542, cross_period: float = 10e-6,
                       with_cross_traffic: bool = True) -> tuple[NetTopology, list[Flow]]:
    """Canonical chain of seven store-and-forward switches.

    One SR-A flow runs talker -> sw1 .. sw7 -> listener. Optional best-effort
    cross traffic saturates every switch egress along the chain (the default
    cross period loads each hop above line rate).
    """
    n_sw = 7
    nodes = [NodeSpec("talker", "host"), NodeSpec("listener", "host")]
    links = []
    for i in range(1, n_sw + 1):
        nodes.append(NodeSpec(f"sw{i}", "switch", processing_delay=processing_delay))
    links.append(Link("talker", "sw1", link_rate))
    for i in range(1, n_sw):
        links.append(Link(f"sw{i}", f"sw{i + 1}", link_rate))
    links.append(Link(f"sw{n_sw}", "listener", link_rate))

    flows = [Flow(id="sr_a_main", src="talker", dst="listener", sr_class="SR-A",
                  frame_size=sr_frame_bytes, period=sr_period, offset=0.0)]
    if with_cross_traffic:
        for i in range(1, n_sw + 1):
            src = f"xsrc{i}"
            nodes.append(NodeSpec(src, "host"))
            links.append(Link(src, f"sw{i}", link_rate))
            if i < n_sw:
                dst = f"xdst{i}"
                nodes.append(NodeSpec(dst, "host"))
                links.append(Link(dst, f"sw{i + 1}", link_rate))
            else:
                dst = "listener"
            flows.append(Flow(id=f"cross{i}", src=src, dst=dst, sr_class="BE",
                              frame_size=cross_frame_bytes, period=cross_period,
                              offset=0.0))
    return NetTopology(nodes, links), flows


def seven_hop_closed_form(topology: NetTopology, frame_bytes: int) -> float:
    """Idle-chain latency for the main flow, summed hop by hop."""
    from .topology import idle_path_latency

    path = topology.path("talker", "listener")
    return idle_path_latency(topology, path, frame_bytes)


def sr_a_budget_satisfiable(n_hops: int = 8, link_rate: float = 1e9) -> float:
    """Worst-case non-preemptive blocking bound for sanity checks."""
    per_hop = (1500 + 42) * 8 / link_rate
    return n_hops * per_hop


def margin_csv(checks: list[BudgetCheck]) -> str:
    lines = ["flow_id,class,passed,latency_margin_s,jitter_margin_s"]
    for c in checks:
        lat = "" if c.latency_margin_s is None else f"{c.latency_margin_s:.9g}"
        jit = "" if c.jitter_margin_s is None else f"{c.jitter_margin_s:.9g}"
        lines.append(f"{c.flow_id},{c.sr_class},{str(c.passed).lower()},{lat},{jit}")
    return "\n".join(lines) + "\n"
