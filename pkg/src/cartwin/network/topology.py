"""Switched network graph: nodes, full-duplex links, deterministic routing."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from ..config import ConfigError, reject_unknown_keys

GIGABIT = 1e9
RADAR_LINK = 100e6
UPLINK = 40e9
DEFAULT_PROCESSING_DELAY = 2e-6


@dataclass(frozen=True)
class NodeSpec:
    """Host (endpoint) or store-and-forward switch."""

    id: str
    kind: str  # "host" | "switch"
    processing_delay: float = 0.0

    def __post_init__(self):
        if self.kind not in ("host", "switch"):
            raise ValueError(f"node {self.id!r}: kind must be host or switch")
        if self.processing_delay < 0.0 or not math.isfinite(self.processing_delay):
            raise ValueError(f"node {self.id!r}: processing delay must be >= 0")


@dataclass(frozen=True)
class Link:
    """Full-duplex link; each direction is an independent egress port."""

    a: str
    b: str
    rate: float
    prop_delay: float = 0.0

    def __post_init__(self):
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise ValueError(f"link {self.a}-{self.b}: rate must be positive")
        if self.prop_delay < 0.0 or not math.isfinite(self.prop_delay):
            raise ValueError(f"link {self.a}-{self.b}: prop delay must be >= 0")


class NetTopology:
    """Validated connected graph with shortest-path next-hop routing."""

    def __init__(self, nodes: list[NodeSpec], links: list[Link]):
        self.nodes = {n.id: n for n in nodes}
        if len(self.nodes) != len(nodes):
            raise ValueError("duplicate node ids")
        self.links: dict[tuple[str, str], Link] = {}
        self._adj: dict[str, list[str]] = {n.id: [] for n in nodes}
        for link in links:
            for end in (link.a, link.b):
                if end not in self.nodes:
                    raise ValueError(f"link references unknown node {end!r}")
            key = tuple(sorted((link.a, link.b)))
            if key in self.links:
                raise ValueError(f"duplicate link between {key[0]} and {key[1]}")
            self.links[key] = link
            self._adj[link.a].append(link.b)
            self._adj[link.b].append(link.a)
        for nid in self._adj:
            self._adj[nid].sort()
        if nodes and not self._connected():
            raise ValueError("topology is not connected")
        self._paths: dict[tuple[str, str], list[str]] = {}

    def _connected(self) -> bool:
        start = next(iter(self.nodes))
        seen = {start}
        todo = deque([start])
        while todo:
            cur = todo.popleft()
            for nxt in self._adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        return len(seen) == len(self.nodes)

    def link_between(self, a: str, b: str) -> Link:
        return self.links[tuple(sorted((a, b)))]

    def path(self, src: str, dst: str) -> list[str]:
        """BFS shortest path, deterministic by sorted neighbor order."""
        if src not in self.nodes or dst not in self.nodes:
            raise ValueError(f"unknown endpoint in path {src!r} -> {dst!r}")
        key = (src, dst)
        if key in self._paths:
            return self._paths[key]
        parent: dict[str, str] = {src: src}
        todo = deque([src])
        while todo:
            cur = todo.popleft()
            if cur == dst:
                break
            for nxt in self._adj[cur]:
                if nxt not in parent:
                    parent[nxt] = cur
                    todo.append(nxt)
        if dst not in parent:
            raise ValueError(f"no path from {src!r} to {dst!r}")
        rev = [dst]
        while rev[-1] != src:
            rev.append(parent[rev[-1]])
        path = list(reversed(rev))
        self._paths[key] = path
        return path

    def hosts(self) -> list[str]:
        return sorted(n.id for n in self.nodes.values() if n.kind == "host")

    def switches(self) -> list[str]:
        return sorted(n.id for n in self.nodes.values() if n.kind == "switch")


def idle_path_latency(topology: NetTopology, path: list[str], frame_bytes: int) -> float:
    """Closed-form end-to-end latency on an idle network.

    Store-and-forward: per link, transmission plus propagation; per
    intermediate switch, its processing delay. Summed in hop order so the
    simulator reproduces it exactly.
    """
    bits = frame_bytes * 8.0
    total = 0.0
    for i in range(len(path) - 1):
        link = topology.link_between(path[i], path[i + 1])
        total += bits / link.rate
        total += link.prop_delay
        if i + 1 < len(path) - 1:
            total += topology.nodes[path[i + 1]].processing_delay
    return total


def build_topology(config: dict) -> NetTopology:
    """Build a topology from a config mapping.

    Schema: ``nodes: [{id, kind, processing_delay?}]`` and
    ``links: [{a, b, rate, prop_delay?}]``.
    """
    reject_unknown_keys(config, {"nodes", "links"}, context="network topology")
    nodes = []
    for raw in config.get("nodes", []):
        reject_unknown_keys(raw, {"id", "kind", "processing_delay"},
                            context=f"node {raw.get('id')!r}")
        try:
            nodes.append(NodeSpec(id=str(raw["id"]), kind=str(raw.get("kind", "host")),
                                  processing_delay=float(raw.get("processing_delay", 0.0))))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad node entry {raw!r}: {exc}") from exc
    links = []
    for raw in config.get("links", []):
        reject_unknown_keys(raw, {"a", "b", "rate", "prop_delay"},
                            context=f"link {raw.get('a')!r}-{raw.get('b')!r}")
        try:
            links.append(Link(a=str(raw["a"]), b=str(raw["b"]), rate=float(raw["rate"]),
                              prop_delay=float(raw.get("prop_delay", 0.0))))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad link entry {raw!r}: {exc}") from exc
    try:
        return NetTopology(nodes, links)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def vehicle_topology(rig=None, *, sensor_ids=None) -> NetTopology:
    """Default preset: all sensors into one switch, dual uplinks to two
    compute endpoints. Radar units attach at 100 Mbit/s, everything else at
    1 Gbit/s, uplinks at 40 Gbit/s."""
    rates = {}
    if rig is not None:
        for spec, _ in rig.sensors:
            rate = RADAR_LINK if spec.modality == "radar" else GIGABIT
            rates.setdefault(spec.unit, rate)
    elif sensor_ids is not None:
        for sid in sensor_ids:
            rates[sid] = RADAR_LINK if "radar" in sid else GIGABIT
    else:
        raise ValueError("vehicle_topology needs a rig or sensor ids")

    nodes = [NodeSpec("switch0", "switch", processing_delay=DEFAULT_PROCESSING_DELAY),
             NodeSpec("hpc_a", "host"), NodeSpec("hpc_b", "host")]
    links = [Link("switch0", "hpc_a", UPLINK), Link("switch0", "hpc_b", UPLINK)]
    for unit in sorted(rates):
        nodes.append(NodeSpec(unit, "host"))
        links.append(Link(unit, "switch0", rates[unit]))
    return NetTopology(nodes, links)
