"""Deterministic discrete-event simulation of the switched network.

Store-and-forward switching, per-egress-port priority queues, credit-based
shaping for stream-reservation classes, and per-flow latency statistics.
Three scheduling modes:

* ``cbs``: strict priority with credit-based shaping on SR queues,
* ``priority``: strict priority only,
* ``fifo``: one shared queue, no differentiation (the unshaped baseline).
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .cbs import CbsState, cbs_advance
from .flow import Flow
from .topology import NetTopology

PRIORITY = {"SR-A": 6, "SR-B": 5, "BE": 0}
N_QUEUES = 8
SHAPING_MODES = ("cbs", "priority", "fifo")
CREDIT_EPS = 1e-9
TIME_EPS = 1e-12
MIN_INTERFERENCE_BITS = (1500 + 42) * 8

_GEN, _ARRIVE, _FORWARD, _TX_END, _WAKE = range(5)


@dataclass
class FlowStats:
    """Per-flow delivery accounting; jitter is max minus min latency."""

    flow_id: str
    sr_class: str
    generated: int = 0
    delivered: int = 0
    dropped: int = 0
    lat_min: float = math.inf
    lat_mean: float = 0.0
    lat_max: float = 0.0
    _lat_sum: float = 0.0

    @property
    def jitter(self) -> float:
        if self.delivered == 0:
            return 0.0
        return self.lat_max - self.lat_min

    @property
    def in_flight(self) -> int:
        return self.generated - self.delivered - self.dropped

    def finalize(self):
        if self.delivered:
            self.lat_mean = self._lat_sum / self.delivered
        else:
            self.lat_min = 0.0


STATS_CSV_HEADER = "flow_id,class,count,lat_min_s,lat_mean_s,lat_max_s,jitter_s,drops"


def stats_to_csv(stats: dict[str, FlowStats]) -> str:
    lines = [STATS_CSV_HEADER]
    for fid in sorted(stats):
        s = stats[fid]
        lines.append(f"{fid},{s.sr_class},{s.delivered},{s.lat_min:.9g},"
                     f"{s.lat_mean:.9g},{s.lat_max:.9g},{s.jitter:.9g},{s.dropped}")
    return "\n".join(lines) + "\n"


class _Port:
    """Egress port of one directed edge."""

    __slots__ = ("node", "neighbor", "rate", "prop", "queues", "cbs", "busy",
                 "transmitting_q", "last_t", "wake_at", "capacity", "drops_by_q")

    def __init__(self, node, neighbor, rate, prop, capacity):
        self.node = node
        self.neighbor = neighbor
        self.rate = rate
        self.prop = prop
        self.queues = [deque() for _ in range(N_QUEUES)]
        self.cbs: dict[int, CbsState] = {}
        self.busy = False
        self.transmitting_q = -1
        self.last_t = 0.0
        self.wake_at = math.inf
        self.capacity = capacity
        self.drops_by_q = [0] * N_QUEUES


class SimResult:
    def __init__(self, stats: dict[str, FlowStats], cbs_advances: int):
        self.stats = stats
        self.cbs_advances = cbs_advances

    def to_csv(self) -> str:
        return stats_to_csv(self.stats)


class Simulator:
    def __init__(self, topology: NetTopology, flows: list[Flow], duration: float,
                 seed: int = 0, *, shaping: str = "cbs", queue_capacity: int = 2048,
                 idle_slope_factor: float = 1.2, strict: bool = True):
        if shaping not in SHAPING_MODES:
            raise ValueError(f"shaping must be one of {SHAPING_MODES}")
        if duration <= 0.0:
            raise ValueError("duration must be positive")
        ids = [f.id for f in flows]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate flow ids")
        self.topology = topology
        self.flows = sorted(flows, key=lambda f: f.id)
        self.duration = duration
        self.shaping = shaping
        self.queue_capacity = queue_capacity
        self.idle_slope_factor = idle_slope_factor
        self.cbs_advances = 0

        if strict and self.flows:
            slowest = max(f.period for f in self.flows)
            if duration < 100.0 * slowest:
                raise ValueError(
                    f"duration {duration} s covers fewer than 100 periods of the "
                    f"slowest flow ({slowest} s); pass strict=False to override"
                )

        rng = np.random.default_rng(seed)
        self._offsets = {}
        for f in self.flows:
            if f.offset is None:
                self._offsets[f.id] = float(rng.uniform(0.0, f.period))
            else:
                self._offsets[f.id] = f.offset

        # Routing and per-flow next-hop tables; rejects unreachable pairs.
        self._paths = {f.id: topology.path(f.src, f.dst) for f in self.flows}
        self._ports: dict[tuple[str, str], _Port] = {}
        for f in self.flows:
            path = self._paths[f.id]
            for a, b in zip(path[:-1], path[1:]):
                if (a, b) not in self._ports:
                    link = topology.link_between(a, b)
                    self._ports[(a, b)] = _Port(a, b, link.rate, link.prop_delay,
                                                queue_capacity)
        self._next_hop = {}
        for f in self.flows:
            path = self._paths[f.id]
            for a, b in zip(path[:-1], path[1:]):
                self._next_hop[(a, f.dst)] = b

        if shaping == "cbs":
            self._setup_cbs()

        self.stats = {f.id: FlowStats(f.id, f.sr_class) for f in self.flows}

    def _queue_index(self, sr_class: str) -> int:
        if self.shaping == "fifo":
            return 0
        return PRIORITY[sr_class]

    def _setup_cbs(self):
        agg: dict[tuple[str, str], dict[int, float]] = {}
        max_frame: dict[tuple[str, str], dict[int, float]] = {}
        interference: dict[tuple[str, str], float] = {}
        for f in self.flows:
            path = self._paths[f.id]
            q = self._queue_index(f.sr_class)
            bits = f.max_frame_size() * 8.0
            for a, b in zip(path[:-1], path[1:]):
                key = (a, b)
                interference[key] = max(interference.get(key, MIN_INTERFERENCE_BITS), bits)
                if f.sr_class in ("SR-A", "SR-B"):
                    agg.setdefault(key, {}).setdefault(q, 0.0)
                    agg[key][q] += f.bitrate()
                    max_frame.setdefault(key, {}).setdefault(q, 0.0)
                    max_frame[key][q] = max(max_frame[key][q], bits)
        for key, per_q in agg.items():
            port = self._ports[key]
            for q, bitrate in per_q.items():
                idle = min(self.idle_slope_factor * bitrate, port.rate)
                send = idle - port.rate
                hi = interference[key] * idle / port.rate
                lo = max_frame[key][q] * send / port.rate
                port.cbs[q] = CbsState(credit=0.0, idle_slope=idle, send_slope=send,
                                       hi_credit=hi, lo_credit=lo)

    # -- event machinery ---------------------------------------------------

    def _advance_credits(self, port: _Port, now: float):
        dt = now - port.last_t
        if dt < 0.0:
            dt = 0.0
        for q, state in port.cbs.items():
            new = cbs_advance(state, dt,
                              transmitting=(port.busy and port.transmitting_q == q),
                              queue_nonempty=bool(port.queues[q]))
            self.cbs_advances += 1
            assert new.lo_credit - CREDIT_EPS <= new.credit <= new.hi_credit + CREDIT_EPS
            port.cbs[q] = new
        port.last_t = now

    def _try_start(self, port: _Port, now: float, heap, push):
        if port.busy:
            return
        self._advance_credits(port, now)
        for q in range(N_QUEUES - 1, -1, -1):
            queue = port.queues[q]
            if not queue:
                continue
            state = port.cbs.get(q)
            if state is not None and state.credit < 0.0:
                # Deficits that recover within a picosecond count as
                # recovered; otherwise a same-timestamp wake could
                # reschedule itself forever once the recovery time drops
                # below the float resolution of `now`.
                recover = ((-state.credit) / state.idle_slope
                           if state.idle_slope > 0.0 else math.inf)
                if recover > TIME_EPS:
                    if math.isfinite(recover):
                        t_wake = now + recover
                        if t_wake < port.wake_at - 1e-15:
                            port.wake_at = t_wake
                            push(heap, t_wake, _WAKE, port)
                    continue
            frame = queue.popleft()
            port.busy = True
            port.transmitting_q = q
            # frame = [flow_id, size, dst, latency, t_enqueue]
            frame[3] += now - frame[4]
            tx_time = frame[1] * 8.0 / port.rate
            push(heap, now + tx_time, _TX_END, (port, frame, tx_time))
            return
        port.transmitting_q = -1

    def _enqueue(self, port: _Port, frame, q: int, now: float, heap, push):
        self._advance_credits(port, now)
        if len(port.queues[q]) >= port.capacity:
            port.drops_by_q[q] += 1
            self.stats[frame[0]].dropped += 1
            return
        frame[4] = now
        port.queues[q].append(frame)
        self._try_start(port, now, heap, push)

    def run(self) -> SimResult:
        heap: list = []
        seq = [0]

        def push(h, t, kind, data):
            seq[0] += 1
            heapq.heappush(h, (t, seq[0], kind, data))

        flow_by_id = {f.id: f for f in self.flows}
        for f in self.flows:
            off = self._offsets[f.id]
            if off < self.duration:
                push(heap, off, _GEN, (f.id, 0))

        proc = {nid: n.processing_delay for nid, n in self.topology.nodes.items()}
        kinds = {nid: n.kind for nid, n in self.topology.nodes.items()}

        while heap:
            now, _, kind, data = heapq.heappop(heap)
            if kind == _GEN:
                fid, k = data
                f = flow_by_id[fid]
                st = self.stats[fid]
                q = self._queue_index(f.sr_class)
                port = self._ports[(f.src, self._next_hop[(f.src, f.dst)])]
                for size in f.frame_sizes():
                    st.generated += 1
                    frame = [fid, size, f.dst, 0.0, now]
                    self._enqueue(port, frame, q, now, heap, push)
                t_next = self._offsets[fid] + (k + 1) * f.period
                if t_next < self.duration:
                    push(heap, t_next, _GEN, (fid, k + 1))
            elif kind == _TX_END:
                port, frame, tx_time = data
                self._advance_credits(port, now)
                port.busy = False
                port.transmitting_q = -1
                frame[3] += tx_time
                frame[3] += port.prop
                push(heap, now + port.prop, _ARRIVE, (port.neighbor, frame))
                self._try_start(port, now, heap, push)
            elif kind == _ARRIVE:
                node, frame = data
                if node == frame[2]:
                    st = self.stats[frame[0]]
                    lat = frame[3]
                    st.delivered += 1
                    st._lat_sum += lat
                    if lat < st.lat_min:
                        st.lat_min = lat
                    if lat > st.lat_max:
                        st.lat_max = lat
                elif kinds[node] == "switch":
                    frame[3] += proc[node]
                    push(heap, now + proc[node], _FORWARD, (node, frame))
                else:
                    raise RuntimeError(f"frame for {frame[2]!r} stranded at host {node!r}")
            elif kind == _FORWARD:
                node, frame = data
                f = flow_by_id[frame[0]]
                port = self._ports[(node, self._next_hop[(node, frame[2])])]
                self._enqueue(port, frame, self._queue_index(f.sr_class), now, heap, push)
            else:  # _WAKE
                port = data
                port.wake_at = math.inf
                self._try_start(port, now, heap, push)

        for st in self.stats.values():
            st.finalize()
        return SimResult(self.stats, self.cbs_advances)


def simulate(topology: NetTopology, flows: list[Flow], duration: float,
             seed: int = 0, **kwargs) -> SimResult:
    """Run one deterministic network simulation; see Simulator."""
    return Simulator(topology, flows, duration, seed, **kwargs).run()
