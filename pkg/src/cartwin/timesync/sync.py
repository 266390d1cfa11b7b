"""Two-step sync exchanges and the cascaded synchronization simulation.

The hierarchy mirrors the vehicle: one grandmaster, a boundary clock on the
main compute node, the switch as transparent clock, and ordinary clocks in
the sensors, so end devices are two hops from the boundary clock. Best
master selection is not modeled; the tree is static.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clock import ClockModel, read_clock, servo_update
from .messages import PtpMessageRecord, transparent_correction


@dataclass(frozen=True)
class SyncPath:
    """Propagation path between a master and a slave clock.

    ``forward_delays`` apply master-to-slave per link; the reverse direction
    defaults to symmetric. ``tc_residences`` holds (min, max) residence
    bounds for each transparent clock on the path; a residence is drawn per
    traversal. ``apply_correction`` models whether those clocks stamp the
    correction field (disabling it exposes the raw residence error).
    """

    forward_delays: tuple[float, ...]
    reverse_delays: tuple[float, ...] | None = None
    tc_residences: tuple[tuple[float, float], ...] = ()
    apply_correction: bool = True

    def __post_init__(self):
        for d in self.forward_delays + (self.reverse_delays or ()):
            if d < 0.0 or not math.isfinite(d):
                raise ValueError("link delays must be finite and >= 0")
        for lo, hi in self.tc_residences:
            if not 0.0 <= lo <= hi:
                raise ValueError("residence bounds must satisfy 0 <= min <= max")

    def draw(self, rng: np.random.Generator | None, reverse: bool = False):
        """One traversal: (total delay, message-correction increment)."""
        delays = self.forward_delays if not reverse or self.reverse_delays is None \
            else self.reverse_delays
        total = 0.0
        msg = PtpMessageRecord(kind="Sync")
        for lo, hi in self.tc_residences:
            if hi > lo and rng is not None:
                res = rng.uniform(lo, hi)
            else:
                res = lo
            total += res
            if self.apply_correction:
                msg = transparent_correction(msg, res)
        return sum(delays) + total, msg.correction_field


def sync_exchange(master: ClockModel, slave: ClockModel, path: SyncPath,
                  true_time: float = 0.0,
                  rng: np.random.Generator | None = None) -> tuple[float, float]:
    """One two-step sync plus delay-request exchange.

    Returns (offset_estimate, delay_estimate) of the slave relative to the
    master. With symmetric delays and zero noise the estimates are exact;
    transparent-clock corrections cancel residence times on both legs.
    """
    # Sync / FollowUp leg: master -> slave
    t1 = read_clock(master, true_time, rng)
    fwd_delay, fwd_corr = path.draw(rng, reverse=False)
    t_arrival = true_time + fwd_delay
    t2 = read_clock(slave, t_arrival, rng) - fwd_corr

    # DelayReq / DelayResp leg: slave -> master
    t3 = read_clock(slave, t_arrival, rng)
    rev_delay, rev_corr = path.draw(rng, reverse=True)
    t_return = t_arrival + rev_delay
    t4 = read_clock(master, t_return, rng) - rev_corr

    offset_estimate = ((t2 - t1) - (t4 - t3)) / 2.0
    delay_estimate = ((t2 - t1) + (t4 - t3)) / 2.0
    return offset_estimate, delay_estimate


@dataclass
class SyncTopology:
    """Static clock tree: one GM, one BC below it, ordinary clocks below."""

    clocks: dict[str, ClockModel]
    gm_bc_path: SyncPath
    oc_paths: dict[str, SyncPath]

    def __post_init__(self):
        gms = [c for c in self.clocks.values() if c.role == "GM"]
        if len(gms) != 1:
            raise ValueError(f"topology needs exactly one GM, found {len(gms)}")
        bcs = [c for c in self.clocks.values() if c.role == "BC"]
        if len(bcs) != 1:
            raise ValueError(f"topology needs exactly one BC, found {len(bcs)}")
        for oc_id in self.oc_paths:
            clock = self.clocks.get(oc_id)
            if clock is None or clock.role != "OC":
                raise ValueError(f"sync path given for non-OC node {oc_id!r}")
        ocs = [c.node_id for c in self.clocks.values() if c.role == "OC"]
        missing = sorted(set(ocs) - set(self.oc_paths))
        if missing:
            raise ValueError(f"OC nodes without a sync path: {missing}")

    @property
    def gm(self) -> ClockModel:
        return next(c for c in self.clocks.values() if c.role == "GM")

    @property
    def bc(self) -> ClockModel:
        return next(c for c in self.clocks.values() if c.role == "BC")

    def ordinary_clocks(self) -> list[ClockModel]:
        return sorted((c for c in self.clocks.values() if c.role == "OC"),
                      key=lambda c: c.node_id)


def vehicle_sync_topology(oc_ids, *, drift_gm: float = 7.92e-9,
                          drift_others: float = 7.92e-9,
                          noise_sigma: float = 100e-9,
                          link_delay: float = 500e-9,
                          residence: tuple[float, float] = (1e-6, 10e-6)) -> SyncTopology:
    """Default chain: GM -> BC (compute node) -> switch TC -> sensor OCs.

    Drift signs alternate per clock so the population is not biased.
    """
    clocks = {
        "gm": ClockModel("gm", "GM", drift_rate=drift_gm,
                         timestamp_noise_sigma=noise_sigma),
        "bc": ClockModel("bc", "BC", drift_rate=-drift_others,
                         timestamp_noise_sigma=noise_sigma),
        "switch": ClockModel("switch", "TC"),
    }
    for i, oc in enumerate(oc_ids):
        sign = 1.0 if i % 2 == 0 else -1.0
        clocks[oc] = ClockModel(oc, "OC", drift_rate=sign * drift_others,
                                timestamp_noise_sigma=noise_sigma)
    gm_bc = SyncPath(forward_delays=(link_delay,))
    oc_paths = {oc: SyncPath(forward_delays=(link_delay, link_delay),
                             tc_residences=(residence,))
                for oc in oc_ids}
    return SyncTopology(clocks=clocks, gm_bc_path=gm_bc, oc_paths=oc_paths)


@dataclass
class SyncTraces:
    """Offset traces relative to grandmaster time, one row per node per round."""

    times: np.ndarray
    offsets_to_gm: dict[str, np.ndarray]
    offsets_abs: dict[str, np.ndarray]
    summary: dict[str, dict[str, float]] = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["time_s,node_id,offset_s"]
        for node in sorted(self.offsets_to_gm):
            for t, o in zip(self.times, self.offsets_to_gm[node]):
                lines.append(f"{t:.10g},{node},{o:.12g}")
        return "\n".join(lines) + "\n"


def run_sync_simulation(topology: SyncTopology, duration: float,
                        sync_interval: float, seed: int = 0) -> SyncTraces:
    """Periodic sync rounds down the tree with servo updates.

    Each round the BC synchronizes to the GM, then every OC synchronizes to
    the BC through the transparent clock. Reported offsets are relative to
    grandmaster time (the quantity the protocol controls); absolute offsets
    to true time are recorded alongside.
    """
    if duration <= 0 or sync_interval <= 0:
        raise ValueError("duration and sync_interval must be positive")
    rng = np.random.default_rng(seed)
    n_rounds = int(math.floor(duration / sync_interval)) + 1
    ocs = topology.ordinary_clocks()
    nodes = [topology.gm, topology.bc, *ocs]

    times = np.empty(n_rounds)
    rel = {c.node_id: np.empty(n_rounds) for c in nodes}
    absolute = {c.node_id: np.empty(n_rounds) for c in nodes}

    for k in range(n_rounds):
        t = k * sync_interval
        est, _ = sync_exchange(topology.gm, topology.bc, topology.gm_bc_path, t, rng)
        servo_update(topology.bc, est)
        for oc in ocs:
            est, _ = sync_exchange(topology.bc, oc, topology.oc_paths[oc.node_id], t, rng)
            servo_update(oc, est)
        times[k] = t
        gm_off = topology.gm.current_offset(t)
        for c in nodes:
            off = c.current_offset(t)
            absolute[c.node_id][k] = off
            rel[c.node_id][k] = off - gm_off

    summary = {}
    half = n_rounds // 2
    for c in nodes:
        r = rel[c.node_id]
        summary[c.node_id] = {
            "max_abs_offset_s": float(np.max(np.abs(r))),
            "steady_rms_offset_s": float(np.sqrt(np.mean(r[half:] ** 2))),
        }
    return SyncTraces(times=times, offsets_to_gm=rel, offsets_abs=absolute,
                      summary=summary)
