"""Traffic flows and their derivation from the sensor rig."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..sensors.flows import sensor_flow_spec
from .topology import NetTopology

CLASSES = ("SR-A", "SR-B", "BE")
MTU_PAYLOAD = 1500
FRAME_OVERHEAD = 42  # header + FCS + preamble + gap + tag

DEFAULT_CLASS_BY_MODALITY = {
    "camera": "SR-B",
    "lidar": "SR-B",
    "radar": "SR-A",
    "gnss": "SR-A",
    "microphone": "SR-B",
}


@dataclass(frozen=True)
class Flow:
    """Periodic stream of ``frames_per_period`` wire frames.

    ``frame_size`` is the on-wire size in bytes of every frame except the
    last of each burst, which is ``last_frame_size``.
    """

    id: str
    src: str
    dst: str
    sr_class: str
    frame_size: int
    period: float
    offset: float | None = 0.0
    frames_per_period: int = 1
    last_frame_size: int | None = None

    def __post_init__(self):
        if self.sr_class not in CLASSES:
            raise ValueError(f"flow {self.id!r}: class must be one of {CLASSES}")
        if not (self.period > 0.0 and math.isfinite(self.period)):
            raise ValueError(f"flow {self.id!r}: period must be positive")
        if self.frame_size <= 0 or self.frames_per_period <= 0:
            raise ValueError(f"flow {self.id!r}: frame sizing must be positive")
        if self.offset is not None and self.offset < 0.0:
            raise ValueError(f"flow {self.id!r}: offset must be >= 0")

    def frame_sizes(self) -> list[int]:
        sizes = [self.frame_size] * self.frames_per_period
        if self.last_frame_size is not None:
            sizes[-1] = self.last_frame_size
        return sizes

    def bits_per_period(self) -> float:
        return sum(self.frame_sizes()) * 8.0

    def bitrate(self) -> float:
        return self.bits_per_period() / self.period

    def max_frame_size(self) -> int:
        return max(self.frame_sizes())


class FlowValidationError(ValueError):
    pass


def segment_payload(payload: int, mtu: int = MTU_PAYLOAD,
                    overhead: int = FRAME_OVERHEAD) -> tuple[int, int, int]:
    """Split a per-frame payload into wire frames.

    Returns (frames_per_period, frame_size, last_frame_size), all on-wire.
    """
    n = max(1, math.ceil(payload / mtu))
    full = mtu + overhead
    last = payload - (n - 1) * mtu + overhead
    if n == 1:
        return 1, payload + overhead, payload + overhead
    return n, full, last


def flows_from_rig(rig, topology: NetTopology, *,
                   dst_cycle=("hpc_a", "hpc_b"),
                   class_by_modality=None,
                   mtu: int = MTU_PAYLOAD,
                   overhead: int = FRAME_OVERHEAD) -> list[Flow]:
    """One periodic flow per physical sensor unit with a payload.

    Payloads above one MTU are segmented into back-to-back frames. A flow
    whose wire bitrate exceeds its source link rate is rejected with an
    error naming the sensor (the payload must then be configured chunked or
    compressed).
    """
    classes = dict(DEFAULT_CLASS_BY_MODALITY)
    if class_by_modality:
        classes.update(class_by_modality)
    flows = []
    seen_units = []
    for spec, _ in rig.sensors:
        if spec.unit in seen_units or spec.payload_per_frame <= 0:
            continue
        seen_units.append(spec.unit)
        fs = sensor_flow_spec(spec)
        n, size, last = segment_payload(spec.payload_per_frame, mtu, overhead)
        sr_class = classes.get(spec.modality, "BE")
        dst = dst_cycle[(len(flows)) % len(dst_cycle)]
        if sr_class in ("SR-A", "SR-B") and n > 1:
            # Stream-reservation talkers pace their cycle payload uniformly
            # instead of dumping one line-rate burst per measurement cycle;
            # an instantaneous burst can never hold the class A latency
            # budget once shaped to the reserved bandwidth.
            per_frame = math.ceil(spec.payload_per_frame / n) + overhead
            flow = Flow(
                id=f"flow_{spec.unit}",
                src=spec.unit,
                dst=dst,
                sr_class=sr_class,
                frame_size=per_frame,
                period=fs.period_s / n,
            )
        else:
            flow = Flow(
                id=f"flow_{spec.unit}",
                src=spec.unit,
                dst=dst,
                sr_class=sr_class,
                frame_size=size,
                period=fs.period_s,
                frames_per_period=n,
                last_frame_size=last,
            )
        link = topology.link_between(*topology.path(flow.src, flow.dst)[:2])
        if flow.bitrate() > link.rate:
            raise FlowValidationError(
                f"sensor {spec.unit!r}: wire bitrate {flow.bitrate():.4g} bit/s "
                f"exceeds its {link.rate:.4g} bit/s link; configure a chunked "
                f"or compressed payload_per_frame"
            )
        flows.append(flow)
    return flows
