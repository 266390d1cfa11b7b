"""The ride store: ingestion, persistence, integrity checking, queries.

Persistence is one directory per ride holding per-table JSON Lines files
with canonical formatting (sorted keys, sorted rows), so persist -> load ->
persist round-trips byte-identically and diffs stay readable. Single
writer, any number of readers.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .query import eval_tag_expr, parse_tag_expr
from .records import (
    TAXONOMY,
    CalibratedSensor,
    EgoPose,
    MapRecord,
    Ride,
    Sample,
    SampleData,
    Scene,
    Tag,
)

TABLES = ("ride", "map", "calibrated_sensor", "scene", "sample",
          "sample_data", "ego_pose", "tag")


@dataclass(frozen=True)
class Violation:
    kind: str
    entity: str
    detail: str


@dataclass
class IntegrityReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        if self.ok:
            return "integrity: ok (0 violations)\n"
        lines = [f"integrity: {len(self.violations)} violation(s)"]
        for v in self.violations:
            lines.append(f"  {v.kind}: {v.entity}: {v.detail}")
        return "\n".join(lines) + "\n"


class RideStore:
    """In-memory relational store with JSONL persistence."""

    def __init__(self):
        self.rides: dict[str, Ride] = {}
        self.maps: dict[str, MapRecord] = {}
        self.calibrated: dict[str, CalibratedSensor] = {}
        self.scenes: dict[str, Scene] = {}
        self.samples: dict[str, Sample] = {}
        self.sample_data: dict[str, SampleData] = {}
        self.ego_poses: dict[str, EgoPose] = {}  # keyed by sample_id
        self.tags: dict[str, set[Tag]] = {}  # keyed by scene_id
        self.taxonomy = {k: set(v) for k, v in TAXONOMY.items()}

    # -- ingestion ---------------------------------------------------------

    def add_map(self, rec: MapRecord) -> str:
        if rec.id in self.maps:
            raise ValueError(f"duplicate map id {rec.id!r}")
        self.maps[rec.id] = rec
        return rec.id

    def create_ride(self, ride: Ride) -> str:
        if ride.id in self.rides:
            raise ValueError(f"duplicate ride id {ride.id!r}")
        if ride.map_id is not None and ride.map_id not in self.maps:
            raise ValueError(f"ride {ride.id!r} references unknown map {ride.map_id!r}")
        self.rides[ride.id] = ride
        return ride.id

    def add_calibrated_sensor(self, rec: CalibratedSensor) -> str:
        if rec.id in self.calibrated:
            raise ValueError(f"duplicate calibrated sensor id {rec.id!r}")
        if rec.ride_id not in self.rides:
            raise ValueError(
                f"calibrated sensor {rec.id!r} references unknown ride {rec.ride_id!r}"
            )
        self.calibrated[rec.id] = rec
        return rec.id

    def add_scene(self, scene: Scene) -> str:
        if scene.id in self.scenes:
            raise ValueError(f"duplicate scene id {scene.id!r}")
        if scene.ride_id not in self.rides:
            raise ValueError(f"scene {scene.id!r} references unknown ride {scene.ride_id!r}")
        self.scenes[scene.id] = scene
        self.tags.setdefault(scene.id, set())
        return scene.id

    def add_sample(self, sample: Sample) -> str:
        if sample.id in self.samples:
            raise ValueError(f"duplicate sample id {sample.id!r}")
        if sample.scene_id not in self.scenes:
            raise ValueError(
                f"sample {sample.id!r} references unknown scene {sample.scene_id!r}"
            )
        self.samples[sample.id] = sample
        return sample.id

    def add_sample_data(self, rec: SampleData) -> str:
        if rec.id in self.sample_data:
            raise ValueError(f"duplicate sample_data id {rec.id!r}")
        if rec.sample_id not in self.samples:
            raise ValueError(
                f"sample_data {rec.id!r} references unknown sample {rec.sample_id!r}"
            )
        self.sample_data[rec.id] = rec
        return rec.id

    def add_ego_pose(self, pose: EgoPose) -> str:
        if pose.sample_id in self.ego_poses:
            raise ValueError(f"duplicate ego pose for sample {pose.sample_id!r}")
        if pose.sample_id not in self.samples:
            raise ValueError(f"ego pose references unknown sample {pose.sample_id!r}")
        self.ego_poses[pose.sample_id] = pose
        return pose.sample_id

    def add_tag(self, scene_id: str, tag: Tag) -> None:
        if scene_id not in self.scenes:
            raise ValueError(f"tag references unknown scene {scene_id!r}")
        existing = {t.key() for t in self.tags[scene_id]}
        if tag.key() in existing:
            raise ValueError(f"duplicate tag {tag.key()} on scene {scene_id!r}")
        self.tags[scene_id].add(tag)

    # -- queries -------------------------------------------------------------

    def scenes_of_ride(self, ride_id: str) -> list[Scene]:
        return sorted((s for s in self.scenes.values() if s.ride_id == ride_id),
                      key=lambda s: s.start)

    def samples_of_scene(self, scene_id: str) -> list[Sample]:
        return sorted((s for s in self.samples.values() if s.scene_id == scene_id),
                      key=lambda s: (s.timestamp, s.id))

    def data_of_sample(self, sample_id: str) -> list[SampleData]:
        return sorted((d for d in self.sample_data.values() if d.sample_id == sample_id),
                      key=lambda d: d.id)

    def query_scenes(self, expression: str) -> list[str]:
        """Scene ids matching a tag expression, ordered by ride then start."""
        tree = parse_tag_expr(expression)
        hits = []
        for scene in self.scenes.values():
            keys = {t.key() for t in self.tags.get(scene.id, ())}
            if eval_tag_expr(tree, keys):
                hits.append(scene)
        hits.sort(key=lambda s: (s.ride_id, s.start, s.id))
        return [s.id for s in hits]

    # -- integrity -----------------------------------------------------------

    def integrity_check(self) -> IntegrityReport:
        v: list[Violation] = []

        for ride in self.rides.values():
            if ride.end < ride.start:
                v.append(Violation("ride_bounds", ride.id, "end before start"))
            if ride.map_id is not None and ride.map_id not in self.maps:
                v.append(Violation("dangling_map", ride.id,
                                   f"map {ride.map_id!r} not found"))

        for cs in self.calibrated.values():
            if cs.ride_id not in self.rides:
                v.append(Violation("dangling_ride", cs.id,
                                   f"ride {cs.ride_id!r} not found"))

        for ride in self.rides.values():
            scenes = self.scenes_of_ride(ride.id)
            prev_end = ride.start
            for scene in scenes:
                if scene.start < ride.start - 1e-9 or scene.end > ride.end + 1e-9:
                    v.append(Violation("scene_bounds", scene.id, "outside ride interval"))
                if abs(scene.start - prev_end) > 1e-9:
                    v.append(Violation("scene_partition", scene.id,
                                       f"gap or overlap at {scene.start!r}"))
                prev_end = scene.end
            if scenes and abs(prev_end - ride.end) > 1e-9:
                v.append(Violation("scene_partition", ride.id,
                                   "scenes do not cover the ride interval"))

        sensors_by_ride: dict[str, set[str]] = {}
        for cs in self.calibrated.values():
            sensors_by_ride.setdefault(cs.ride_id, set()).add(cs.sensor_id)

        for sample in self.samples.values():
            scene = self.scenes.get(sample.scene_id)
            if scene is None:
                v.append(Violation("dangling_scene", sample.id,
                                   f"scene {sample.scene_id!r} not found"))
                continue
            if not (scene.start - 1e-9 <= sample.timestamp <= scene.end + 1e-9):
                v.append(Violation("sample_bounds", sample.id,
                                   "timestamp outside scene bounds"))
            if sample.id not in self.ego_poses:
                v.append(Violation("missing_ego_pose", sample.id, "no ego pose"))
            registered = sensors_by_ride.get(scene.ride_id, set())
            present = {d.sensor_id for d in self.sample_data.values()
                       if d.sample_id == sample.id}
            missing = sorted(registered - present)
            if missing:
                v.append(Violation("missing_sample_data", sample.id,
                                   f"no data for sensor(s) {missing}"))

        for sd in self.sample_data.values():
            if sd.sample_id not in self.samples:
                v.append(Violation("dangling_sample", sd.id,
                                   f"sample {sd.sample_id!r} not found"))
                continue
            scene = self.scenes.get(self.samples[sd.sample_id].scene_id)
            if scene is not None:
                registered = sensors_by_ride.get(scene.ride_id, set())
                if sd.sensor_id not in registered:
                    v.append(Violation("unknown_sensor", sd.id,
                                       f"sensor {sd.sensor_id!r} not calibrated"))

        for sample_id in self.ego_poses:
            if sample_id not in self.samples:
                v.append(Violation("dangling_sample", f"ego_pose/{sample_id}",
                                   f"sample {sample_id!r} not found"))

        for scene_id, tags in self.tags.items():
            if scene_id not in self.scenes:
                v.append(Violation("dangling_scene", f"tag/{scene_id}",
                                   f"scene {scene_id!r} not found"))
            for tag in tags:
                groups = self.taxonomy.get(tag.category)
                if groups is not None and tag.group not in groups:
                    v.append(Violation("tag_taxonomy", scene_id,
                                       f"group {tag.group!r} not in category "
                                       f"{tag.category!r}"))

        v.sort(key=lambda x: (x.kind, x.entity, x.detail))
        return IntegrityReport(violations=v)

    # -- persistence -----------------------------------------------------------

    @staticmethod
    def _dump_row(obj) -> str:
        d = dataclasses.asdict(obj)
        for k, val in d.items():
            if isinstance(val, tuple):
                d[k] = list(val)
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    def _ride_tables(self, ride_id: str) -> dict[str, list[str]]:
        scenes = self.scenes_of_ride(ride_id)
        scene_ids = {s.id for s in scenes}
        samples = sorted((s for s in self.samples.values() if s.scene_id in scene_ids),
                         key=lambda s: s.id)
        sample_ids = {s.id for s in samples}
        ride = self.rides[ride_id]
        tables: dict[str, list[str]] = {t: [] for t in TABLES}
        tables["ride"] = [self._dump_row(ride)]
        if ride.map_id is not None and ride.map_id in self.maps:
            tables["map"] = [self._dump_row(self.maps[ride.map_id])]
        tables["calibrated_sensor"] = [
            self._dump_row(c) for c in sorted(self.calibrated.values(), key=lambda c: c.id)
            if c.ride_id == ride_id
        ]
        tables["scene"] = [self._dump_row(s) for s in scenes]
        tables["sample"] = [self._dump_row(s) for s in samples]
        tables["sample_data"] = [
            self._dump_row(d) for d in sorted(self.sample_data.values(), key=lambda d: d.id)
            if d.sample_id in sample_ids
        ]
        tables["ego_pose"] = [
            self._dump_row(self.ego_poses[sid]) for sid in sorted(self.ego_poses)
            if sid in sample_ids
        ]
        tag_rows = []
        for scene in scenes:
            for tag in sorted(self.tags.get(scene.id, ())):
                d = dataclasses.asdict(tag)
                d["scene_id"] = scene.id
                tag_rows.append(json.dumps(d, sort_keys=True, separators=(",", ":")))
        tables["tag"] = tag_rows
        return tables

    def persist(self, root: str | Path) -> None:
        root = Path(root)
        root.mkdir(parents=True, exist_ok=True)
        for ride_id in sorted(self.rides):
            ride_dir = root / ride_id
            ride_dir.mkdir(parents=True, exist_ok=True)
            for table, rows in self._ride_tables(ride_id).items():
                path = ride_dir / f"{table}.jsonl"
                with open(path, "w", encoding="utf-8", newline="\n") as fh:
                    for row in rows:
                        fh.write(row + "\n")

    @classmethod
    def load(cls, root: str | Path) -> "RideStore":
        root = Path(root)
        store = cls()
        if not root.is_dir():
            raise FileNotFoundError(f"store directory {root} does not exist")

        def rows(ride_dir: Path, table: str):
            path = ride_dir / f"{table}.jsonl"
            if not path.exists():
                return
            with open(path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        yield json.loads(line)

        ride_dirs = sorted(p for p in root.iterdir() if p.is_dir())
        for ride_dir in ride_dirs:
            for d in rows(ride_dir, "map"):
                if d["id"] not in store.maps:
                    store.add_map(MapRecord(**d))
            for d in rows(ride_dir, "ride"):
                store.create_ride(Ride(**d))
            for d in rows(ride_dir, "calibrated_sensor"):
                d["extrinsic"] = tuple(d["extrinsic"])
                if d.get("intrinsic") is not None:
                    d["intrinsic"] = tuple(d["intrinsic"])
                store.add_calibrated_sensor(CalibratedSensor(**d))
            for d in rows(ride_dir, "scene"):
                store.add_scene(Scene(**d))
            for d in rows(ride_dir, "sample"):
                store.add_sample(Sample(**d))
            for d in rows(ride_dir, "sample_data"):
                store.add_sample_data(SampleData(**d))
            for d in rows(ride_dir, "ego_pose"):
                store.add_ego_pose(EgoPose(**d))
            for d in rows(ride_dir, "tag"):
                scene_id = d.pop("scene_id")
                store.add_tag(scene_id, Tag(**d))
        return store

    def export_csv(self, table: str) -> str:
        """Flat CSV of one table across all rides."""
        if table not in TABLES:
            raise ValueError(f"unknown table {table!r}; pick one of {TABLES}")
        header_rows = {
            "ride": (("id", "start", "end", "vehicle_ref", "rig_ref", "source", "map_id"),
                     sorted(self.rides.values(), key=lambda r: r.id)),
            "map": (("id", "name", "reference"),
                    sorted(self.maps.values(), key=lambda m: m.id)),
            "calibrated_sensor": (("id", "ride_id", "sensor_id"),
                                  sorted(self.calibrated.values(), key=lambda c: c.id)),
            "scene": (("id", "ride_id", "start", "end"),
                      sorted(self.scenes.values(), key=lambda s: s.id)),
            "sample": (("id", "scene_id", "timestamp"),
                       sorted(self.samples.values(), key=lambda s: s.id)),
            "sample_data": (("id", "sample_id", "sensor_id", "timestamp", "payload_ref"),
                            sorted(self.sample_data.values(), key=lambda d: d.id)),
            "ego_pose": (("sample_id", "x", "y", "psi", "v_x", "v_y", "psi_dot"),
                         [self.ego_poses[k] for k in sorted(self.ego_poses)]),
        }
        if table == "tag":
            lines = ["scene_id,category,group,name,origin"]
            for scene_id in sorted(self.tags):
                for tag in sorted(self.tags[scene_id]):
                    lines.append(f"{scene_id},{tag.category},{tag.group},{tag.name},{tag.origin}")
            return "\n".join(lines) + "\n"
        header, rows_ = header_rows[table]
        lines = [",".join(header)]
        for rec in rows_:
            vals = []
            for f in header:
                val = getattr(rec, f)
                if isinstance(val, float):
                    vals.append(f"{val:.10g}")
                else:
                    vals.append("" if val is None else str(val))
            lines.append(",".join(vals))
        return "\n".join(lines) + "\n"
