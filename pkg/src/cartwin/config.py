"""YAML config loading helpers shared by the rig, vehicle, and scenario files.

Angles may be written in degrees by using a ``<name>_deg`` key instead of
``<name>_rad``; loaders resolve either spelling to radians. All other values
are SI.
"""

from __future__ import annotations

import math
from pathlib import Path

import yaml


class ConfigError(ValueError):
    """Malformed or inconsistent configuration document."""


def load_yaml(path: str | Path) -> dict:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return doc


def angle_from(mapping: dict, name: str, default: float | None = None,
               *, context: str = "") -> float:
    """Read ``<name>_rad`` or ``<name>_deg`` (exactly one) from a mapping."""
    where = f" in {context}" if context else ""
    rad_key, deg_key = f"{name}_rad", f"{name}_deg"
    has_rad, has_deg = rad_key in mapping, deg_key in mapping
    if has_rad and has_deg:
        raise ConfigError(f"both {rad_key} and {deg_key} given{where}")
    if has_rad:
        return float(mapping[rad_key])
    if has_deg:
        return math.radians(float(mapping[deg_key]))
    if default is None:
        raise ConfigError(f"missing {rad_key} or {deg_key}{where}")
    return default


def reject_unknown_keys(mapping: dict, allowed, *, context: str) -> None:
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {context}")
