"""Desk-scale digital twin of an autonomous research vehicle.

Subpackages: vehicle dynamics (single-track, magic-formula tires), sensor
rig geometry and coverage, clock synchronization, switched in-vehicle
network simulation, and a relational ride-recording store, tied together by
a scenario-runner CLI.
"""

__version__ = "0.1.0"
