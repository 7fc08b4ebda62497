"""Deterministic quadrotor simulation with rollout-based safety filtering.

The package provides:
  - a quaternion rigid-body drone model (`rigid_body`),
  - arena barrier functions (`safety_sets`),
  - time-varying backup controllers (`policies`),
  - the rollout safety filter with phase reset and maneuver switching
    (`filter`),
  - decentralized multi-agent simulation (`multi_agent`),
  - a scenario runner with TOML configs and CSV traces (`scenario`),
  - a brute-force set-inclusion checker on a 1D lane-change toy (`oracle`),
  - a live WebSocket teleoperation service (`service`).
"""

__version__ = "0.1.0"
