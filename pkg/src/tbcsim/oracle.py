"""Brute-force set-inclusion check on a 1D lane-change toy.

A high-inertia truck drives toward a stopped obstacle sitting in lane 0 at
longitudinal position p = 0. Two recovery acceptances are compared over a
dense state grid:

  - pure braking: decelerate at a_max in the current lane (integrated
    directly; this is the independent reference);
  - the scheduled policy: change lanes over maneuver_time seconds while
    decelerating at a (weaker) maneuver rate, blend the deceleration up to
    a_max over blend_time, then brake; the lane flips when the maneuver
    completes and lane 1 is assumed clear. Its admissible clock offsets for
    a fresh state are "run the full maneuver" and "skip straight to
    braking" (offsets inside the maneuver would presume lateral progress
    the binary lane state cannot represent), and both run through the same
    schedule machinery.

A rollout is accepted when it never sits in lane 0 at p > 0 and ends at
speed <= v_stop (p = 0 exactly is boundary-safe). Because the skip-to-
braking offset reproduces pure braking, every pure-braking-safe state must
come out scheduled-safe; `verify_theorem1` checks that inclusion cell by
cell — through the two separate code paths, so a schedule bug (wrong blend,
wrong flip time) breaks it — and counts how many extra states the maneuver
buys.

Dynamics are piecewise constant/linear in each sub-step, so the integration
is exact at the sample times, and the pure-braking acceptance boundary has
the closed form p = -v^2 / (2 a_max) for cross-checking.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ToyState:
    """lane in {0, 1}; p is the longitudinal position relative to the
    obstacle (lane 0, p = 0); v >= 0."""

    lane: int
    p: float
    v: float

    def __post_init__(self):
        if self.lane not in (0, 1):
            raise ValueError("lane must be 0 or 1")
        if self.v < 0.0:
            raise ValueError("speed must be nonnegative")


@dataclass(frozen=True)
class ToyPolicy:
    """Braking and maneuver schedule of the truck.

    maneuver_decel may be zero or negative (accelerating toward the
    obstacle) to study deliberately harmful maneuvers; it never exceeds
    a_max. lane_change=False keeps the maneuver in-lane, the harmful
    variant's other half.
    """

    a_max: float = 1.0
    maneuver_decel: float = 0.5
    maneuver_time: float = 1.0
    blend_time: float = 0.2
    horizon: float = 5.0
    v_stop: float = 0.1
    lane_change: bool = True

    def __post_init__(self):
        if not self.a_max > 0.0:
            raise ValueError("a_max must be positive")
        if self.maneuver_decel > self.a_max:
            raise ValueError("maneuver_decel cannot exceed a_max")
        if self.maneuver_time < 0.0 or not self.blend_time > 0.0:
            raise ValueError("bad schedule times")
        if not self.horizon > self.maneuver_time + self.blend_time:
            raise ValueError("horizon must cover maneuver, blend, and braking")

    @property
    def settled(self) -> float:
        """Clock time past which only braking remains."""
        return self.maneuver_time + self.blend_time


def _decel_at(policy: ToyPolicy, clock: float) -> float:
    """Deceleration commanded by the schedule at internal clock time."""
    t_m = policy.maneuver_time
    if t_m == 0.0 or clock >= t_m + policy.blend_time:
        return policy.a_max
    if clock <= t_m:
        return policy.maneuver_decel
    r = (clock - t_m) / policy.blend_time
    return (1.0 - r) * policy.maneuver_decel + r * policy.a_max


def _advance(p: float, v: float, a: float, dt: float) -> tuple:
    """Exact kinematic update under constant deceleration a, the speed
    clamped at zero (the truck never reverses)."""
    v_next = v - a * dt
    if v_next >= 0.0:
        return p + v * dt - 0.5 * a * dt * dt, v_next
    t_stop = v / a
    return p + 0.5 * v * t_stop, 0.0


def _brake_acceptance(x0: ToyState, policy: ToyPolicy, dt: float) -> bool:
    """Independent reference: straight braking at a_max, no schedule code."""
    if x0.lane == 0 and x0.p > 0.0:
        return False
    p, v = x0.p, x0.v
    n = int(round(policy.horizon / dt))
    for _ in range(n):
        if v == 0.0:
            break
        p, v = _advance(p, v, policy.a_max, dt)
        if x0.lane == 0 and p > 0.0:
            return False
    return v <= policy.v_stop


def _schedule_acceptance(x0: ToyState, policy: ToyPolicy, offset: float, dt: float) -> bool:
    """Run the scheduled policy with the internal clock starting at `offset`."""
    lane = x0.lane
    p, v = x0.p, x0.v
    t_m = policy.maneuver_time
    will_flip = policy.lane_change and t_m > 0.0 and offset < t_m
    n = int(round(policy.horizon / dt))
    for k in range(n + 1):
        clock = offset + k * dt
        if will_flip and clock >= t_m:
            lane = 1
            will_flip = False
        if lane == 0 and p > 0.0:
            return False
        if k == n:
            break
        if v == 0.0 and not will_flip and (clock >= policy.settled or policy.maneuver_decel >= 0.0):
            # stationary with only (non-negative) braking left: fixed point
            break
        p, v = _advance(p, v, _decel_at(policy, clock), dt)
    return v <= policy.v_stop


def toy_membership(x0: ToyState, policy: ToyPolicy, mode: str, dt: float = 0.01) -> bool:
    """Accept x0 when the selected recovery keeps it safe over the horizon.

    mode 'pure_backup': brake at a_max in the current lane.
    mode 'tbc_optimal': accept if some admissible schedule offset works —
    the full maneuver (offset 0) or skip-to-braking (offset past the blend).
    """
    assert dt <= 0.01, "grid step too coarse"
    if mode == "pure_backup":
        return _brake_acceptance(x0, policy, dt)
    if mode == "tbc_optimal":
        return _schedule_acceptance(x0, policy, 0.0, dt) or _schedule_acceptance(
            x0, policy, policy.settled, dt
        )
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class TheoremReport:
    """Grid enumeration outcome."""

    grid: tuple
    p_range: tuple
    v_range: tuple
    pure_safe: int
    tbc_safe: int
    improvement: int
    violations: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "grid": list(self.grid),
                "p_range": list(self.p_range),
                "v_range": list(self.v_range),
                "pure_safe": self.pure_safe,
                "tbc_safe": self.tbc_safe,
                "improvement": self.improvement,
                "violation_count": len(self.violations),
                "violations": [list(c) for c in self.violations],
            },
            indent=2,
        )


def verify_theorem1(
    policy: ToyPolicy,
    grid: tuple = (200, 200),
    p_range: tuple = (-6.0, 1.0),
    v_range: tuple = (0.0, 3.0),
    dt: float = 0.01,
) -> TheoremReport:
    """Enumerate lane-0 grid states; every pure-braking-safe cell must also
    be scheduled-safe. Violating cells land in `violations` (expected: none,
    for any parameterization); `improvement` counts cells only the scheduled
    policy accepts."""
    np_, nv = grid
    if np_ < 100 or nv < 100:
        raise ValueError("grid must be at least 100x100")
    pure_safe = 0
    tbc_safe = 0
    improvement = 0
    violations = []
    for i in range(np_):
        p = p_range[0] + (p_range[1] - p_range[0]) * i / (np_ - 1)
        for j in range(nv):
            v = v_range[0] + (v_range[1] - v_range[0]) * j / (nv - 1)
            x = ToyState(0, p, v)
            pure_ok = toy_membership(x, policy, "pure_backup", dt)
            tbc_ok = toy_membership(x, policy, "tbc_optimal", dt)
            if pure_ok:
                pure_safe += 1
            if tbc_ok:
                tbc_safe += 1
                if not pure_ok:
                    improvement += 1
            if pure_ok and not tbc_ok:
                violations.append((p, v))
    return TheoremReport(
        grid=grid,
        p_range=p_range,
        v_range=v_range,
        pure_safe=pure_safe,
        tbc_safe=tbc_safe,
        improvement=improvement,
        violations=violations,
    )
