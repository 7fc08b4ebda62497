"""Time-varying backup controllers: maneuver, blend, and stopping stages.

A backup policy here is a schedule over an internal clock tau:

    tau <= T_M            maneuver input u_M(x)
    T_M < tau < T_M + dl  linear input blend from u_M(x) to u_B(x)
    tau >= T_M + dl       stopping controller u_B(x)

u_B always commands zero velocity plus an inward repulsion near the geofence,
so every maneuver schedule ends in the same controller and ends inside the
low-speed backup set. With maneuver_time == 0 the schedule degenerates to the
bare stopping controller (no maneuver, no blend).

Two maneuvers are provided:
  - carry-on: keeps flying the velocity command frozen when the maneuver was
    (re)started;
  - evade: displaces the vehicle a fixed offset along a fixed direction from
    the position where the maneuver was (re)started, then stops.

All outputs are saturated to the vehicle's input limits by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

from .rigid_body import (
    DroneInput,
    DroneParams,
    DroneState,
    InputTuple,
    StateTuple,
    Vec3,
    _clamp_input,
    _quat_rotate,
)
from .safety_sets import World


@dataclass(frozen=True)
class TbcTiming:
    """Schedule constants: maneuver duration, blend duration, rollout horizon.

    The horizon must leave room for the stopping stage, i.e.
    horizon > maneuver_time + blend_time.
    """

    maneuver_time: float
    blend_time: float
    horizon: float

    def __post_init__(self):
        if self.maneuver_time < 0.0:
            raise ValueError("maneuver_time must be nonnegative")
        if not self.blend_time > 0.0:
            raise ValueError("blend_time must be positive")
        if not self.horizon > self.maneuver_time + self.blend_time:
            raise ValueError("horizon must exceed maneuver_time + blend_time")

    @property
    def blend_end(self) -> float:
        return self.maneuver_time + self.blend_time


@dataclass(frozen=True)
class VelocityCommand:
    """World-frame velocity setpoint plus a yaw rate."""

    v_des: Vec3 = Vec3()
    yaw_rate: float = 0.0

    def __post_init__(self):
        if not all(map(math.isfinite, (self.v_des.x, self.v_des.y, self.v_des.z, self.yaw_rate))):
            raise ValueError("velocity command must be finite")


def clamp_command(cmd: VelocityCommand, v_max: float) -> VelocityCommand:
    """Scale the commanded velocity down to norm v_max if it exceeds it."""
    n = cmd.v_des.norm()
    if n <= v_max:
        return cmd
    return VelocityCommand(cmd.v_des.scale(v_max / n), cmd.yaw_rate)


@dataclass(frozen=True)
class BackupGains:
    """Gains of the velocity/stopping controller.

    k_v: velocity error to acceleration (1/s). Also reused as the position
    gain of the evade offset law. k_att: tilt error angle to body rate (1/s).
    k_repel: geofence intrusion depth to outward-escape speed (1/s), active
    within repel_margin (m) of a face.
    """

    k_v: float = 2.0
    k_repel: float = 2.0
    repel_margin: float = 1.0
    k_att: float = 8.0

    def __post_init__(self):
        for name in ("k_v", "k_repel", "repel_margin", "k_att"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class CarryOn:
    """Maneuver that keeps tracking a frozen pilot command."""

    command: VelocityCommand


@dataclass(frozen=True)
class Evade:
    """Maneuver that repositions along `direction` by `target_offset` meters
    from `start`, moving at up to `speed`, then holds."""

    direction: Vec3
    target_offset: float
    speed: float
    start: Vec3

    def __post_init__(self):
        if abs(self.direction.norm() - 1.0) > 1e-9:
            raise ValueError("evade direction must be unit norm")
        if not self.speed > 0.0:
            raise ValueError("evade speed must be positive")


Maneuver = Union[CarryOn, Evade]


@dataclass(frozen=True)
class CarryOnSpec:
    """Template that freezes the current pilot command on instantiation."""

    def instantiate(self, x: DroneState, pilot_cmd: VelocityCommand) -> CarryOn:
        return CarryOn(pilot_cmd)


@dataclass(frozen=True)
class EvadeSpec:
    """Template that captures the current position as the evade start point."""

    direction: Vec3
    target_offset: float
    speed: float

    def __post_init__(self):
        if abs(self.direction.norm() - 1.0) > 1e-9:
            raise ValueError("evade direction must be unit norm")

    def instantiate(self, x: DroneState, pilot_cmd: VelocityCommand) -> Evade:
        return Evade(self.direction, self.target_offset, self.speed, x.p)


ManeuverSpec = Union[CarryOnSpec, EvadeSpec]


# ---------------------------------------------------------------------------
# Flat kernels
# ---------------------------------------------------------------------------

def _velocity_input(
    s: StateTuple,
    vdx: float, vdy: float, vdz: float, yaw_rate: float,
    k_v: float, k_att: float, g: float, t_max: float, o_max: float,
) -> InputTuple:
    """Velocity-tracking law: thrust along body z, tilt toward the desired
    acceleration direction, yaw rate passed through. Output saturated."""
    qw, qx, qy, qz = s[3], s[4], s[5], s[6]
    vx, vy, vz = s[7], s[8], s[9]

    ax = k_v * (vdx - vx)
    ay = k_v * (vdy - vy)
    az = k_v * (vdz - vz) + g

    # body z in world frame
    bzx = 2.0 * (qx * qz + qw * qy)
    bzy = 2.0 * (qy * qz - qw * qx)
    bzz = 1.0 - 2.0 * (qx * qx + qy * qy)

    thrust = ax * bzx + ay * bzy + az * bzz
    if thrust < 0.0:
        thrust = 0.0

    an = math.sqrt(ax * ax + ay * ay + az * az)
    if an < 1e-9:
        # commanded free fall: no meaningful tilt target
        return _clamp_input((thrust, 0.0, 0.0, yaw_rate), t_max, o_max)
    ax /= an
    ay /= an
    az /= an

    # rotation taking body z onto the desired thrust direction
    cx = bzy * az - bzz * ay
    cy = bzz * ax - bzx * az
    cz = bzx * ay - bzy * ax
    sin_t = math.sqrt(cx * cx + cy * cy + cz * cz)
    cos_t = bzx * ax + bzy * ay + bzz * az
    angle = math.atan2(sin_t, cos_t)

    if sin_t < 1e-12:
        if cos_t > 0.0:
            tilt_x = tilt_y = 0.0
        else:
            # antipodal: rotate about body x, direction arbitrary but fixed
            tilt_x, tilt_y = angle, 0.0
    else:
        k = angle / sin_t
        # express the axis in the body frame (inverse rotation, inlined); its
        # z component is zero since the axis is orthogonal to body z
        tx = 2.0 * (qz * cy - qy * cz)
        ty = 2.0 * (qx * cz - qz * cx)
        tz = 2.0 * (qy * cx - qx * cy)
        tilt_x = k * (cx + qw * tx + qz * ty - qy * tz)
        tilt_y = k * (cy + qw * ty + qx * tz - qz * tx)

    return _clamp_input(
        (thrust, k_att * tilt_x, k_att * tilt_y, yaw_rate),
        t_max, o_max,
    )


def _repulsion(
    px: float, py: float, pz: float,
    cx: float, cy: float, cz: float, rx: float, ry: float, rz: float,
    k_repel: float, margin: float,
) -> tuple:
    """Inward escape velocity near (or beyond) geofence faces; zero deep inside."""
    vx = vy = vz = 0.0
    d = (cx + rx) - px
    if d < margin:
        vx -= k_repel * (margin - d)
    d = px - (cx - rx)
    if d < margin:
        vx += k_repel * (margin - d)
    d = (cy + ry) - py
    if d < margin:
        vy -= k_repel * (margin - d)
    d = py - (cy - ry)
    if d < margin:
        vy += k_repel * (margin - d)
    d = (cz + rz) - pz
    if d < margin:
        vz -= k_repel * (margin - d)
    d = pz - (cz - rz)
    if d < margin:
        vz += k_repel * (margin - d)
    return (vx, vy, vz)


def make_velocity_input(cmd: VelocityCommand, params: DroneParams, gains: BackupGains) -> Callable:
    vdx, vdy, vdz = cmd.v_des.x, cmd.v_des.y, cmd.v_des.z
    yr = cmd.yaw_rate
    k_v, k_att = gains.k_v, gains.k_att
    g, t_max, o_max = params.gravity, params.thrust_max, params.omega_max

    def law(s: StateTuple) -> InputTuple:
        return _velocity_input(s, vdx, vdy, vdz, yr, k_v, k_att, g, t_max, o_max)

    return law


def make_backup_input(world: World, params: DroneParams, gains: BackupGains) -> Callable:
    """Stopping controller: track the repulsion field, which pushes inward
    near geofence faces and outward near obstacle keep-out spheres (zero away
    from every boundary)."""
    b = world.geofence
    cx, cy, cz = b.center.x, b.center.y, b.center.z
    rx, ry, rz = b.half_extents.x, b.half_extents.y, b.half_extents.z
    k_v, k_att, k_rep, margin = gains.k_v, gains.k_att, gains.k_repel, gains.repel_margin
    g, t_max, o_max = params.gravity, params.thrust_max, params.omega_max
    spheres = tuple(
        (o.center.x, o.center.y, o.center.z, o.radius + world.agent_radius)
        for o in world.obstacles
    )

    def law(s: StateTuple) -> InputTuple:
        px, py, pz = s[0], s[1], s[2]
        vdx, vdy, vdz = _repulsion(px, py, pz, cx, cy, cz, rx, ry, rz, k_rep, margin)
        for ox, oy, oz, keep_out in spheres:
            dx = px - ox
            dy = py - oy
            dz = pz - oz
            d = math.sqrt(dx * dx + dy * dy + dz * dz)
            gap = d - keep_out
            if gap < margin and d > 1e-9:
                push = k_rep * (margin - gap) / d
                vdx += push * dx
                vdy += push * dy
                vdz += push * dz
        return _velocity_input(s, vdx, vdy, vdz, 0.0, k_v, k_att, g, t_max, o_max)

    return law


def make_maneuver_input(kind: Maneuver, params: DroneParams, gains: BackupGains) -> Callable:
    if isinstance(kind, CarryOn):
        return make_velocity_input(kind.command, params, gains)
    if isinstance(kind, Evade):
        dx, dy, dz = kind.direction.x, kind.direction.y, kind.direction.z
        sx, sy, sz = kind.start.x, kind.start.y, kind.start.z
        target, speed = kind.target_offset, kind.speed
        k_v, k_att = gains.k_v, gains.k_att
        g, t_max, o_max = params.gravity, params.thrust_max, params.omega_max

        def law(s: StateTuple) -> InputTuple:
            progress = dx * (s[0] - sx) + dy * (s[1] - sy) + dz * (s[2] - sz)
            mag = k_v * (target - progress)
            if mag > speed:
                mag = speed
            elif mag < -speed:
                mag = -speed
            return _velocity_input(
                s, mag * dx, mag * dy, mag * dz, 0.0, k_v, k_att, g, t_max, o_max
            )

        return law
    raise TypeError(f"unknown maneuver {kind!r}")


def make_tbc(
    kind: Maneuver,
    world: World,
    timing: TbcTiming,
    params: DroneParams,
    gains: BackupGains,
) -> Callable:
    """Compile the full schedule into a closure policy(state_tuple, tau) -> input.

    The blend is a convex combination of two saturated inputs, so it needs no
    extra clamping. Continuity at both stage boundaries holds by construction.
    """
    backup = make_backup_input(world, params, gains)
    t_m = timing.maneuver_time
    if t_m == 0.0:
        return lambda s, tau: backup(s)

    man = make_maneuver_input(kind, params, gains)
    dl = timing.blend_time
    t_end = timing.blend_end

    def policy(s: StateTuple, tau: float) -> InputTuple:
        if tau <= t_m:
            return man(s)
        if tau >= t_end:
            return backup(s)
        um = man(s)
        ub = backup(s)
        r = (tau - t_m) / dl
        w = 1.0 - r
        return (
            w * um[0] + r * ub[0],
            w * um[1] + r * ub[1],
            w * um[2] + r * ub[2],
            w * um[3] + r * ub[3],
        )

    return policy


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def velocity_controller(
    x: DroneState, cmd: VelocityCommand, params: DroneParams, gains: BackupGains
) -> DroneInput:
    """Track a world-frame velocity command; always returns an admissible input."""
    return DroneInput.from_tuple(make_velocity_input(cmd, params, gains)(x.as_tuple()))


def backup_controller(
    x: DroneState, world: World, params: DroneParams, gains: BackupGains
) -> DroneInput:
    """Stop the vehicle, pushing it inward when close to a geofence face."""
    return DroneInput.from_tuple(make_backup_input(world, params, gains)(x.as_tuple()))


def maneuver_input(
    kind: Maneuver, x: DroneState, params: DroneParams, gains: BackupGains
) -> DroneInput:
    """Evaluate the maneuver stage of a policy at the given state."""
    return DroneInput.from_tuple(make_maneuver_input(kind, params, gains)(x.as_tuple()))


def smooth_transition(u_m: DroneInput, u_b: DroneInput, tau: float, timing: TbcTiming) -> DroneInput:
    """Linear input blend from u_m to u_b across the blend window."""
    assert timing.maneuver_time <= tau <= timing.blend_end
    r = (tau - timing.maneuver_time) / timing.blend_time
    w = 1.0 - r
    return DroneInput(
        w * u_m.thrust + r * u_b.thrust,
        Vec3(
            w * u_m.omega_des.x + r * u_b.omega_des.x,
            w * u_m.omega_des.y + r * u_b.omega_des.y,
            w * u_m.omega_des.z + r * u_b.omega_des.z,
        ),
    )


def tbc_evaluate(
    kind: Maneuver,
    x: DroneState,
    tau: float,
    world: World,
    timing: TbcTiming,
    params: DroneParams,
    gains: BackupGains,
) -> DroneInput:
    """Evaluate the scheduled policy at clock tau >= 0."""
    assert tau >= 0.0
    return DroneInput.from_tuple(make_tbc(kind, world, timing, params, gains)(x.as_tuple(), tau))
