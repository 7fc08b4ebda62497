"""Barrier functions for the flight arena: geofence box, spherical obstacles,
inter-agent separation, and the low-speed backup set.

Each constraint is a scalar h with h >= 0 safe, h = 0 on the boundary. The
combined arena barrier is the pointwise minimum of all constituents, which
keeps continuity (this filter never differentiates h, so the kinks are fine).

Conventions:
  - geofence:   h = min over axes of (half_extent^2 - offset^2), units m^2
  - pairwise:   h = ||p_i - p_j||^2 - (2 r)^2, spheres of radius r, units m^2
  - obstacle:   h = ||p - c||^2 - (radius + r)^2 (inflated by agent radius)
  - backup set: h_B = v_stop - ||v||, units m/s; the stopping controller keeps
    speed below v_stop once reached
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .rigid_body import DroneState, Vec3


@dataclass(frozen=True)
class BoxRegion:
    """Axis-aligned box given by center and positive half extents (m)."""

    center: Vec3
    half_extents: Vec3

    def __post_init__(self):
        h = self.half_extents
        if not (h.x > 0.0 and h.y > 0.0 and h.z > 0.0):
            raise ValueError("half extents must be positive")


@dataclass(frozen=True)
class SphereObstacle:
    center: Vec3
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError("obstacle radius must be positive")


@dataclass(frozen=True)
class World:
    """Arena description shared by every agent.

    agent_radius is the collision sphere of each vehicle; v_stop is the speed
    threshold defining the backup set.
    """

    geofence: BoxRegion
    obstacles: tuple = field(default_factory=tuple)
    agent_radius: float = 0.25
    v_stop: float = 0.1

    def __post_init__(self):
        if not self.agent_radius > 0.0:
            raise ValueError("agent_radius must be positive")
        if not self.v_stop > 0.0:
            raise ValueError("v_stop must be positive")
        object.__setattr__(self, "obstacles", tuple(self.obstacles))


def h_box(p: Vec3, box: BoxRegion) -> float:
    """Geofence barrier: positive inside, zero on a face, negative outside."""
    return _h_box(p.x, p.y, p.z, *_box_flat(box))


def h_pair(p_i: Vec3, p_j: Vec3, r: float) -> float:
    """Separation barrier between two agents of radius r: ||d||^2 - 4 r^2."""
    assert r > 0.0
    dx = p_i.x - p_j.x
    dy = p_i.y - p_j.y
    dz = p_i.z - p_j.z
    return dx * dx + dy * dy + dz * dz - 4.0 * r * r


def h_sphere(p: Vec3, obs: SphereObstacle, r: float) -> float:
    """Obstacle barrier with the agent radius folded into the keep-out sphere."""
    dx = p.x - obs.center.x
    dy = p.y - obs.center.y
    dz = p.z - obs.center.z
    rr = obs.radius + r
    return dx * dx + dy * dy + dz * dz - rr * rr


def h_backup(v: Vec3, v_stop: float) -> float:
    """Backup-set barrier: nonnegative once speed has dropped to v_stop."""
    assert v_stop > 0.0
    return v_stop - v.norm()


def h_world(x: DroneState, world: World, others: list | tuple = ()) -> float:
    """Minimum of geofence, obstacle, and pairwise barriers at the given state.

    `others` are the positions of every other agent (Vec3). With no obstacles
    and no other agents this reduces to the geofence barrier exactly.
    """
    flat = world_kernel(world)
    return flat(x.p.x, x.p.y, x.p.z, tuple(o.as_tuple() for o in others))


# ---------------------------------------------------------------------------
# Flat kernels
# ---------------------------------------------------------------------------

def _box_flat(box: BoxRegion):
    c, h = box.center, box.half_extents
    return (c.x, c.y, c.z, h.x, h.y, h.z)


def _h_box(px, py, pz, cx, cy, cz, rx, ry, rz):
    dx = px - cx
    dy = py - cy
    dz = pz - cz
    hx = rx * rx - dx * dx
    hy = ry * ry - dy * dy
    hz = rz * rz - dz * dz
    m = hx if hx < hy else hy
    return m if m < hz else hz


@lru_cache(maxsize=32)
def world_kernel(world: World):
    """Build a closure h(px, py, pz, others) -> float over flat coordinates.

    `others` is a sequence of (x, y, z) tuples. The closure binds all world
    geometry as locals so rollout loops avoid attribute lookups.
    """
    cx, cy, cz, rx, ry, rz = _box_flat(world.geofence)
    spheres = tuple(
        (o.center.x, o.center.y, o.center.z, (o.radius + world.agent_radius) ** 2)
        for o in world.obstacles
    )
    four_r2 = 4.0 * world.agent_radius * world.agent_radius

    def h(px: float, py: float, pz: float, others=()) -> float:
        dx = px - cx
        dy = py - cy
        dz = pz - cz
        hx = rx * rx - dx * dx
        hy = ry * ry - dy * dy
        hz = rz * rz - dz * dz
        m = hx if hx < hy else hy
        if hz < m:
            m = hz
        for sx, sy, sz, rr2 in spheres:
            ox = px - sx
            oy = py - sy
            oz = pz - sz
            ho = ox * ox + oy * oy + oz * oz - rr2
            if ho < m:
                m = ho
        for ax, ay, az in others:
            ox = px - ax
            oy = py - ay
            oz = pz - az
            hp = ox * ox + oy * oy + oz * oz - four_r2
            if hp < m:
                m = hp
        return m

    return h


def pair_kernel(world: World):
    """Closure giving only the min pairwise barrier (+inf with no others)."""
    four_r2 = 4.0 * world.agent_radius * world.agent_radius

    def h(px: float, py: float, pz: float, others=()) -> float:
        m = float("inf")
        for ax, ay, az in others:
            ox = px - ax
            oy = py - ay
            oz = pz - az
            hp = ox * ox + oy * oy + oz * oz - four_r2
            if hp < m:
                m = hp
        return m

    return h
