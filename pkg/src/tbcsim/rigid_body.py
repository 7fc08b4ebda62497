"""Quaternion-based rigid-body drone model with a deterministic RK4 integrator.

The vehicle is abstracted as a rigid body that tracks commanded angular rates
through a first-order lag, the usual simplification when a high-rate flight
controller handles the motor loop:

    p_dot = v                                 (world frame, m/s)
    q_dot = 1/2 * q (x) (0, omega)            (body rates, Hamilton product)
    v_dot = R(q) * (0, 0, thrust) - (0, 0, g) (mass-normalized thrust, m/s^2)
    omega_dot = C(x) * (omega_des - omega),   C(x) = c0 / (1 + c_v * ||v||)

State is 13 scalars: position, unit quaternion (w, x, y, z), world velocity,
body rates. Inputs are mass-normalized collective thrust along body z plus a
desired body-rate vector; both are saturated, never rejected.

All public operations are pure functions. The module keeps a flat tuple-based
kernel (`_derivative`, `_rk4_step`) that the simulation rollouts call in tight
loops; the dataclass API wraps it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

StateTuple = tuple  # 13 floats: px py pz qw qx qy qz vx vy vz ox oy oz
InputTuple = tuple  # 4 floats: thrust ox oy oz


@dataclass(frozen=True)
class Vec3:
    """Cartesian triple; meters, m/s, or rad/s depending on context."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scale(self, a: float) -> "Vec3":
        return Vec3(a * self.x, a * self.y, a * self.z)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def unit(self) -> "Vec3":
        n = self.norm()
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize zero vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class UnitQuaternion:
    """Unit quaternion, scalar-first (w, x, y, z); normalized on construction."""

    w: float = 1.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        n = math.sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)
        if not (n > 0.0 and math.isfinite(n)):
            raise ValueError("quaternion must be finite and nonzero")
        if abs(n - 1.0) > 1e-12:
            object.__setattr__(self, "w", self.w / n)
            object.__setattr__(self, "x", self.x / n)
            object.__setattr__(self, "y", self.y / n)
            object.__setattr__(self, "z", self.z / n)

    @staticmethod
    def identity() -> "UnitQuaternion":
        return UnitQuaternion(1.0, 0.0, 0.0, 0.0)

    def rotate(self, v: Vec3) -> Vec3:
        """Rotate a body-frame vector into the world frame."""
        x, y, z = _quat_rotate(self.w, self.x, self.y, self.z, v.x, v.y, v.z)
        return Vec3(x, y, z)

    def rotate_inverse(self, v: Vec3) -> Vec3:
        """Rotate a world-frame vector into the body frame."""
        x, y, z = _quat_rotate(self.w, -self.x, -self.y, -self.z, v.x, v.y, v.z)
        return Vec3(x, y, z)

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)


@dataclass(frozen=True)
class DroneState:
    """13-component rigid-body state."""

    p: Vec3 = Vec3()
    q: UnitQuaternion = UnitQuaternion()
    v: Vec3 = Vec3()
    omega: Vec3 = Vec3()

    def as_tuple(self) -> StateTuple:
        return (
            self.p.x, self.p.y, self.p.z,
            self.q.w, self.q.x, self.q.y, self.q.z,
            self.v.x, self.v.y, self.v.z,
            self.omega.x, self.omega.y, self.omega.z,
        )

    @staticmethod
    def from_tuple(s: StateTuple) -> "DroneState":
        return DroneState(
            Vec3(s[0], s[1], s[2]),
            UnitQuaternion(s[3], s[4], s[5], s[6]),
            Vec3(s[7], s[8], s[9]),
            Vec3(s[10], s[11], s[12]),
        )


@dataclass(frozen=True)
class DroneInput:
    """Mass-normalized thrust (m/s^2, body z) and desired body rates (rad/s)."""

    thrust: float = 0.0
    omega_des: Vec3 = Vec3()

    def as_tuple(self) -> InputTuple:
        return (self.thrust, self.omega_des.x, self.omega_des.y, self.omega_des.z)

    @staticmethod
    def from_tuple(u: InputTuple) -> "DroneInput":
        return DroneInput(u[0], Vec3(u[1], u[2], u[3]))


@dataclass(frozen=True)
class DroneParams:
    """Physical and actuation limits of the abstracted vehicle.

    c0 is the base angular-rate tracking bandwidth (1/s); c_v (s/m) optionally
    slows tracking with airspeed. thrust_max must exceed gravity or the
    vehicle cannot hover.
    """

    c0: float = 20.0
    c_v: float = 0.0
    thrust_max: float = 25.0
    omega_max: float = 10.0
    gravity: float = 9.81

    def __post_init__(self):
        if not self.c0 > 0.0:
            raise ValueError("c0 must be positive")
        if self.c_v < 0.0:
            raise ValueError("c_v must be nonnegative")
        if not self.thrust_max > self.gravity:
            raise ValueError("thrust_max must exceed gravity")
        if not self.omega_max > 0.0:
            raise ValueError("omega_max must be positive")


@dataclass(frozen=True)
class DroneStateDerivative:
    """Time derivative of the 13-component state (dq is a raw quaternion rate)."""

    dp: Vec3
    dq: tuple
    dv: Vec3
    domega: Vec3

    def as_tuple(self) -> StateTuple:
        return (
            self.dp.x, self.dp.y, self.dp.z,
            self.dq[0], self.dq[1], self.dq[2], self.dq[3],
            self.dv.x, self.dv.y, self.dv.z,
            self.domega.x, self.domega.y, self.domega.z,
        )


# ---------------------------------------------------------------------------
# Flat kernels (hot path; everything above delegates here)
# ---------------------------------------------------------------------------

def _quat_rotate(qw, qx, qy, qz, vx, vy, vz):
    """Rotate (vx,vy,vz) by the quaternion; 2*cross-product formulation."""
    tx = 2.0 * (qy * vz - qz * vy)
    ty = 2.0 * (qz * vx - qx * vz)
    tz = 2.0 * (qx * vy - qy * vx)
    return (
        vx + qw * tx + (qy * tz - qz * ty),
        vy + qw * ty + (qz * tx - qx * tz),
        vz + qw * tz + (qx * ty - qy * tx),
    )


def _derivative(s: StateTuple, u: InputTuple, c0: float, c_v: float, g: float) -> StateTuple:
    (_, _, _, qw, qx, qy, qz, vx, vy, vz, ox, oy, oz) = s
    thrust, odx, ody, odz = u

    # body z axis in world frame = R(q) e3, thrust acts along it
    bzx = 2.0 * (qx * qz + qw * qy)
    bzy = 2.0 * (qy * qz - qw * qx)
    bzz = 1.0 - 2.0 * (qx * qx + qy * qy)

    # q_dot = 0.5 * q (x) (0, omega)
    dqw = -0.5 * (qx * ox + qy * oy + qz * oz)
    dqx = 0.5 * (qw * ox + qy * oz - qz * oy)
    dqy = 0.5 * (qw * oy + qz * ox - qx * oz)
    dqz = 0.5 * (qw * oz + qx * oy - qy * ox)

    c = c0 / (1.0 + c_v * math.sqrt(vx * vx + vy * vy + vz * vz))

    return (
        vx, vy, vz,
        dqw, dqx, dqy, dqz,
        thrust * bzx, thrust * bzy, thrust * bzz - g,
        c * (odx - ox), c * (ody - oy), c * (odz - oz),
    )


def _rk4_step(s: StateTuple, u: InputTuple, dt: float, c0: float, c_v: float, g: float) -> StateTuple:
    """One classical RK4 step with the input held constant, then quaternion renorm.

    Fully inlined over the 13 components (this sits in every rollout
    sub-step). The vector field does not depend on position, so stage
    positions are never formed: the position update integrates the stage
    velocities directly. Must stay algebraically identical to composing
    `_derivative` stages; a regression test compares the two.
    """
    px, py, pz, qw, qx, qy, qz, vx, vy, vz, ox, oy, oz = s
    th, odx, ody, odz = u
    h = 0.5 * dt

    # stage 1 at the initial state
    k1qw = -0.5 * (qx * ox + qy * oy + qz * oz)
    k1qx = 0.5 * (qw * ox + qy * oz - qz * oy)
    k1qy = 0.5 * (qw * oy + qz * ox - qx * oz)
    k1qz = 0.5 * (qw * oz + qx * oy - qy * ox)
    k1vx = th * (2.0 * (qx * qz + qw * qy))
    k1vy = th * (2.0 * (qy * qz - qw * qx))
    k1vz = th * (1.0 - 2.0 * (qx * qx + qy * qy)) - g
    c = c0 / (1.0 + c_v * math.sqrt(vx * vx + vy * vy + vz * vz)) if c_v != 0.0 else c0
    k1ox = c * (odx - ox)
    k1oy = c * (ody - oy)
    k1oz = c * (odz - oz)

    # stage 2 at s + h*k1
    w2 = qw + h * k1qw
    x2 = qx + h * k1qx
    y2 = qy + h * k1qy
    z2 = qz + h * k1qz
    vx2 = vx + h * k1vx
    vy2 = vy + h * k1vy
    vz2 = vz + h * k1vz
    ox2 = ox + h * k1ox
    oy2 = oy + h * k1oy
    oz2 = oz + h * k1oz
    k2qw = -0.5 * (x2 * ox2 + y2 * oy2 + z2 * oz2)
    k2qx = 0.5 * (w2 * ox2 + y2 * oz2 - z2 * oy2)
    k2qy = 0.5 * (w2 * oy2 + z2 * ox2 - x2 * oz2)
    k2qz = 0.5 * (w2 * oz2 + x2 * oy2 - y2 * ox2)
    k2vx = th * (2.0 * (x2 * z2 + w2 * y2))
    k2vy = th * (2.0 * (y2 * z2 - w2 * x2))
    k2vz = th * (1.0 - 2.0 * (x2 * x2 + y2 * y2)) - g
    c = c0 / (1.0 + c_v * math.sqrt(vx2 * vx2 + vy2 * vy2 + vz2 * vz2)) if c_v != 0.0 else c0
    k2ox = c * (odx - ox2)
    k2oy = c * (ody - oy2)
    k2oz = c * (odz - oz2)

    # stage 3 at s + h*k2
    w3 = qw + h * k2qw
    x3 = qx + h * k2qx
    y3 = qy + h * k2qy
    z3 = qz + h * k2qz
    vx3 = vx + h * k2vx
    vy3 = vy + h * k2vy
    vz3 = vz + h * k2vz
    ox3 = ox + h * k2ox
    oy3 = oy + h * k2oy
    oz3 = oz + h * k2oz
    k3qw = -0.5 * (x3 * ox3 + y3 * oy3 + z3 * oz3)
    k3qx = 0.5 * (w3 * ox3 + y3 * oz3 - z3 * oy3)
    k3qy = 0.5 * (w3 * oy3 + z3 * ox3 - x3 * oz3)
    k3qz = 0.5 * (w3 * oz3 + x3 * oy3 - y3 * ox3)
    k3vx = th * (2.0 * (x3 * z3 + w3 * y3))
    k3vy = th * (2.0 * (y3 * z3 - w3 * x3))
    k3vz = th * (1.0 - 2.0 * (x3 * x3 + y3 * y3)) - g
    c = c0 / (1.0 + c_v * math.sqrt(vx3 * vx3 + vy3 * vy3 + vz3 * vz3)) if c_v != 0.0 else c0
    k3ox = c * (odx - ox3)
    k3oy = c * (ody - oy3)
    k3oz = c * (odz - oz3)

    # stage 4 at s + dt*k3
    w4 = qw + dt * k3qw
    x4 = qx + dt * k3qx
    y4 = qy + dt * k3qy
    z4 = qz + dt * k3qz
    vx4 = vx + dt * k3vx
    vy4 = vy + dt * k3vy
    vz4 = vz + dt * k3vz
    ox4 = ox + dt * k3ox
    oy4 = oy + dt * k3oy
    oz4 = oz + dt * k3oz
    k4qw = -0.5 * (x4 * ox4 + y4 * oy4 + z4 * oz4)
    k4qx = 0.5 * (w4 * ox4 + y4 * oz4 - z4 * oy4)
    k4qy = 0.5 * (w4 * oy4 + z4 * ox4 - x4 * oz4)
    k4qz = 0.5 * (w4 * oz4 + x4 * oy4 - y4 * ox4)
    k4vx = th * (2.0 * (x4 * z4 + w4 * y4))
    k4vy = th * (2.0 * (y4 * z4 - w4 * x4))
    k4vz = th * (1.0 - 2.0 * (x4 * x4 + y4 * y4)) - g
    c = c0 / (1.0 + c_v * math.sqrt(vx4 * vx4 + vy4 * vy4 + vz4 * vz4)) if c_v != 0.0 else c0
    k4ox = c * (odx - ox4)
    k4oy = c * (ody - oy4)
    k4oz = c * (odz - oz4)

    w = dt / 6.0
    nqw = qw + w * (k1qw + 2.0 * (k2qw + k3qw) + k4qw)
    nqx = qx + w * (k1qx + 2.0 * (k2qx + k3qx) + k4qx)
    nqy = qy + w * (k1qy + 2.0 * (k2qy + k3qy) + k4qy)
    nqz = qz + w * (k1qz + 2.0 * (k2qz + k3qz) + k4qz)
    qn = math.sqrt(nqw * nqw + nqx * nqx + nqy * nqy + nqz * nqz)
    return (
        px + w * (vx + 2.0 * (vx2 + vx3) + vx4),
        py + w * (vy + 2.0 * (vy2 + vy3) + vy4),
        pz + w * (vz + 2.0 * (vz2 + vz3) + vz4),
        nqw / qn, nqx / qn, nqy / qn, nqz / qn,
        vx + w * (k1vx + 2.0 * (k2vx + k3vx) + k4vx),
        vy + w * (k1vy + 2.0 * (k2vy + k3vy) + k4vy),
        vz + w * (k1vz + 2.0 * (k2vz + k3vz) + k4vz),
        ox + w * (k1ox + 2.0 * (k2ox + k3ox) + k4ox),
        oy + w * (k1oy + 2.0 * (k2oy + k3oy) + k4oy),
        oz + w * (k1oz + 2.0 * (k2oz + k3oz) + k4oz),
    )


def _clamp_input(u: InputTuple, thrust_max: float, omega_max: float) -> InputTuple:
    t, ox, oy, oz = u
    if t < 0.0:
        t = 0.0
    elif t > thrust_max:
        t = thrust_max
    if ox > omega_max:
        ox = omega_max
    elif ox < -omega_max:
        ox = -omega_max
    if oy > omega_max:
        oy = omega_max
    elif oy < -omega_max:
        oy = -omega_max
    if oz > omega_max:
        oz = omega_max
    elif oz < -omega_max:
        oz = -omega_max
    return (t, ox, oy, oz)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def drone_derivative(x: DroneState, u: DroneInput, params: DroneParams) -> DroneStateDerivative:
    """Control-affine state derivative f(x) + g(x) u evaluated at (x, u)."""
    s = x.as_tuple()
    assert all(math.isfinite(c) for c in s), "non-finite state"
    d = _derivative(s, u.as_tuple(), params.c0, params.c_v, params.gravity)
    return DroneStateDerivative(
        dp=Vec3(d[0], d[1], d[2]),
        dq=(d[3], d[4], d[5], d[6]),
        dv=Vec3(d[7], d[8], d[9]),
        domega=Vec3(d[10], d[11], d[12]),
    )


def integrate_step(x: DroneState, u: DroneInput, dt: float, params: DroneParams) -> DroneState:
    """Advance the state by one RK4 step of length dt (dt in (0, 0.1] s)."""
    assert 0.0 < dt <= 0.1, "dt out of range"
    s = _rk4_step(x.as_tuple(), u.as_tuple(), dt, params.c0, params.c_v, params.gravity)
    return DroneState.from_tuple(s)


def clamp_input(u: DroneInput, params: DroneParams) -> DroneInput:
    """Saturate thrust to [0, thrust_max] and each rate to [-omega_max, omega_max]."""
    return DroneInput.from_tuple(_clamp_input(u.as_tuple(), params.thrust_max, params.omega_max))
