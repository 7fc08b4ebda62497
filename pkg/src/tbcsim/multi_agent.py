"""Decentralized multi-agent simulation round.

Each tick is a barrier-synchronized round:

  1. snapshot every agent (state, committed maneuver, phase) at tick start;
  2. every agent independently runs its own safety filter against the
     snapshot set, predicting the others under their broadcast schedules;
  3. every agent integrates one control period with its filtered input.

No agent observes another agent's same-tick update, so the result is
independent of evaluation order, and two agents fed the same snapshot set
compute identical joint rollouts: decentralized evaluations never diverge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .filter import (
    CoAgentPlan,
    FilterConfig,
    FilterState,
    RolloutResult,
    filter_step,
    rollout,
)
from .policies import BackupGains, Maneuver
from .rigid_body import DroneParams, DroneState, integrate_step
from .safety_sets import World


@dataclass(frozen=True)
class AgentSnapshot:
    """Broadcast tuple other agents consume for joint rollouts."""

    id: int
    state: DroneState
    maneuver_idx: int
    maneuver: Maneuver
    phase: float
    tick: int = 0


@dataclass(frozen=True)
class AgentModel:
    """Static description of one vehicle: physics, gains, and maneuver list."""

    id: int
    params: DroneParams
    gains: BackupGains
    policies: tuple

    def __post_init__(self):
        if not self.policies:
            raise ValueError("agent needs at least one maneuver")
        object.__setattr__(self, "policies", tuple(self.policies))


@dataclass
class Agent:
    """Mutable per-agent simulation record."""

    model: AgentModel
    state: DroneState
    fs: FilterState


class StaleSnapshotError(RuntimeError):
    """Snapshot set mixes different ticks; the harness broke round isolation."""


def snapshot_of(agent: Agent, tick: int) -> AgentSnapshot:
    return AgentSnapshot(
        id=agent.model.id,
        state=agent.state,
        maneuver_idx=agent.fs.maneuver_idx,
        maneuver=agent.fs.maneuver,
        phase=agent.fs.phase,
        tick=tick,
    )


def co_plans(
    self_id: int,
    snapshots: Sequence[AgentSnapshot],
    models: dict,
    cfg: FilterConfig,
) -> tuple:
    """Build the prediction models for everyone except self, ordered by id."""
    plans = []
    for snap in sorted(snapshots, key=lambda s: s.id):
        if snap.id == self_id:
            continue
        m = models[snap.id]
        plans.append(
            CoAgentPlan(
                state=snap.state,
                maneuver=snap.maneuver,
                phase=snap.phase,
                timing=cfg.timing,
                params=m.params,
                gains=m.gains,
            )
        )
    return tuple(plans)


def joint_rollout(
    self_snap: AgentSnapshot,
    snapshots: Sequence[AgentSnapshot],
    models: dict,
    world: World,
    cfg: FilterConfig,
    phase0: Optional[float] = None,
    maneuver: Optional[Maneuver] = None,
) -> RolloutResult:
    """Roll the joint system from a snapshot set: self under its committed
    (or a candidate) schedule, every other agent under its broadcast one.

    Raises StaleSnapshotError when the snapshots carry different tick tags.
    """
    ticks = {s.tick for s in snapshots} | {self_snap.tick}
    if len(ticks) > 1:
        raise StaleSnapshotError(f"snapshot ticks differ: {sorted(ticks)}")
    m = models[self_snap.id]
    return rollout(
        self_snap.state,
        self_snap.maneuver if maneuver is None else maneuver,
        self_snap.phase if phase0 is None else phase0,
        world,
        cfg,
        m.params,
        m.gains,
        co=co_plans(self_snap.id, snapshots, models, cfg),
    )


def tick(
    agents: Sequence[Agent],
    pilot_cmds: dict,
    world: World,
    cfg: FilterConfig,
    tick_index: int,
    clock: Optional[object] = None,
) -> list:
    """Run one synchronized round in place; returns per-agent telemetry
    ordered by agent id.

    pilot_cmds maps agent id -> VelocityCommand. `clock` (perf_counter-like)
    enables per-step wall-time measurement in the telemetry extras.
    """
    t = tick_index * cfg.period
    snaps = [snapshot_of(a, tick_index) for a in agents]
    models = {a.model.id: a.model for a in agents}
    ordered = sorted(agents, key=lambda a: a.model.id)

    telems = []
    inputs = {}
    new_fs = {}
    for a in ordered:
        aid = a.model.id
        co = co_plans(aid, snaps, models, cfg)
        t0 = clock() if clock is not None else 0.0
        u, fs2, telem = filter_step(
            a.fs,
            a.state,
            t,
            pilot_cmds[aid],
            world,
            cfg,
            a.model.params,
            a.model.gains,
            a.model.policies,
            co=co,
            agent_id=aid,
        )
        telems.append((telem, clock() - t0 if clock is not None else 0.0))
        inputs[aid] = u
        new_fs[aid] = fs2

    for a in ordered:
        aid = a.model.id
        a.fs = new_fs[aid]
        a.state = integrate_step(a.state, inputs[aid], cfg.period, a.model.params)

    return telems


@dataclass(frozen=True)
class DeadlockReport:
    """Terminal-window progress summary."""

    window: float
    max_speed: float
    progress: dict
    deadlocked: bool


def deadlock_metric(
    times: Sequence[float],
    positions: dict,
    velocities: dict,
    commands: dict,
    v_stop: float,
    window: float = 5.0,
) -> DeadlockReport:
    """Flag a deadlock when, over the final `window` seconds, every agent is
    both slow (max speed < 1.5 * v_stop) and makes < 0.1 m of progress along
    its commanded direction.

    positions/velocities/commands map agent id -> per-tick sequences aligned
    with `times` (commands as Vec3 desired velocities).
    """
    if not times or times[-1] - times[0] < 10.0 - 1e-9:
        raise ValueError("deadlock metric needs at least 10 s of trace")
    t_cut = times[-1] - window
    k0 = next(i for i, tv in enumerate(times) if tv >= t_cut)

    max_speed = 0.0
    progress = {}
    for aid in positions:
        vs = velocities[aid]
        for k in range(k0, len(times)):
            s = vs[k].norm()
            if s > max_speed:
                max_speed = s
        # mean commanded direction over the window
        cx = cy = cz = 0.0
        for k in range(k0, len(times)):
            c = commands[aid][k]
            cx += c.x
            cy += c.y
            cz += c.z
        cn = math.sqrt(cx * cx + cy * cy + cz * cz)
        if cn < 1e-9:
            progress[aid] = 0.0
            continue
        disp = positions[aid][-1] - positions[aid][k0]
        progress[aid] = (disp.x * cx + disp.y * cy + disp.z * cz) / cn

    slow = max_speed < 1.5 * v_stop
    stuck = all(p < 0.1 for p in progress.values()) if progress else False
    return DeadlockReport(window=window, max_speed=max_speed, progress=progress, deadlocked=slow and stuck)
