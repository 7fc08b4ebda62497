"""Rollout-based safety filter around a time-varying backup controller.

Per control period the filter:

  1. attempts to restart the maneuver schedule from phase 0 (or, once the
     schedule has fully entered its stopping stage, to adopt the next
     maneuver in the agent's list) by rolling the candidate plan forward over
     the full horizon and checking every sample against the arena barrier and
     the final sample against the backup set;
  2. on acceptance the phase resets to 0 with a freshly captured maneuver
     context; on rejection the phase advances by exactly one period and the
     committed plan keeps executing;
  3. evaluates the implicit barrier h_I = min(h along the committed plan's
     rollout, backup-set margin at the horizon end) and blends the pilot's
     input with the scheduled policy:

         u_act = lam * u_pilot + (1 - lam) * u_schedule,
         lam   = 1 - exp(-beta * max(0, h_I)).

With h_I <= 0 the scheduled policy applies verbatim (lam = 0), which is what
makes the zero-superlevel set of h_I forward invariant in closed loop.

At most two rollouts run per step: one fresh-start feasibility rollout and,
when it is rejected, one rollout of the committed plan at its aged phase
(when the restart is accepted the two coincide and the result is reused).

Other agents enter through `CoAgentPlan`s: their broadcast states are
propagated under their own declared schedules during every rollout, and the
pairwise separation barrier is evaluated against their predicted positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Sequence

from .policies import (
    BackupGains,
    Maneuver,
    ManeuverSpec,
    TbcTiming,
    VelocityCommand,
    make_tbc,
    make_velocity_input,
)
from .rigid_body import (
    DroneInput,
    DroneParams,
    DroneState,
    _clamp_input,
    _rk4_step,
)
from .safety_sets import World, world_kernel


@dataclass(frozen=True)
class FilterConfig:
    """Timing and tuning of the filter loop.

    period: control period (s). dt_roll: rollout sub-step (s); the horizon
    must be an integer multiple of it. beta: regulation sharpness per barrier
    unit. margin: extra barrier clearance required along a candidate rollout
    before a restart is accepted (the implicit barrier itself is unmargined).
    """

    timing: TbcTiming
    period: float = 0.01
    dt_roll: float = 0.02
    beta: float = 2.0
    margin: float = 0.0

    def __post_init__(self):
        if not self.period > 0.0:
            raise ValueError("period must be positive")
        if not 0.0 < self.dt_roll <= 0.05:
            raise ValueError("dt_roll must be in (0, 0.05]")
        if not self.beta > 0.0:
            raise ValueError("beta must be positive")
        if self.margin < 0.0:
            raise ValueError("margin must be nonnegative")
        n = round(self.timing.horizon / self.dt_roll)
        if abs(n * self.dt_roll - self.timing.horizon) > 1e-9 or n < 1:
            raise ValueError("horizon must be an integer number of rollout sub-steps")

    @property
    def n_sub(self) -> int:
        return round(self.timing.horizon / self.dt_roll)


@dataclass(frozen=True)
class FilterState:
    """Per-agent filter memory.

    phase is the time the committed schedule has been running; it resets to
    zero exactly when a restart is accepted and otherwise grows by one period
    per step (phase_ticks carries the exact integer count). maneuver_idx is
    the 1-based index of the committed maneuver in the agent's list, and
    maneuver its captured context.
    """

    maneuver_idx: int
    maneuver: Maneuver
    phase_ticks: int = 0
    phase: float = 0.0
    last_h_i: float = math.inf
    last_lambda: float = 1.0

    def __post_init__(self):
        if self.phase_ticks < 0 or self.phase < 0.0:
            raise ValueError("phase must be nonnegative")
        if self.maneuver_idx < 1:
            raise ValueError("maneuver_idx is 1-based")


@dataclass(frozen=True)
class CoAgentPlan:
    """Another agent's broadcast state and declared schedule, used to predict
    it during rollouts."""

    state: DroneState
    maneuver: Maneuver
    phase: float
    timing: TbcTiming
    params: DroneParams
    gains: BackupGains


class RolloutResult:
    """Outcome of one closed-loop rollout.

    h_min: min arena barrier over all samples (pairwise terms included).
    h_terminal: backup-set barrier at the final sample.
    h_i: min(h_min, h_terminal), the implicit barrier value.
    h_pair_min: min pairwise-only term (+inf without co-agents).
    samples: (tau, DroneState) at dt spacing, horizon/dt + 1 entries.
    """

    __slots__ = ("h_min", "h_terminal", "h_i", "h_pair_min", "_raw", "_dt", "__dict__")

    def __init__(self, h_min: float, h_terminal: float, h_pair_min: float, raw_samples: list, dt: float):
        self.h_min = h_min
        self.h_terminal = h_terminal
        self.h_i = h_min if h_min < h_terminal else h_terminal
        self.h_pair_min = h_pair_min
        self._raw = raw_samples
        self._dt = dt

    @cached_property
    def samples(self) -> tuple:
        return tuple((tau, DroneState.from_tuple(s)) for tau, s in self._raw)

    def admissible(self, margin: float) -> bool:
        """Restart acceptance test: full path clear by `margin`, terminal in
        the backup set (both inclusive)."""
        return self.h_min >= margin and self.h_terminal >= 0.0


@dataclass(frozen=True)
class StepTelemetry:
    """One filter step's record."""

    t: float
    agent_id: int
    h_i: float
    lam: float
    phase: float
    maneuver_idx: int
    thrust: float
    omega_des: tuple
    reset_flag: bool
    switch_flag: bool
    h_pair_roll: float = math.inf
    rollouts: int = 0


def regulation_lambda(h_i: float, beta: float) -> float:
    """Pilot-authority weight in [0, 1): zero iff h_i <= 0, saturating toward
    one as beta * h_i grows."""
    assert beta > 0.0
    if h_i <= 0.0:
        return 0.0
    return 1.0 - math.exp(-beta * h_i)


def init_filter_state(
    policies: Sequence[ManeuverSpec], x: DroneState, pilot_cmd: VelocityCommand
) -> FilterState:
    """Start on the first maneuver with a fresh context and phase zero."""
    if not policies:
        raise ValueError("at least one maneuver is required")
    return FilterState(maneuver_idx=1, maneuver=policies[0].instantiate(x, pilot_cmd))


def rollout(
    x0: DroneState,
    kind: Maneuver,
    phase0: float,
    world: World,
    cfg: FilterConfig,
    params: DroneParams,
    gains: BackupGains,
    co: Sequence[CoAgentPlan] = (),
) -> RolloutResult:
    """Propagate the closed loop under the scheduled policy from clock phase0
    for the full horizon, together with every co-agent under its own declared
    schedule, sampling the arena barrier at each sub-step."""
    ok, res = _roll(x0, kind, phase0, world, cfg, params, gains, co, reject_below=None)
    return res


def feasibility_rollout(
    x0: DroneState,
    kind: Maneuver,
    world: World,
    cfg: FilterConfig,
    params: DroneParams,
    gains: BackupGains,
    co: Sequence[CoAgentPlan] = (),
) -> tuple:
    """Fresh-start acceptance check (phase 0): returns (accepted, result).

    The rollout stops at the first sample below the acceptance margin, in
    which case the result is None; an accepted check returns the complete
    rollout so the caller can reuse it as the committed plan's evaluation.
    """
    ok, res = _roll(x0, kind, 0.0, world, cfg, params, gains, co, reject_below=cfg.margin)
    if ok and res.h_terminal < 0.0:
        return False, None
    return ok, res


def _roll(
    x0: DroneState,
    kind: Maneuver,
    phase0: float,
    world: World,
    cfg: FilterConfig,
    params: DroneParams,
    gains: BackupGains,
    co: Sequence[CoAgentPlan],
    reject_below,
) -> tuple:
    assert phase0 >= 0.0
    dt = cfg.dt_roll
    n = cfg.n_sub
    h_env = world_kernel(world)
    policy = make_tbc(kind, world, cfg.timing, params, gains)
    c0, c_v, g = params.c0, params.c_v, params.gravity
    four_r2 = 4.0 * world.agent_radius * world.agent_radius

    co_policies = [make_tbc(c.maneuver, world, c.timing, c.params, c.gains) for c in co]
    co_states = [c.state.as_tuple() for c in co]
    co_phases = [c.phase for c in co]
    co_dyn = [(c.params.c0, c.params.c_v, c.params.gravity) for c in co]
    n_co = len(co_states)

    s = x0.as_tuple()
    h_min = math.inf
    h_pair_min = math.inf
    raw = []
    for k in range(n + 1):
        tau = k * dt
        px, py, pz = s[0], s[1], s[2]
        h = h_env(px, py, pz)
        for cs in co_states:
            ox = px - cs[0]
            oy = py - cs[1]
            oz = pz - cs[2]
            hp = ox * ox + oy * oy + oz * oz - four_r2
            if hp < h_pair_min:
                h_pair_min = hp
            if hp < h:
                h = hp
        if h < h_min:
            h_min = h
            if reject_below is not None and h_min < reject_below:
                return False, None
        raw.append((tau, s))
        if k < n:
            u = policy(s, phase0 + tau)
            s = _rk4_step(s, u, dt, c0, c_v, g)
            for i in range(n_co):
                cu = co_policies[i](co_states[i], co_phases[i] + tau)
                co_states[i] = _rk4_step(co_states[i], cu, dt, *co_dyn[i])

    vx, vy, vz = s[7], s[8], s[9]
    h_terminal = world.v_stop - math.sqrt(vx * vx + vy * vy + vz * vz)
    return True, RolloutResult(h_min, h_terminal, h_pair_min, raw, dt)


def _aged(fs: FilterState, cfg: FilterConfig, **changes) -> FilterState:
    ticks = fs.phase_ticks + 1
    return replace(fs, phase_ticks=ticks, phase=ticks * cfg.period, **changes)


def _restarted(fs: FilterState, idx: int, maneuver: Maneuver) -> FilterState:
    return replace(fs, maneuver_idx=idx, maneuver=maneuver, phase_ticks=0, phase=0.0)


def try_reset_phase(
    fs: FilterState,
    x: DroneState,
    world: World,
    cfg: FilterConfig,
    params: DroneParams,
    gains: BackupGains,
    policies: Sequence[ManeuverSpec],
    pilot_cmd: VelocityCommand,
    co: Sequence[CoAgentPlan] = (),
) -> tuple:
    """Attempt to restart the committed maneuver from phase zero with a
    freshly captured context (carry-on re-freezes the current pilot command,
    evade re-anchors to the current position).

    Returns (new state, feasibility rollout, accepted). On rejection the
    phase grows by one period and the context is untouched.
    """
    cand = policies[fs.maneuver_idx - 1].instantiate(x, pilot_cmd)
    ok, res = feasibility_rollout(x, cand, world, cfg, params, gains, co)
    if ok:
        return _restarted(fs, fs.maneuver_idx, cand), res, True
    return _aged(fs, cfg), res, False


def try_switch_maneuver(
    fs: FilterState,
    x: DroneState,
    world: World,
    cfg: FilterConfig,
    params: DroneParams,
    gains: BackupGains,
    policies: Sequence[ManeuverSpec],
    pilot_cmd: VelocityCommand,
    co: Sequence[CoAgentPlan] = (),
) -> tuple:
    """Rotate to the next maneuver in the list once the schedule is fully in
    its stopping stage (where every maneuver's policy coincides, so adopting
    a different one cannot produce an input discontinuity).

    Exactly one candidate is evaluated per call. The candidate becomes the
    committed maneuver either way; only on a feasible rollout does the phase
    restart, otherwise the stopping stage keeps executing and the next call
    rotates one further. Below the stopping stage this is a no-op.

    Returns (new state, feasibility rollout or None, accepted).
    """
    if fs.phase < cfg.timing.blend_end:
        return fs, None, False
    idx = fs.maneuver_idx % len(policies) + 1
    cand = policies[idx - 1].instantiate(x, pilot_cmd)
    ok, res = feasibility_rollout(x, cand, world, cfg, params, gains, co)
    if ok:
        return _restarted(fs, idx, cand), res, True
    return _aged(fs, cfg, maneuver_idx=idx, maneuver=cand), res, False


def filter_step(
    fs: FilterState,
    x: DroneState,
    t: float,
    u_des: VelocityCommand,
    world: World,
    cfg: FilterConfig,
    params: DroneParams,
    gains: BackupGains,
    policies: Sequence[ManeuverSpec],
    co: Sequence[CoAgentPlan] = (),
    agent_id: int = 0,
) -> tuple:
    """One full filter period: restart/switch bookkeeping, implicit-barrier
    evaluation on the committed plan, then the regulated input blend.

    Returns (u_act, new FilterState, StepTelemetry). Whenever h_I <= 0 the
    returned input is the scheduled policy's output, bit for bit.
    """
    in_backup_stage = fs.phase >= cfg.timing.blend_end
    if in_backup_stage:
        fs2, fresh, accepted = try_switch_maneuver(
            fs, x, world, cfg, params, gains, policies, pilot_cmd=u_des, co=co
        )
    else:
        fs2, fresh, accepted = try_reset_phase(
            fs, x, world, cfg, params, gains, policies, pilot_cmd=u_des, co=co
        )
    switch_flag = accepted and fs2.maneuver_idx != fs.maneuver_idx
    reset_flag = accepted and not switch_flag

    if accepted:
        current = fresh
        rollouts = 1
    else:
        current = rollout(x, fs2.maneuver, fs2.phase, world, cfg, params, gains, co)
        rollouts = 2

    h_i = current.h_i
    lam = regulation_lambda(h_i, cfg.beta)

    st = x.as_tuple()
    schedule_u = make_tbc(fs2.maneuver, world, cfg.timing, params, gains)(st, fs2.phase)
    if lam == 0.0:
        u_act = schedule_u
    else:
        pilot_u = make_velocity_input(u_des, params, gains)(st)
        w = 1.0 - lam
        u_act = _clamp_input(
            (
                lam * pilot_u[0] + w * schedule_u[0],
                lam * pilot_u[1] + w * schedule_u[1],
                lam * pilot_u[2] + w * schedule_u[2],
                lam * pilot_u[3] + w * schedule_u[3],
            ),
            params.thrust_max,
            params.omega_max,
        )

    fs3 = replace(fs2, last_h_i=h_i, last_lambda=lam)
    telem = StepTelemetry(
        t=t,
        agent_id=agent_id,
        h_i=h_i,
        lam=lam,
        phase=fs3.phase,
        maneuver_idx=fs3.maneuver_idx,
        thrust=u_act[0],
        omega_des=(u_act[1], u_act[2], u_act[3]),
        reset_flag=reset_flag,
        switch_flag=switch_flag,
        h_pair_roll=current.h_pair_min,
        rollouts=rollouts,
    )
    return DroneInput.from_tuple(u_act), fs3, telem
