"""Config-driven batch simulation: TOML scenarios in, CSV traces out.

A scenario file has top-level keys (duration, seed, optional safety_min_h)
and sections [world], [[agents]], [filter], [faults]. Unknown keys anywhere
are errors, and validation reports every violation at once. Identical config
plus seed yields byte-identical trace files; the seed only feeds the
broadcast fault injector (nothing else is random).

Trace CSV columns, in order:

  t, agent_id, px, py, pz, qw, qx, qy, qz, vx, vy, vz, wx, wy, wz,
  thrust_cmd, wdes_x, wdes_y, wdes_z, h_world, h_I, lambda, phase,
  maneuver_idx, reset_flag, switch_flag

one row per agent per control period, sorted by (t, agent_id). State columns
hold the state the filter saw at time t; command columns hold what it issued.
"""

from __future__ import annotations

import csv
import json
import math
import random
import statistics
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import tomlcfg
from .filter import CoAgentPlan, FilterConfig, filter_step, init_filter_state
from .multi_agent import Agent, AgentModel, DeadlockReport, co_plans, deadlock_metric, snapshot_of
from .policies import (
    BackupGains,
    CarryOnSpec,
    EvadeSpec,
    TbcTiming,
    VelocityCommand,
    clamp_command,
)
from .rigid_body import DroneParams, DroneState, UnitQuaternion, Vec3, integrate_step
from .safety_sets import BoxRegion, SphereObstacle, World, pair_kernel, world_kernel

TRACE_COLUMNS = (
    "t", "agent_id", "px", "py", "pz", "qw", "qx", "qy", "qz",
    "vx", "vy", "vz", "wx", "wy", "wz",
    "thrust_cmd", "wdes_x", "wdes_y", "wdes_z",
    "h_world", "h_I", "lambda", "phase", "maneuver_idx", "reset_flag", "switch_flag",
)


class ConfigError(ValueError):
    """Carries every config violation found, one per line."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("invalid scenario config:\n" + "\n".join(f"  - {p}" for p in self.problems))


# ---------------------------------------------------------------------------
# Pilot scripts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantPilot:
    command: VelocityCommand

    def command_at(self, t: float, x: DroneState) -> VelocityCommand:
        return self.command


@dataclass(frozen=True)
class PiecewisePilot:
    """Segments of (t_start, command); the last started segment applies."""

    segments: tuple

    def __post_init__(self):
        times = [t for t, _ in self.segments]
        if not self.segments or times != sorted(set(times)):
            raise ValueError("piecewise times must be strictly increasing")

    def command_at(self, t: float, x: DroneState) -> VelocityCommand:
        cmd = self.segments[0][1]
        for ts, c in self.segments:
            if t >= ts:
                cmd = c
            else:
                break
        return cmd


@dataclass(frozen=True)
class WaypointPilot:
    """Chase waypoints in order at `gain` times the remaining distance,
    advancing within `arrive_radius`; holds position after the last one."""

    points: tuple
    gain: float = 1.0
    arrive_radius: float = 0.3

    def command_at(self, t: float, x: DroneState) -> VelocityCommand:
        for wp in self.points:
            d = wp - x.p
            if d.norm() > self.arrive_radius:
                return VelocityCommand(d.scale(self.gain))
        return VelocityCommand(Vec3())


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AgentConfig:
    position: Vec3
    velocity: Vec3
    pilot: object
    maneuvers: tuple
    gains: BackupGains
    drone: DroneParams
    v_cmd_max: float = 4.0

    def initial_state(self) -> DroneState:
        return DroneState(p=self.position, q=UnitQuaternion.identity(), v=self.velocity)


@dataclass(frozen=True)
class FaultsConfig:
    drop_probability: float = 0.0
    delay_ticks: int = 0


@dataclass(frozen=True)
class ScenarioConfig:
    world: World
    agents: tuple
    filter: FilterConfig
    duration: float
    seed: int = 0
    faults: FaultsConfig = field(default_factory=FaultsConfig)
    safety_min_h: Optional[float] = None
    raw: dict = field(default_factory=dict, repr=False)


def _vec3(value, problems, where) -> Vec3:
    if (
        not isinstance(value, list)
        or len(value) != 3
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value)
    ):
        problems.append(f"{where}: expected [x, y, z]")
        return Vec3()
    return Vec3(float(value[0]), float(value[1]), float(value[2]))


def _number(table, key, problems, where, default=None, required=False):
    if key not in table:
        if required:
            problems.append(f"{where}: missing key '{key}'")
        return default
    v = table.pop(key)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        problems.append(f"{where}.{key}: expected a number")
        return default
    return float(v)


def _check_unknown(table, where, problems):
    for key in table:
        problems.append(f"{where}: unknown key '{key}'")


def _build(cls, problems, where, **kwargs):
    try:
        return cls(**kwargs)
    except (ValueError, TypeError) as exc:
        problems.append(f"{where}: {exc}")
        return None


def parse_scenario(data: dict) -> ScenarioConfig:
    """Validate a parsed TOML document into a ScenarioConfig; raises
    ConfigError listing every problem found."""
    problems: list = []
    data = json.loads(json.dumps(data))  # deep copy; keys are popped below
    raw = json.loads(json.dumps(data))

    duration = _number(data, "duration", problems, "top level", required=True)
    seed = data.pop("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        problems.append("top level.seed: expected an integer")
        seed = 0
    safety_min_h = _number(data, "safety_min_h", problems, "top level")
    if duration is not None and not duration > 0.0:
        problems.append("top level.duration: must be positive")

    # [world]
    world = None
    wt = data.pop("world", None)
    if not isinstance(wt, dict):
        problems.append("[world]: section missing")
    else:
        center = _vec3(wt.pop("center", None), problems, "world.center")
        half = _vec3(wt.pop("half_extents", None), problems, "world.half_extents")
        radius = _number(wt, "agent_radius", problems, "world", default=0.25)
        v_stop = _number(wt, "v_stop", problems, "world", default=0.1)
        obstacles = []
        for i, ot in enumerate(wt.pop("obstacles", [])):
            oc = _vec3(ot.pop("center", None), problems, f"world.obstacles[{i}].center")
            orad = _number(ot, "radius", problems, f"world.obstacles[{i}]", required=True)
            _check_unknown(ot, f"world.obstacles[{i}]", problems)
            if orad is not None:
                obs = _build(SphereObstacle, problems, f"world.obstacles[{i}]", center=oc, radius=orad)
                if obs:
                    obstacles.append(obs)
        _check_unknown(wt, "world", problems)
        box = _build(BoxRegion, problems, "world", center=center, half_extents=half)
        if box:
            world = _build(
                World, problems, "world",
                geofence=box, obstacles=tuple(obstacles), agent_radius=radius, v_stop=v_stop,
            )

    # [filter]
    fcfg = None
    ft = data.pop("filter", None)
    if not isinstance(ft, dict):
        problems.append("[filter]: section missing")
    else:
        timing = _build(
            TbcTiming, problems, "filter",
            maneuver_time=_number(ft, "maneuver_time", problems, "filter", required=True),
            blend_time=_number(ft, "blend_time", problems, "filter", default=0.2),
            horizon=_number(ft, "horizon", problems, "filter", required=True),
        )
        period = _number(ft, "period", problems, "filter", default=0.01)
        dt_roll = _number(ft, "dt_roll", problems, "filter", default=0.02)
        beta = _number(ft, "beta", problems, "filter", default=2.0)
        margin = _number(ft, "margin", problems, "filter", default=0.0)
        _check_unknown(ft, "filter", problems)
        if timing:
            fcfg = _build(
                FilterConfig, problems, "filter",
                timing=timing, period=period, dt_roll=dt_roll, beta=beta, margin=margin,
            )

    # [[agents]]
    agents: list = []
    ats = data.pop("agents", None)
    if not isinstance(ats, list) or not ats:
        problems.append("[[agents]]: at least one agent required")
        ats = []
    for i, at in enumerate(ats):
        where = f"agents[{i}]"
        position = _vec3(at.pop("position", None), problems, f"{where}.position")
        velocity = _vec3(at.pop("velocity", [0.0, 0.0, 0.0]), problems, f"{where}.velocity")
        v_cmd_max = _number(at, "v_cmd_max", problems, where, default=4.0)

        pilot = _parse_pilot(at.pop("pilot", None), problems, f"{where}.pilot")
        maneuvers = _parse_maneuvers(at.pop("maneuvers", None), problems, f"{where}.maneuvers")

        gt = at.pop("gains", {})
        gains = None
        if isinstance(gt, dict):
            kwargs = {
                k: _number(gt, k, problems, f"{where}.gains")
                for k in ("k_v", "k_repel", "repel_margin", "k_att")
                if k in gt
            }
            _check_unknown(gt, f"{where}.gains", problems)
            gains = _build(BackupGains, problems, f"{where}.gains", **kwargs)
        else:
            problems.append(f"{where}.gains: expected a table")

        dt_ = at.pop("drone", {})
        drone = None
        if isinstance(dt_, dict):
            kwargs = {
                k: _number(dt_, k, problems, f"{where}.drone")
                for k in ("c0", "c_v", "thrust_max", "omega_max", "gravity")
                if k in dt_
            }
            _check_unknown(dt_, f"{where}.drone", problems)
            drone = _build(DroneParams, problems, f"{where}.drone", **kwargs)
        else:
            problems.append(f"{where}.drone: expected a table")

        _check_unknown(at, where, problems)
        if pilot and maneuvers and gains and drone and v_cmd_max is not None:
            agents.append(
                AgentConfig(
                    position=position,
                    velocity=velocity,
                    pilot=pilot,
                    maneuvers=maneuvers,
                    gains=gains,
                    drone=drone,
                    v_cmd_max=v_cmd_max,
                )
            )

    # [faults]
    faults = FaultsConfig()
    fts = data.pop("faults", None)
    if fts is not None:
        if not isinstance(fts, dict):
            problems.append("[faults]: expected a table")
        else:
            drop = _number(fts, "drop_probability", problems, "faults", default=0.0)
            delay = fts.pop("delay_ticks", 0)
            if not isinstance(delay, int) or isinstance(delay, bool) or delay < 0:
                problems.append("faults.delay_ticks: expected a nonnegative integer")
                delay = 0
            _check_unknown(fts, "faults", problems)
            if drop is not None and not 0.0 <= drop <= 1.0:
                problems.append("faults.drop_probability: must be in [0, 1]")
                drop = 0.0
            faults = FaultsConfig(drop_probability=drop or 0.0, delay_ticks=delay)

    _check_unknown(data, "top level", problems)

    if problems or world is None or fcfg is None or not agents:
        raise ConfigError(problems or ["empty config"])
    return ScenarioConfig(
        world=world,
        agents=tuple(agents),
        filter=fcfg,
        duration=duration,
        seed=seed,
        faults=faults,
        safety_min_h=safety_min_h,
        raw=raw,
    )


def _parse_pilot(pt, problems, where):
    if not isinstance(pt, dict):
        problems.append(f"{where}: section missing")
        return None
    kind = pt.pop("type", None)
    if kind == "constant":
        v = _vec3(pt.pop("v", None), problems, f"{where}.v")
        yaw = _number(pt, "yaw_rate", problems, where, default=0.0)
        _check_unknown(pt, where, problems)
        return _build(ConstantPilot, problems, where, command=VelocityCommand(v, yaw))
    if kind == "piecewise":
        segs = pt.pop("segments", None)
        _check_unknown(pt, where, problems)
        if not isinstance(segs, list) or not segs:
            problems.append(f"{where}.segments: expected a list of [t, vx, vy, vz(, yaw_rate)]")
            return None
        parsed = []
        for j, seg in enumerate(segs):
            if not isinstance(seg, list) or len(seg) not in (4, 5):
                problems.append(f"{where}.segments[{j}]: expected [t, vx, vy, vz(, yaw_rate)]")
                return None
            t0 = float(seg[0])
            cmd = VelocityCommand(
                Vec3(float(seg[1]), float(seg[2]), float(seg[3])),
                float(seg[4]) if len(seg) == 5 else 0.0,
            )
            parsed.append((t0, cmd))
        return _build(PiecewisePilot, problems, where, segments=tuple(parsed))
    if kind == "waypoint":
        pts = pt.pop("points", None)
        gain = _number(pt, "gain", problems, where, default=1.0)
        arrive = _number(pt, "arrive_radius", problems, where, default=0.3)
        _check_unknown(pt, where, problems)
        if not isinstance(pts, list) or not pts:
            problems.append(f"{where}.points: expected a list of [x, y, z]")
            return None
        points = tuple(_vec3(p, problems, f"{where}.points[{j}]") for j, p in enumerate(pts))
        return _build(WaypointPilot, problems, where, points=points, gain=gain, arrive_radius=arrive)
    problems.append(f"{where}.type: expected constant | piecewise | waypoint, got {kind!r}")
    return None


def _parse_maneuvers(mts, problems, where):
    if not isinstance(mts, list) or not mts:
        problems.append(f"{where}: at least one maneuver required")
        return None
    out = []
    for j, mt in enumerate(mts):
        w = f"{where}[{j}]"
        if not isinstance(mt, dict):
            problems.append(f"{w}: expected a table")
            continue
        kind = mt.pop("kind", None)
        if kind == "carry_on":
            _check_unknown(mt, w, problems)
            out.append(CarryOnSpec())
        elif kind == "evade":
            direction = _vec3(mt.pop("direction", None), problems, f"{w}.direction")
            offset = _number(mt, "target_offset", problems, w, required=True)
            speed = _number(mt, "speed", problems, w, required=True)
            _check_unknown(mt, w, problems)
            if offset is not None and speed is not None:
                spec = _build(
                    EvadeSpec, problems, w,
                    direction=direction, target_offset=offset, speed=speed,
                )
                if spec:
                    out.append(spec)
        else:
            problems.append(f"{w}.kind: expected carry_on | evade, got {kind!r}")
    return tuple(out) if out else None


def load_scenario(path) -> ScenarioConfig:
    text = Path(path).read_text()
    return parse_scenario(tomlcfg.loads(text))


def apply_overrides(data: dict, overrides: Sequence[str]) -> dict:
    """Apply key=value overrides with dotted paths (list indices allowed),
    e.g. filter.maneuver_time=0.0 or agents.0.v_cmd_max=3."""
    for item in overrides:
        key, sep, value_text = item.partition("=")
        if not sep:
            raise ConfigError([f"override {item!r}: expected key=value"])
        value, rest = tomlcfg._parse_value(value_text.strip(), 0)
        if rest.strip():
            raise ConfigError([f"override {item!r}: trailing content"])
        node = data
        parts = key.strip().split(".")
        for part in parts[:-1]:
            node = node[int(part)] if isinstance(node, list) else node.setdefault(part, {})
        last = parts[-1]
        if isinstance(node, list):
            node[int(last)] = value
        else:
            node[last] = value
    return data


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------

@dataclass
class TraceSet:
    """In-memory result of one run."""

    config: ScenarioConfig
    rows: list
    events: list
    step_seconds: list
    min_h_world: float

    def write(self, out_dir) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "trace.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(TRACE_COLUMNS)
            for row in self.rows:
                w.writerow([_fmt(v) for v in row])
        (out / "scenario.json").write_text(json.dumps(self.config.raw, indent=2, sort_keys=True))
        (out / "timing.json").write_text(
            json.dumps(_timing_stats(self.step_seconds), indent=2, sort_keys=True)
        )


def _fmt(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return repr(v)
    return v


def _timing_stats(step_seconds: list) -> dict:
    if not step_seconds:
        return {"steps": 0}
    ordered = sorted(step_seconds)
    return {
        "steps": len(ordered),
        "mean_ms": 1e3 * sum(ordered) / len(ordered),
        "p99_ms": 1e3 * ordered[min(len(ordered) - 1, math.ceil(0.99 * len(ordered)) - 1)],
        "max_ms": 1e3 * ordered[-1],
    }


def init_agents(cfg: ScenarioConfig) -> list:
    """Build the runtime agent records a run starts from."""
    agents = []
    for i, ac in enumerate(cfg.agents):
        x0 = ac.initial_state()
        cmd0 = clamp_command(ac.pilot.command_at(0.0, x0), ac.v_cmd_max)
        model = AgentModel(id=i, params=ac.drone, gains=ac.gains, policies=ac.maneuvers)
        agents.append(Agent(model=model, state=x0, fs=init_filter_state(ac.maneuvers, x0, cmd0)))
    return agents


def run_scenario(cfg: ScenarioConfig, measure_time: bool = True) -> TraceSet:
    """Execute the scenario; deterministic for a fixed config and seed."""
    world = cfg.world
    fc = cfg.filter
    n_ticks = int(round(cfg.duration / fc.period))
    rng = random.Random(cfg.seed)

    agents = init_agents(cfg)
    models = {a.model.id: a.model for a in agents}

    # fault state: last snapshot each receiver holds of each sender
    delay = cfg.faults.delay_ticks
    drop_p = cfg.faults.drop_probability
    faulty = drop_p > 0.0 or delay > 0
    history: list = []
    received: dict = {}

    h_env = world_kernel(world)
    rows = []
    events = []
    step_seconds = []
    clock = time.perf_counter if measure_time else None

    for k in range(n_ticks):
        t = k * fc.period
        snaps = {a.model.id: snapshot_of(a, k) for a in agents}
        if faulty:
            history.append(snaps)
            visible = history[max(0, len(history) - 1 - delay)]
            for a in agents:
                aid = a.model.id
                slot = received.setdefault(aid, {})
                for bid, snap in visible.items():
                    if bid == aid:
                        continue
                    if drop_p > 0.0 and rng.random() < drop_p and bid in slot:
                        continue
                    slot[bid] = snap
            co_lists = {
                aid: tuple(
                    CoAgentPlan(
                        state=s.state, maneuver=s.maneuver, phase=s.phase,
                        timing=fc.timing, params=models[bid].params, gains=models[bid].gains,
                    )
                    for bid, s in sorted(received[aid].items())
                )
                for aid in snaps
            }
        else:
            co_lists = {
                aid: co_plans(aid, list(snaps.values()), models, fc) for aid in snaps
            }

        pilot_cmds = {}
        for i, a in enumerate(agents):
            ac = cfg.agents[a.model.id]
            pilot_cmds[a.model.id] = clamp_command(
                ac.pilot.command_at(t, a.state), ac.v_cmd_max
            )

        new_fs = {}
        inputs = {}
        for a in sorted(agents, key=lambda a: a.model.id):
            aid = a.model.id
            others = [
                snaps[bid].state.p.as_tuple() for bid in sorted(snaps) if bid != aid
            ]
            h_now = h_env(a.state.p.x, a.state.p.y, a.state.p.z, others)
            t0 = clock() if clock else 0.0
            u, fs2, telem = filter_step(
                a.fs, a.state, t, pilot_cmds[aid], world, fc,
                a.model.params, a.model.gains, a.model.policies,
                co=co_lists[aid], agent_id=aid,
            )
            if clock:
                step_seconds.append(clock() - t0)
            new_fs[aid] = fs2
            inputs[aid] = u
            s = a.state
            rows.append((
                t, aid,
                s.p.x, s.p.y, s.p.z, s.q.w, s.q.x, s.q.y, s.q.z,
                s.v.x, s.v.y, s.v.z, s.omega.x, s.omega.y, s.omega.z,
                u.thrust, u.omega_des.x, u.omega_des.y, u.omega_des.z,
                h_now, telem.h_i, telem.lam, telem.phase, telem.maneuver_idx,
                telem.reset_flag, telem.switch_flag,
            ))
            if telem.reset_flag or telem.switch_flag:
                events.append({
                    "t": t, "agent_id": aid,
                    "kind": "switch" if telem.switch_flag else "reset",
                    "maneuver_idx": telem.maneuver_idx,
                })
        for a in agents:
            aid = a.model.id
            a.fs = new_fs[aid]
            a.state = integrate_step(a.state, inputs[aid], fc.period, a.model.params)

    min_h = min((r[19] for r in rows), default=math.inf)
    return TraceSet(config=cfg, rows=rows, events=events, step_seconds=step_seconds, min_h_world=min_h)


# ---------------------------------------------------------------------------
# Summary
# ---------------------------------------------------------------------------

def summarize(trace: TraceSet) -> dict:
    """Mins per constraint class, pairwise separation, authority statistics,
    event log with gaps, deadlock report, and filter wall-time stats."""
    cfg = trace.config
    world = cfg.world
    n_agents = len(cfg.agents)
    by_agent: dict = {i: [] for i in range(n_agents)}
    for r in trace.rows:
        by_agent[r[1]].append(r)

    box = world.geofence
    min_box = math.inf
    min_sphere = math.inf
    for r in trace.rows:
        p = Vec3(r[2], r[3], r[4])
        hb = min(
            box.half_extents.x ** 2 - (p.x - box.center.x) ** 2,
            box.half_extents.y ** 2 - (p.y - box.center.y) ** 2,
            box.half_extents.z ** 2 - (p.z - box.center.z) ** 2,
        )
        min_box = min(min_box, hb)
        for obs in world.obstacles:
            d = p - obs.center
            min_sphere = min(
                min_sphere, d.dot(d) - (obs.radius + world.agent_radius) ** 2
            )

    min_pair_h = math.inf
    min_pair_dist = math.inf
    if n_agents > 1:
        ticks = len(by_agent[0])
        for k in range(ticks):
            for i in range(n_agents):
                for j in range(i + 1, n_agents):
                    ri, rj = by_agent[i][k], by_agent[j][k]
                    dx, dy, dz = ri[2] - rj[2], ri[3] - rj[3], ri[4] - rj[4]
                    d2 = dx * dx + dy * dy + dz * dz
                    min_pair_h = min(min_pair_h, d2 - 4.0 * world.agent_radius ** 2)
                    min_pair_dist = min(min_pair_dist, math.sqrt(d2))

    lams = [r[21] for r in trace.rows]
    events = trace.events
    gaps: dict = {}
    for i in range(n_agents):
        ts = [e["t"] for e in events if e["agent_id"] == i]
        gaps[i] = [round(b - a, 9) for a, b in zip(ts, ts[1:])]

    deadlock = None
    times = sorted({r[0] for r in trace.rows})
    if times and times[-1] - times[0] >= 10.0:
        positions = {i: [Vec3(r[2], r[3], r[4]) for r in by_agent[i]] for i in by_agent}
        velocities = {i: [Vec3(r[9], r[10], r[11]) for r in by_agent[i]] for i in by_agent}
        commands = {
            i: [
                cfg.agents[i].pilot.command_at(r[0], DroneState(p=Vec3(r[2], r[3], r[4]))).v_des
                for r in by_agent[i]
            ]
            for i in by_agent
        }
        rep = deadlock_metric(times, positions, velocities, commands, world.v_stop)
        deadlock = {
            "window": rep.window,
            "max_speed": rep.max_speed,
            "progress": rep.progress,
            "deadlocked": rep.deadlocked,
        }

    out = {
        "agents": n_agents,
        "ticks": len(by_agent[0]) if n_agents else 0,
        "min_h_world": trace.min_h_world,
        "min_h_box": min_box,
        "lambda": {
            "mean": sum(lams) / len(lams) if lams else None,
            "min": min(lams) if lams else None,
        },
        "events": events,
        "event_gaps": gaps,
        "timing": _timing_stats(trace.step_seconds),
    }
    if world.obstacles:
        out["min_h_obstacle"] = min_sphere
    if n_agents > 1:
        out["min_h_pairwise"] = min_pair_h
        out["min_pair_distance"] = min_pair_dist
    if deadlock is not None:
        out["deadlock"] = deadlock
    if cfg.safety_min_h is not None:
        out["safety_bound"] = cfg.safety_min_h
        out["safety_ok"] = trace.min_h_world >= cfg.safety_min_h
    return out


# ---------------------------------------------------------------------------
# Builtins
# ---------------------------------------------------------------------------

def builtin_names() -> list:
    files = resources.files("tbcsim").joinpath("builtins")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".toml"))


def builtin_text(name: str) -> str:
    path = resources.files("tbcsim").joinpath("builtins").joinpath(f"{name}.toml")
    if not path.is_file():
        raise KeyError(f"unknown builtin scenario {name!r} (have: {', '.join(builtin_names())})")
    return path.read_text()


def load_builtin(name: str, overrides: Sequence[str] = ()) -> ScenarioConfig:
    data = tomlcfg.loads(builtin_text(name))
    if overrides:
        data = apply_overrides(data, overrides)
    return parse_scenario(data)
