"""Deterministic tick-based execution over a 2D kinematic world.

Node lifecycle is Idle -> Running -> Succeeded. A node activates when all
of its predecessors have succeeded (one suffices for a one-finished
join); join nodes succeed the moment they activate, the end node acts as
a join-all-finished node and terminates the run. Per tick:

  1. running condition nodes are evaluated against the world at time t,
  2. running maneuvers advance their actor by dt (actors driven by no
     running maneuver hold speed and heading),
  3. completions cascade activations (events stamped t),
  4. time advances to t + dt and the world is sampled,
  5. any bounding-box overlap ends the run as a Collision,
  6. end-node activation ends it as Completed, exceeding the time budget
     as Timeout.

Everything is pure bookkeeping over floats — no randomness — so a trace
is byte-reproducible for identical graph and tick config. Losing branches
of a one-finished join freeze: their nodes stay Running but are never
evaluated again once the run ends; mid-run they keep updating, which
matches behavior-tree practice of parallel siblings running until the
composite resolves.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .concretize import classify_level
from .errors import InvalidConfig, InvalidScenario, LevelError, OutOfRange, ScenarioError
from .model import (
    AbstractionLevel,
    ActionNode,
    JoinPolicy,
    NodeKind,
    ScenarioGraph,
)
from .modules import effective_graph
from .params import Scalar
from .registry import DEFAULT_REGISTRY, Registry
from .validation import validate

_EPS = 1e-9

IDLE = "Idle"
RUNNING = "Running"
SUCCEEDED = "Succeeded"

COMPLETED = "Completed"
COLLISION = "Collision"
TIMEOUT = "Timeout"


@dataclass(frozen=True)
class TickConfig:
    dt: float = 0.05
    max_time: float = 60.0
    seed: int = 0

    def to_json(self) -> dict:
        return {"dt": self.dt, "max_time": self.max_time, "seed": self.seed}


@dataclass
class ActorState:
    x: float
    y: float
    heading: float
    speed: float
    accel: float = 0.0
    half_length: float = 0.5
    half_width: float = 0.5

    def advance(self, dt: float) -> None:
        self.x += self.speed * math.cos(self.heading) * dt
        self.y += self.speed * math.sin(self.heading) * dt

    def snapshot(self) -> dict:
        return {
            "x": self.x, "y": self.y, "heading": self.heading,
            "speed": self.speed, "accel": self.accel,
        }


@dataclass(frozen=True)
class NodeEvent:
    time: float
    node_id: str
    state: str

    def to_json(self) -> dict:
        return {"time": self.time, "node": self.node_id, "state": self.state}


@dataclass(frozen=True)
class Outcome:
    kind: str
    pair: Optional[Tuple[str, str]] = None
    time: Optional[float] = None
    completion_time: Optional[float] = None
    min_distance: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "pair": list(self.pair) if self.pair else None,
            "time": self.time,
            "completion_time": self.completion_time,
            "min_distance": self.min_distance,
        }


@dataclass
class Trace:
    config: TickConfig
    events: List[NodeEvent] = field(default_factory=list)
    samples: List[tuple] = field(default_factory=list)  # (time, {actor: state dict})
    outcome: Optional[Outcome] = None

    def end_time(self) -> float:
        return self.samples[-1][0] if self.samples else 0.0

    def to_json(self, stride: int = 1) -> dict:
        if stride < 1:
            raise InvalidConfig("stride must be >= 1")
        kept = self.samples[::stride]
        if self.samples and self.samples[-1] is not kept[-1]:
            kept.append(self.samples[-1])
        return {
            "tick_config": self.config.to_json(),
            "events": [e.to_json() for e in self.events],
            "states": [{"time": t, "actors": actors} for t, actors in kept],
            "outcome": self.outcome.to_json() if self.outcome else None,
        }

    def to_text(self, stride: int = 1) -> str:
        return json.dumps(self.to_json(stride), indent=2) + "\n"


# -- maneuver dynamics -------------------------------------------------------
#
# Each update is incremental and dt-scalable: state, params, a private
# memory dict, dt, and the category limits in; True out when the maneuver
# completed during this tick.


def _update_accelerate(world, actor, params, mem, dt, limits):
    rate = params["throttle"] * limits.max_acceleration
    actor.accel = rate
    actor.speed = min(actor.speed + rate * dt, params["target_velocity"])
    actor.advance(dt)
    return actor.speed >= params["target_velocity"] - _EPS


def _update_decelerate(world, actor, params, mem, dt, limits):
    rate = params["brake"] * limits.max_acceleration
    actor.accel = -rate
    actor.speed = max(actor.speed - rate * dt, params["target_velocity"], 0.0)
    actor.advance(dt)
    return actor.speed <= params["target_velocity"] + _EPS


def _update_keep_velocity(world, actor, params, mem, dt, limits):
    target = params["velocity"]
    rate = limits.max_acceleration
    if actor.speed < target:
        actor.speed = min(actor.speed + rate * dt, target)
        actor.accel = rate
    elif actor.speed > target:
        actor.speed = max(actor.speed - rate * dt, target)
        actor.accel = -rate
    else:
        actor.accel = 0.0
    actor.advance(dt)
    mem["elapsed"] = mem.get("elapsed", 0.0) + dt
    return mem["elapsed"] >= params["duration"] - _EPS


def _update_drive_distance(world, actor, params, mem, dt, limits):
    actor.accel = 0.0
    actor.advance(dt)
    mem["travelled"] = mem.get("travelled", 0.0) + actor.speed * dt
    return mem["travelled"] >= params["distance"] - _EPS


def _update_follow_vehicle(world, actor, params, mem, dt, limits):
    target = world[mem["target"]]
    rate = limits.max_acceleration
    if actor.speed < target.speed:
        actor.speed = min(actor.speed + rate * dt, target.speed)
        actor.accel = rate
    else:
        actor.speed = max(actor.speed - rate * dt, target.speed)
        actor.accel = -rate
    actor.advance(dt)
    mem["elapsed"] = mem.get("elapsed", 0.0) + dt
    return mem["elapsed"] >= params["duration"] - _EPS


def _update_stop(world, actor, params, mem, dt, limits):
    rate = params["deceleration"]
    actor.accel = -rate
    actor.speed = max(actor.speed - rate * dt, 0.0)
    actor.advance(dt)
    return actor.speed <= _EPS


def _lane_change(side):
    def update(world, actor, params, mem, dt, limits):
        if "heading0" not in mem:
            mem["heading0"] = actor.heading
            mem["elapsed"] = 0.0
            mem["offset"] = 0.0
        duration = params["duration"]
        mem["elapsed"] = min(mem["elapsed"] + dt, duration)
        progress = mem["elapsed"] / duration if duration > 0 else 1.0
        # smooth S-profile for the lateral offset
        offset = params["lateral_offset"] * (1.0 - math.cos(math.pi * progress)) / 2.0
        delta = offset - mem["offset"]
        mem["offset"] = offset
        heading0 = mem["heading0"]
        actor.x += actor.speed * math.cos(heading0) * dt + side * delta * math.cos(heading0 + math.pi / 2)
        actor.y += actor.speed * math.sin(heading0) * dt + side * delta * math.sin(heading0 + math.pi / 2)
        actor.accel = 0.0
        return mem["elapsed"] >= duration - _EPS
    return update


def _turn(side):
    def update(world, actor, params, mem, dt, limits):
        omega = side * actor.speed / params["turn_radius"]
        actor.heading += omega * dt
        actor.accel = 0.0
        actor.advance(dt)
        mem["turned"] = mem.get("turned", 0.0) + abs(omega) * dt
        return mem["turned"] >= params["heading_change"] - _EPS
    return update


MANEUVER_DYNAMICS = {
    "Accelerate": _update_accelerate,
    "Decelerate": _update_decelerate,
    "KeepVelocity": _update_keep_velocity,
    "DriveDistance": _update_drive_distance,
    "FollowVehicle": _update_follow_vehicle,
    "Stop": _update_stop,
    "LaneChangeLeft": _lane_change(+1.0),
    "LaneChangeRight": _lane_change(-1.0),
    "TurnLeft": _turn(+1.0),
    "TurnRight": _turn(-1.0),
}


def _condition_holds(action: ActionNode, params, world, time) -> bool:
    ref = world[action.ref_actor]
    if action.action_type == "InLocationRadius":
        return math.hypot(ref.x - params["x"], ref.y - params["y"]) <= params["radius"] + _EPS
    if action.action_type == "InVehicleRadius":
        target = world[action.target_actor]
        return math.hypot(ref.x - target.x, ref.y - target.y) <= params["radius"] + _EPS
    if action.action_type == "TimeElapsed":
        return time >= params["duration"] - _EPS
    if action.action_type == "SpeedReached":
        return ref.speed >= params["speed"] - _EPS
    raise InvalidScenario(f"no predicate for condition {action.action_type!r}")


def _numeric(value, what: str) -> float:
    if isinstance(value, Scalar) and isinstance(value.value, (int, float)):
        return float(value.value)
    raise InvalidScenario(f"{what} is not a numeric scalar")


def _boxes_overlap(a: ActorState, b: ActorState) -> bool:
    return (abs(a.x - b.x) < a.half_length + b.half_length
            and abs(a.y - b.y) < a.half_width + b.half_width)


class _Run:
    """One execution; keeps the loop readable without threading state through."""

    def __init__(self, graph: ScenarioGraph, config: TickConfig, registry: Registry):
        self.graph = graph
        self.config = config
        self.registry = registry
        self.states: Dict[str, str] = {n.id: IDLE for n in graph.nodes}
        self.preds: Dict[str, list] = {n.id: graph.predecessors(n.id) for n in graph.nodes}
        self.memory: Dict[str, dict] = {}
        self.frozen: set = set()
        self.trace = Trace(config)
        self.end_done: Optional[float] = None
        self.world: Dict[str, ActorState] = {}
        for actor in graph.actors:
            limits = registry.limits(actor.category.value)
            self.world[actor.id] = ActorState(
                x=_numeric(actor.start_pose.x, f"start_pose.x of {actor.id!r}"),
                y=_numeric(actor.start_pose.y, f"start_pose.y of {actor.id!r}"),
                heading=_numeric(actor.start_pose.heading, f"start_pose.heading of {actor.id!r}"),
                speed=_numeric(actor.start_speed, f"start_speed of {actor.id!r}"),
                half_length=limits.half_length,
                half_width=limits.half_width,
            )

    def _log(self, time: float, node_id: str, state: str) -> None:
        self.states[node_id] = state
        self.trace.events.append(NodeEvent(time, node_id, state))

    def _params(self, node) -> dict:
        values = {}
        for spec in self.registry.action(node.payload.action_type).params:
            values[spec.name] = _numeric(
                node.payload.params[spec.name], f"{spec.name} of {node.id!r}"
            )
        return values

    def _activation_ready(self, node) -> bool:
        done = [self.states[p] == SUCCEEDED for p in self.preds[node.id]]
        if node.kind is NodeKind.Join and node.payload.policy is JoinPolicy.OneFinished:
            return any(done)
        return all(done)

    def _freeze_losers(self, join_id: str) -> None:
        """Abandon the losing branches of a finished one-finished join.

        A node is on a losing branch when it has not succeeded and its
        only way to the end node runs through the join. Frozen nodes stop
        updating, stop being evaluated, and never activate; their actors
        fall back to holding speed and heading.
        """
        reach_end = {self.graph.end().id}
        stack = [self.graph.end().id]
        while stack:
            for pred in self.preds[stack.pop()]:
                if pred != join_id and pred not in reach_end:
                    reach_end.add(pred)
                    stack.append(pred)
        feeds_join = set()
        stack = list(self.preds[join_id])
        while stack:
            current = stack.pop()
            if current not in feeds_join:
                feeds_join.add(current)
                stack.extend(self.preds[current])
        for node_id in feeds_join:
            if self.states[node_id] != SUCCEEDED and node_id not in reach_end:
                self.frozen.add(node_id)

    def _cascade(self, time: float) -> None:
        """Activate everything whose gate opened; joins succeed instantly."""
        changed = True
        while changed:
            changed = False
            for node in self.graph.nodes:
                if self.states[node.id] != IDLE or node.id in self.frozen \
                        or node.kind is NodeKind.RootNode:
                    continue
                if not self._activation_ready(node):
                    continue
                self._log(time, node.id, RUNNING)
                changed = True
                if node.kind is NodeKind.Join:
                    self._log(time, node.id, SUCCEEDED)
                    if node.payload.policy is JoinPolicy.OneFinished:
                        self._freeze_losers(node.id)
                elif node.kind is NodeKind.EndNode:
                    self._log(time, node.id, SUCCEEDED)
                    self.end_done = time
                elif node.kind is NodeKind.Maneuver:
                    mem = self.memory.setdefault(node.id, {})
                    if node.payload.action_type == "FollowVehicle":
                        mem["target"] = node.payload.target_actor

    def _sample(self, time: float) -> None:
        self.trace.samples.append(
            (time, {actor_id: state.snapshot() for actor_id, state in self.world.items()})
        )

    def _min_distance(self) -> Optional[float]:
        ids = list(self.world)
        best = None
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                dist = math.hypot(self.world[a].x - self.world[b].x,
                                  self.world[a].y - self.world[b].y)
                if best is None or dist < best:
                    best = dist
        return best

    def _collision_pair(self) -> Optional[Tuple[str, str]]:
        ids = list(self.world)
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                if _boxes_overlap(self.world[a], self.world[b]):
                    return (a, b)
        return None

    def execute(self) -> Trace:
        dt = self.config.dt
        tick = 0
        time = 0.0
        min_distance = self._min_distance()

        self._log(0.0, self.graph.root().id, RUNNING)
        self._log(0.0, self.graph.root().id, SUCCEEDED)
        self._cascade(0.0)
        self._sample(0.0)

        pair = self._collision_pair()
        outcome_args = None
        if pair is not None:
            outcome_args = (COLLISION, pair, 0.0)
        elif self.end_done is not None:
            outcome_args = (COMPLETED, None, None)

        while outcome_args is None:
            for node in self.graph.nodes:
                if node.kind is NodeKind.Condition and self.states[node.id] == RUNNING \
                        and node.id not in self.frozen:
                    if _condition_holds(node.payload, self._params(node), self.world, time):
                        self._log(time, node.id, SUCCEEDED)

            driven = set()
            for node in self.graph.nodes:
                if node.kind is NodeKind.Maneuver and self.states[node.id] == RUNNING \
                        and node.id not in self.frozen:
                    payload = node.payload
                    actor = self.world[payload.ref_actor]
                    limits = self.registry.limits(
                        self.graph.actor(payload.ref_actor).category.value
                    )
                    update = MANEUVER_DYNAMICS[payload.action_type]
                    finished = update(self.world, actor, self._params(node),
                                      self.memory.setdefault(node.id, {}), dt, limits)
                    driven.add(payload.ref_actor)
                    if finished:
                        self._log(time, node.id, SUCCEEDED)
            for actor_id, actor in self.world.items():
                if actor_id not in driven:
                    actor.accel = 0.0
                    actor.advance(dt)

            self._cascade(time)

            tick += 1
            time = tick * dt  # multiplicative, keeps timestamps drift-free
            self._sample(time)
            dist = self._min_distance()
            if dist is not None and (min_distance is None or dist < min_distance):
                min_distance = dist

            pair = self._collision_pair()
            if pair is not None:
                outcome_args = (COLLISION, pair, time)
            elif self.end_done is not None:
                outcome_args = (COMPLETED, None, None)
            elif time > self.config.max_time + _EPS:
                outcome_args = (TIMEOUT, None, None)

        kind, pair, collision_time = outcome_args
        self.trace.outcome = Outcome(
            kind=kind,
            pair=pair,
            time=collision_time,
            completion_time=self.end_done if kind == COMPLETED else None,
            min_distance=min_distance,
        )
        return self.trace


def run(
    graph: ScenarioGraph,
    config: TickConfig = TickConfig(),
    registry: Registry = DEFAULT_REGISTRY,
) -> Trace:
    """Execute a concrete, valid scenario and return its trace."""
    if config.dt <= 0 or config.max_time <= 0:
        raise InvalidConfig("dt and max_time must be positive")
    flat = effective_graph(graph)
    if classify_level(flat, registry) is not AbstractionLevel.Concrete:
        raise LevelError("execution requires a concrete scenario")
    report = validate(flat, registry)
    if not report.is_valid:
        rules = sorted({f.rule_id for f in report.errors()})
        raise InvalidScenario(f"scenario has validation errors: {', '.join(rules)}")
    return _Run(flat, config, registry).execute()


def outcome(trace: Trace) -> Outcome:
    """Summary of a finished run."""
    if trace.outcome is None:
        raise ScenarioError("trace has no outcome")
    return trace.outcome


def replay_states(trace: Trace, time: float) -> Dict[str, dict]:
    """World state at an arbitrary time, linearly interpolated between samples."""
    if not trace.samples:
        raise OutOfRange("trace has no samples")
    start, end = trace.samples[0][0], trace.samples[-1][0]
    if time < start - _EPS or time > end + _EPS:
        raise OutOfRange(f"time {time} outside trace range {start}..{end}")
    samples = trace.samples
    lo, hi = 0, len(samples) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if samples[mid][0] <= time:
            lo = mid
        else:
            hi = mid
    t0, before = samples[lo]
    t1, after = samples[hi]
    if time <= t0 + _EPS or t1 <= t0:
        return {k: dict(v) for k, v in before.items()}
    if time >= t1 - _EPS:
        return {k: dict(v) for k, v in after.items()}
    alpha = (time - t0) / (t1 - t0)
    blended = {}
    for actor_id, state0 in before.items():
        state1 = after[actor_id]
        heading_delta = math.remainder(state1["heading"] - state0["heading"], math.tau)
        blended[actor_id] = {
            "x": state0["x"] + alpha * (state1["x"] - state0["x"]),
            "y": state0["y"] + alpha * (state1["y"] - state0["y"]),
            "heading": state0["heading"] + alpha * heading_delta,
            "speed": state0["speed"] + alpha * (state1["speed"] - state0["speed"]),
            "accel": state0["accel"] + alpha * (state1["accel"] - state0["accel"]),
        }
    return blended
