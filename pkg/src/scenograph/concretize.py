"""Abstraction-level classification and logical-to-concrete generation.

A concretization plan lists the free parameters (ranges and discrete
sets) of a scenario in stable (owner id, key) order. Enumeration walks
the Cartesian grid in mixed-radix order with the last parameter varying
fastest; sampling draws one grid point per parameter from a seeded
Mersenne Twister (documented as generator "mt19937-python/1", frozen for
format_version 1). Both operate on the flattened view and return
module-free concrete graphs.
"""

from __future__ import annotations

import copy
import random
from dataclasses import dataclass
from typing import List, Tuple

from .errors import InvalidArgument, LevelError, MissingDefault, OutOfRange
from .model import AbstractionLevel, ActionNode, ScenarioGraph
from .modules import effective_graph
from .params import UNSET, DiscreteSet, Range, Scalar, Unset
from .registry import DEFAULT_REGISTRY, Registry
from .validation import _param_slots

SAMPLER_NAME = "mt19937-python/1"


@dataclass(frozen=True)
class FreeParam:
    node_id: str
    key: str
    value: object  # Range | DiscreteSet

    def cardinality(self) -> int:
        return self.value.cardinality()

    def point(self, index: int) -> Scalar:
        if isinstance(self.value, Range):
            return Scalar(self.value.point(index), self.value.unit)
        return Scalar(self.value.values[index], self.value.unit)


@dataclass(frozen=True)
class ConcretizationPlan:
    free_params: Tuple[FreeParam, ...]
    total_count: int

    def to_json(self) -> dict:
        from .params import param_to_json

        return {
            "free_params": [
                {
                    "node_id": fp.node_id,
                    "key": fp.key,
                    "value": param_to_json(fp.value),
                    "cardinality": fp.cardinality(),
                }
                for fp in self.free_params
            ],
            "total_count": self.total_count,
        }


def classify_level(graph: ScenarioGraph, registry: Registry = DEFAULT_REGISTRY) -> AbstractionLevel:
    """Highest level whose completeness rule the graph content satisfies."""
    flat = effective_graph(graph)
    level = AbstractionLevel.Concrete
    for _, _, value in _param_slots(flat, registry):
        if isinstance(value, Unset):
            return AbstractionLevel.Functional
        if not isinstance(value, Scalar):
            level = AbstractionLevel.Logical
    return level


def apply_defaults(graph: ScenarioGraph, registry: Registry = DEFAULT_REGISTRY) -> ScenarioGraph:
    """Fill every unset required parameter with its registry default.

    Set parameters are untouched. Actor start pose/speed default to the
    origin at standstill; unset environment entries are dropped (an unset
    weather key carries no information). Raises MissingDefault where the
    registry deliberately ships no default.
    """
    result = copy.deepcopy(graph)
    for node in list(result.nodes) + [el for m in result.module_defs for el in m.elements]:
        payload = node.payload
        if not isinstance(payload, ActionNode) or not registry.has_action(payload.action_type):
            continue
        action = registry.action(payload.action_type)
        for spec in action.params:
            if isinstance(payload.params.get(spec.name, UNSET), Unset):
                if spec.default is None:
                    raise MissingDefault(
                        f"{action.name}.{spec.name} has no registry default (node {node.id!r})"
                    )
                payload.params[spec.name] = Scalar(spec.default, spec.unit)
    for actor in result.actors:
        pose = actor.start_pose
        if isinstance(pose.x, Unset):
            pose.x = Scalar(0.0, "m")
        if isinstance(pose.y, Unset):
            pose.y = Scalar(0.0, "m")
        if isinstance(pose.heading, Unset):
            pose.heading = Scalar(0.0, "rad")
        if isinstance(actor.start_speed, Unset):
            actor.start_speed = Scalar(0.0, "m/s")
    result.environment = {
        key: value for key, value in result.environment.items()
        if not isinstance(value, Unset)
    }
    return result


def plan(graph: ScenarioGraph, registry: Registry = DEFAULT_REGISTRY) -> ConcretizationPlan:
    """Deterministic enumeration plan over the graph's free parameters."""
    flat = effective_graph(graph)
    level = classify_level(flat, registry)
    if level is AbstractionLevel.Functional:
        raise LevelError("cannot plan a functional scenario; apply defaults or set parameters")
    free: List[FreeParam] = []
    for owner, key, value in _param_slots(flat, registry):
        if isinstance(value, (Range, DiscreteSet)):
            free.append(FreeParam(owner, key, value))
    free.sort(key=lambda fp: (fp.node_id, fp.key))
    total = 1
    for fp in free:
        total *= fp.cardinality()
    return ConcretizationPlan(tuple(free), total)


def _apply_assignment(flat: ScenarioGraph, plan_: ConcretizationPlan, digits) -> ScenarioGraph:
    result = copy.deepcopy(flat)
    for fp, digit in zip(plan_.free_params, digits):
        value = fp.point(digit)
        if fp.node_id == "env":
            result.environment[fp.key] = value
        elif fp.node_id.startswith("actor:"):
            actor = result.actor(fp.node_id[len("actor:"):])
            if fp.key == "start_speed":
                actor.start_speed = value
            elif fp.key == "start_pose.x":
                actor.start_pose.x = value
            elif fp.key == "start_pose.y":
                actor.start_pose.y = value
            elif fp.key == "start_pose.heading":
                actor.start_pose.heading = value
            else:
                raise InvalidArgument(f"unknown actor slot {fp.key!r}")
        else:
            result.node(fp.node_id).payload.params[fp.key] = value
    result.abstraction_level = AbstractionLevel.Concrete
    return result


def enumerate_variant(
    graph: ScenarioGraph,
    plan_: ConcretizationPlan,
    index: int,
    registry: Registry = DEFAULT_REGISTRY,
) -> ScenarioGraph:
    """Bijective index -> assignment in mixed-radix order (last param fastest)."""
    if not 0 <= index < plan_.total_count:
        raise OutOfRange(f"index {index} outside 0..{plan_.total_count - 1}")
    digits = []
    remaining = index
    for fp in reversed(plan_.free_params):
        card = fp.cardinality()
        digits.append(remaining % card)
        remaining //= card
    digits.reverse()
    return _apply_assignment(effective_graph(graph), plan_, digits)


def sample(
    graph: ScenarioGraph,
    plan_: ConcretizationPlan,
    seed: int,
    registry: Registry = DEFAULT_REGISTRY,
) -> ScenarioGraph:
    """Uniform draw over grid points, reproducible for a given seed."""
    rng = random.Random(seed)
    digits = [rng.randrange(fp.cardinality()) for fp in plan_.free_params]
    return _apply_assignment(effective_graph(graph), plan_, digits)
