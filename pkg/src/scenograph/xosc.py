"""OpenSCENARIO-1.0-shaped XML export of concrete scenarios.

Mapping contract: every actor becomes an Entity with its start pose and
speed as Init actions; every maneuver node becomes exactly one Event (in
per-actor ManeuverGroups, chain order); every condition node becomes the
start-trigger condition of the event(s) it gates. Predecessor completion
is tracked with storyboard-element-state conditions; an all-finished join
folds into one ConditionGroup (AND), a one-finished join fans out into
several groups (OR) — that is exactly OpenSCENARIO's trigger algebra.
The end node becomes the storyboard StopTrigger.

Maneuvers with a native counterpart map onto standard actions
(SpeedAction with the executor's accel rate, LongitudinalDistanceAction,
LaneChangeAction). DriveDistance, KeepVelocity, and the turn maneuvers
describe motion relative to the actor's runtime pose, which OpenSCENARIO
can only express through road coordinates or pre-computed trajectories;
they are emitted as CustomCommandAction payloads (the standard's
extension point) carrying the action name and SI parameters.

Output is byte-deterministic: fixed attribute order, fixed header date,
two-space indent, LF line endings.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .concretize import classify_level
from .errors import InvalidScenario, LevelError, UnsupportedAction
from .model import (
    AbstractionLevel,
    ActionNode,
    Actor,
    ActorCategory,
    JoinPolicy,
    NodeKind,
    ScenarioGraph,
)
from .modules import effective_graph
from .registry import DEFAULT_REGISTRY, Registry
from .validation import validate

HEADER_DATE = "2020-03-01T00:00:00"
AUTHOR = "scenograph"

CATALOG_KINDS = (
    "Vehicle", "Controller", "Pedestrian", "MiscObject",
    "Environment", "Maneuver", "Trajectory", "Route",
)


@dataclass(frozen=True)
class ExportOptions:
    catalog_locations: Tuple[Tuple[str, str], ...] = ()
    parameterize: Tuple[str, ...] = ()  # "node_id:param" entries

    @staticmethod
    def parse_catalog_spec(spec: str) -> Tuple[Tuple[str, str], ...]:
        """Parse a CLI value like "Vehicle=../catalogs,Pedestrian=./peds"."""
        pairs = []
        for chunk in filter(None, (part.strip() for part in spec.split(","))):
            kind, _, path = chunk.partition("=")
            if not path or kind not in CATALOG_KINDS:
                raise InvalidScenario(
                    f"bad catalog location {chunk!r}; expected Kind=path with kind in "
                    f"{', '.join(CATALOG_KINDS)}"
                )
            pairs.append((kind, path))
        return tuple(pairs)


@dataclass
class XoscDocument:
    text: str

    @property
    def tree(self) -> ET.Element:
        return ET.fromstring(self.text)


@dataclass
class StructureReport:
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_json(self) -> dict:
        return {"ok": self.ok, "problems": list(self.problems)}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


_DIMENSIONS = {
    # width, length, height per actor category
    ActorCategory.Pedestrian: (0.5, 0.5, 1.8),
    ActorCategory.TwoWheeler: (0.6, 1.8, 1.5),
    ActorCategory.FourWheeler: (1.9, 4.5, 1.5),
}


class _Exporter:
    def __init__(self, graph: ScenarioGraph, options: ExportOptions, registry: Registry):
        self.graph = graph
        self.options = options
        self.registry = registry
        self.parameterized: Dict[Tuple[str, str], str] = {}
        for entry in options.parameterize:
            node_id, _, key = entry.partition(":")
            self.parameterized[(node_id, key)] = f"{node_id}_{key}".replace(".", "_")

    # -- small helpers ---------------------------------------------------

    def _value(self, node_id: str, key: str) -> str:
        node = self.graph.node(node_id)
        raw = node.payload.params[key].value
        name = self.parameterized.get((node_id, key))
        if name is not None:
            return f"${name}"
        return _fmt(raw)

    def _raw(self, node_id: str, key: str):
        return self.graph.node(node_id).payload.params[key].value

    def _limits(self, actor_id: str):
        return self.registry.limits(self.graph.actor(actor_id).category.value)

    # -- document skeleton ------------------------------------------------

    def build(self) -> ET.Element:
        root = ET.Element("OpenSCENARIO")
        ET.SubElement(root, "FileHeader", {
            "revMajor": "1",
            "revMinor": "0",
            "date": HEADER_DATE,
            "description": f"Scenario {self.graph.name}",
            "author": AUTHOR,
        })
        declarations = ET.SubElement(root, "ParameterDeclarations")
        for (node_id, key), name in sorted(self.parameterized.items()):
            ET.SubElement(declarations, "ParameterDeclaration", {
                "name": name,
                "parameterType": "double",
                "value": _fmt(self._raw(node_id, key)),
            })
        catalogs = ET.SubElement(root, "CatalogLocations")
        for kind, path in self.options.catalog_locations:
            holder = ET.SubElement(catalogs, f"{kind}Catalog")
            ET.SubElement(holder, "Directory", {"path": path})
        road = ET.SubElement(root, "RoadNetwork")
        ET.SubElement(road, "LogicFile", {"filepath": self.graph.map_name})
        root.append(self._entities())
        root.append(self._storyboard())
        return root

    def _entities(self) -> ET.Element:
        entities = ET.Element("Entities")
        for actor in self.graph.actors:
            obj = ET.SubElement(entities, "ScenarioObject", {"name": actor.id})
            if actor.category is ActorCategory.Pedestrian:
                obj.append(self._pedestrian(actor))
            else:
                obj.append(self._vehicle(actor))
        return entities

    def _bounding_box(self, actor: Actor) -> ET.Element:
        width, length, height = _DIMENSIONS[actor.category]
        box = ET.Element("BoundingBox")
        ET.SubElement(box, "Center", {"x": "0", "y": "0", "z": _fmt(height / 2)})
        ET.SubElement(box, "Dimensions", {
            "width": _fmt(width), "length": _fmt(length), "height": _fmt(height),
        })
        return box

    def _vehicle(self, actor: Actor) -> ET.Element:
        limits = self.registry.limits(actor.category.value)
        category = "car" if actor.category is ActorCategory.FourWheeler else "bicycle"
        vehicle = ET.Element("Vehicle", {
            "name": actor.model or actor.name,
            "vehicleCategory": category,
        })
        vehicle.append(self._bounding_box(actor))
        ET.SubElement(vehicle, "Performance", {
            "maxSpeed": _fmt(limits.max_speed),
            "maxAcceleration": _fmt(limits.max_acceleration),
            "maxDeceleration": _fmt(limits.max_acceleration),
        })
        axles = ET.SubElement(vehicle, "Axles")
        length = _DIMENSIONS[actor.category][1]
        track = _DIMENSIONS[actor.category][0] * 0.9
        ET.SubElement(axles, "FrontAxle", {
            "maxSteering": "0.5", "wheelDiameter": "0.6",
            "trackWidth": _fmt(round(track, 3)), "positionX": _fmt(round(length * 0.7, 3)),
            "positionZ": "0.3",
        })
        ET.SubElement(axles, "RearAxle", {
            "maxSteering": "0.0", "wheelDiameter": "0.6",
            "trackWidth": _fmt(round(track, 3)), "positionX": "0.0", "positionZ": "0.3",
        })
        ET.SubElement(vehicle, "Properties")
        return vehicle

    def _pedestrian(self, actor: Actor) -> ET.Element:
        pedestrian = ET.Element("Pedestrian", {
            "model": actor.model or actor.name,
            "mass": "75.0",
            "name": actor.model or actor.name,
            "pedestrianCategory": "pedestrian",
        })
        pedestrian.append(self._bounding_box(actor))
        ET.SubElement(pedestrian, "Properties")
        return pedestrian

    def _storyboard(self) -> ET.Element:
        storyboard = ET.Element("Storyboard")
        storyboard.append(self._init())
        story = ET.SubElement(storyboard, "Story", {"name": "MainStory"})
        act = ET.SubElement(story, "Act", {"name": "MainAct"})
        for group in self._maneuver_groups():
            act.append(group)
        act_start = ET.SubElement(act, "StartTrigger")
        group = ET.SubElement(act_start, "ConditionGroup")
        group.append(self._simulation_time_condition("act_start"))
        stop = ET.SubElement(storyboard, "StopTrigger")
        for group_conditions in self._trigger_groups(self.graph.end().id):
            holder = ET.SubElement(stop, "ConditionGroup")
            for condition in group_conditions:
                holder.append(condition)
        return storyboard

    def _init(self) -> ET.Element:
        init = ET.Element("Init")
        actions = ET.SubElement(init, "Actions")
        for actor in self.graph.actors:
            private = ET.SubElement(actions, "Private", {"entityRef": actor.id})
            teleport = ET.SubElement(private, "PrivateAction")
            tele_action = ET.SubElement(teleport, "TeleportAction")
            position = ET.SubElement(tele_action, "Position")
            ET.SubElement(position, "WorldPosition", {
                "x": _fmt(actor.start_pose.x.value),
                "y": _fmt(actor.start_pose.y.value),
                "z": "0",
                "h": _fmt(actor.start_pose.heading.value),
            })
            speed = ET.SubElement(private, "PrivateAction")
            speed.append(self._speed_action("step", "0", _fmt(actor.start_speed.value)))
        return init

    def _speed_action(self, shape: str, dynamics_value: str, target: str) -> ET.Element:
        longitudinal = ET.Element("LongitudinalAction")
        action = ET.SubElement(longitudinal, "SpeedAction")
        dimension = "time" if shape == "step" else "rate"
        ET.SubElement(action, "SpeedActionDynamics", {
            "dynamicsShape": shape,
            "value": dynamics_value,
            "dynamicsDimension": dimension,
        })
        target_el = ET.SubElement(action, "SpeedActionTarget")
        ET.SubElement(target_el, "AbsoluteTargetSpeed", {"value": target})
        return longitudinal

    # -- story content -----------------------------------------------------

    def _topological_order(self) -> List[str]:
        order: List[str] = []
        pending = {n.id: len(self.graph.predecessors(n.id)) for n in self.graph.nodes}
        ready = [n.id for n in self.graph.nodes if pending[n.id] == 0]
        while ready:
            current = ready.pop(0)
            order.append(current)
            for successor in self.graph.successors(current):
                pending[successor] -= 1
                if pending[successor] == 0:
                    ready.append(successor)
            ready.sort(key=lambda node_id: [n.id for n in self.graph.nodes].index(node_id))
        return order

    def _ancestors(self, node_id: str) -> set:
        seen = set()
        stack = list(self.graph.predecessors(node_id))
        while stack:
            current = stack.pop()
            if current not in seen:
                seen.add(current)
                stack.extend(self.graph.predecessors(current))
        return seen

    def _maneuver_groups(self) -> List[ET.Element]:
        topo = self._topological_order()
        groups: List[ET.Element] = []
        for actor in self.graph.actors:
            chains: List[List[str]] = []
            for node_id in topo:
                node = self.graph.node(node_id)
                if node.kind is not NodeKind.Maneuver or node.payload.ref_actor != actor.id:
                    continue
                if chains and chains[-1][-1] in self._ancestors(node_id):
                    chains[-1].append(node_id)
                else:
                    chains.append([node_id])
            for index, chain in enumerate(chains, start=1):
                group = ET.Element("ManeuverGroup", {
                    "maximumExecutionCount": "1",
                    "name": f"mg_{actor.id}_{index}",
                })
                actors = ET.SubElement(group, "Actors", {"selectTriggeringEntities": "false"})
                ET.SubElement(actors, "EntityRef", {"entityRef": actor.id})
                maneuver = ET.SubElement(group, "Maneuver", {"name": f"man_{actor.id}_{index}"})
                for node_id in chain:
                    maneuver.append(self._event(node_id))
                groups.append(group)
        return groups

    def _event(self, node_id: str) -> ET.Element:
        event = ET.Element("Event", {
            "name": node_id,
            "priority": "overwrite",
            "maximumExecutionCount": "1",
        })
        action = ET.SubElement(event, "Action", {"name": f"{node_id}_action"})
        action.append(self._maneuver_action(node_id))
        trigger = ET.SubElement(event, "StartTrigger")
        for group_conditions in self._trigger_groups(node_id):
            holder = ET.SubElement(trigger, "ConditionGroup")
            for condition in group_conditions:
                holder.append(condition)
        return event

    def _maneuver_action(self, node_id: str) -> ET.Element:
        payload = self.graph.node(node_id).payload
        kind = payload.action_type
        if kind in ("Accelerate", "Decelerate"):
            pedal = "throttle" if kind == "Accelerate" else "brake"
            rate = self._raw(node_id, pedal) * self._limits(payload.ref_actor).max_acceleration
            return self._speed_action("linear", _fmt(rate), self._value(node_id, "target_velocity"))
        if kind == "Stop":
            return self._speed_action("linear", self._value(node_id, "deceleration"), "0")
        if kind == "FollowVehicle":
            longitudinal = ET.Element("LongitudinalAction")
            ET.SubElement(longitudinal, "LongitudinalDistanceAction", {
                "entityRef": payload.target_actor,
                "distance": self._value(node_id, "gap"),
                "freespace": "false",
                "continuous": "true",
            })
            return longitudinal
        if kind in ("LaneChangeLeft", "LaneChangeRight"):
            lateral = ET.Element("LateralAction")
            change = ET.SubElement(lateral, "LaneChangeAction")
            ET.SubElement(change, "LaneChangeActionDynamics", {
                "dynamicsShape": "sinusoidal",
                "value": self._value(node_id, "duration"),
                "dynamicsDimension": "time",
            })
            target = ET.SubElement(change, "LaneChangeTarget")
            ET.SubElement(target, "RelativeTargetLane", {
                "entityRef": payload.ref_actor,
                "value": "1" if kind == "LaneChangeLeft" else "-1",
            })
            return lateral
        if kind in ("DriveDistance", "KeepVelocity", "TurnLeft", "TurnRight"):
            action = self.registry.action(kind)
            payload_text = ";".join(
                f"{spec.name}={self._value(node_id, spec.name)}" for spec in action.params
            )
            custom = ET.Element("UserDefinedAction")
            command = ET.SubElement(custom, "CustomCommandAction", {"type": kind})
            command.text = payload_text
            return custom
        raise UnsupportedAction(f"no OpenSCENARIO mapping for {kind!r} (node {node_id!r})")

    # -- triggers -----------------------------------------------------------

    def _simulation_time_condition(self, name: str, value: str = "0") -> ET.Element:
        condition = ET.Element("Condition", {
            "name": name, "delay": "0", "conditionEdge": "none",
        })
        by_value = ET.SubElement(condition, "ByValueCondition")
        ET.SubElement(by_value, "SimulationTimeCondition", {
            "value": value, "rule": "greaterThan",
        })
        return condition

    def _element_state_condition(self, event_id: str) -> ET.Element:
        condition = ET.Element("Condition", {
            "name": f"done_{event_id}", "delay": "0", "conditionEdge": "none",
        })
        by_value = ET.SubElement(condition, "ByValueCondition")
        ET.SubElement(by_value, "StoryboardElementStateCondition", {
            "storyboardElementType": "event",
            "storyboardElementRef": event_id,
            "state": "completeState",
        })
        return condition

    def _mapped_condition(self, node_id: str) -> ET.Element:
        payload = self.graph.node(node_id).payload
        condition = ET.Element("Condition", {
            "name": node_id, "delay": "0", "conditionEdge": "rising",
        })
        kind = payload.action_type
        if kind == "TimeElapsed":
            by_value = ET.SubElement(condition, "ByValueCondition")
            ET.SubElement(by_value, "SimulationTimeCondition", {
                "value": self._value(node_id, "duration"), "rule": "greaterThan",
            })
            return condition
        by_entity = ET.SubElement(condition, "ByEntityCondition")
        triggering = ET.SubElement(by_entity, "TriggeringEntities", {
            "triggeringEntitiesRule": "any",
        })
        ET.SubElement(triggering, "EntityRef", {"entityRef": payload.ref_actor})
        entity_condition = ET.SubElement(by_entity, "EntityCondition")
        if kind == "InLocationRadius":
            reach = ET.SubElement(entity_condition, "ReachPositionCondition", {
                "tolerance": self._value(node_id, "radius"),
            })
            position = ET.SubElement(reach, "Position")
            ET.SubElement(position, "WorldPosition", {
                "x": self._value(node_id, "x"),
                "y": self._value(node_id, "y"),
                "z": "0",
            })
        elif kind == "InVehicleRadius":
            ET.SubElement(entity_condition, "RelativeDistanceCondition", {
                "entityRef": payload.target_actor,
                "relativeDistanceType": "cartesianDistance",
                "value": self._value(node_id, "radius"),
                "freespace": "false",
                "rule": "lessThan",
            })
        elif kind == "SpeedReached":
            ET.SubElement(entity_condition, "SpeedCondition", {
                "value": self._value(node_id, "speed"), "rule": "greaterThan",
            })
        else:
            raise UnsupportedAction(f"no OpenSCENARIO mapping for condition {kind!r}")
        return condition

    def _trigger_groups(self, node_id: str) -> List[List[ET.Element]]:
        """DNF of the activation gate: OR over groups, AND within a group."""
        groups = self._gate_terms(node_id)
        cleaned = []
        for group in groups:
            # the always-true start marker only matters in an otherwise empty group
            real = []
            for term in group:
                if term != "START" and term not in real:
                    real.append(term)
            cleaned.append([self._build_term(term) for term in real] or
                           [self._simulation_time_condition("at_start")])
        return cleaned

    def _build_term(self, term: Tuple[str, str]) -> ET.Element:
        kind, ref = term
        if kind == "state":
            return self._element_state_condition(ref)
        return self._mapped_condition(ref)

    def _gate_terms(self, node_id: str) -> List[List]:
        """Terms are ("state", maneuver id) / ("cond", condition id) / "START"."""
        conjuncts: List[List[List]] = []
        for pred in self.graph.predecessors(node_id):
            conjuncts.append(self._pred_terms(pred))
        return _cross(conjuncts)

    def _pred_terms(self, pred_id: str) -> List[List]:
        node = self.graph.node(pred_id)
        if node.kind is NodeKind.RootNode:
            return [["START"]]
        if node.kind is NodeKind.Maneuver:
            return [[("state", pred_id)]]
        if node.kind is NodeKind.Condition:
            own = self._gate_terms(pred_id)
            return [group + [("cond", pred_id)] for group in own]
        if node.kind is NodeKind.Join:
            branches = [self._pred_terms(p) for p in self.graph.predecessors(pred_id)]
            if node.payload.policy is JoinPolicy.OneFinished:
                merged: List[List] = []
                for branch in branches:
                    merged.extend(branch)
                return merged
            return _cross(branches)
        raise InvalidScenario(f"unexpected trigger predecessor {pred_id!r}")


def _cross(conjuncts: List[List[List]]) -> List[List]:
    """AND together DNF term lists (cartesian product of their groups)."""
    groups: List[List] = [[]]
    for dnf in conjuncts:
        groups = [existing + addition for existing in groups for addition in dnf]
    return groups


def export(
    graph: ScenarioGraph,
    options: ExportOptions = ExportOptions(),
    registry: Registry = DEFAULT_REGISTRY,
) -> XoscDocument:
    """Emit a concrete, valid scenario as OpenSCENARIO-shaped XML."""
    flat = effective_graph(graph)
    if classify_level(flat, registry) is not AbstractionLevel.Concrete:
        raise LevelError(
            "functional and logical scenarios cannot be exported; concretize first"
        )
    report = validate(flat, registry)
    if not report.is_valid:
        rules = sorted({f.rule_id for f in report.errors()})
        raise InvalidScenario(f"scenario has validation errors: {', '.join(rules)}")
    root = _Exporter(flat, options, registry).build()
    ET.indent(root, space="  ")
    text = '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"
    return XoscDocument(text)


def verify_structure(document) -> StructureReport:
    """Structural subset check: well-formedness, singletons, reference integrity."""
    report = StructureReport()
    text = document.text if isinstance(document, XoscDocument) else document
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        report.problems.append(f"not well-formed XML: {exc}")
        return report
    if root.tag != "OpenSCENARIO":
        report.problems.append(f"root element is {root.tag!r}, expected OpenSCENARIO")
        return report
    for tag, expected in (("FileHeader", 1), ("RoadNetwork", 1),
                          ("Entities", 1), ("Storyboard", 1)):
        count = len(root.findall(tag))
        if count != expected:
            report.problems.append(f"expected {expected} {tag}, found {count}")

    entity_names = [obj.get("name") for obj in root.findall("Entities/ScenarioObject")]
    if len(entity_names) != len(set(entity_names)):
        report.problems.append("duplicate entity names under Entities")
    known_entities = set(entity_names)

    storyboards = root.findall("Storyboard")
    if storyboards:
        inits = storyboards[0].findall("Init")
        if len(inits) != 1:
            report.problems.append(f"expected 1 Init, found {len(inits)}")

    event_names = {event.get("name") for event in root.iter("Event")}
    for element in root.iter():
        ref = element.get("entityRef")
        if ref is not None and not ref.startswith("$") and ref not in known_entities:
            report.problems.append(
                f"{element.tag} references undeclared entity {ref!r}"
            )
        sb_ref = element.get("storyboardElementRef")
        if sb_ref is not None and sb_ref not in event_names:
            report.problems.append(
                f"{element.tag} references unknown storyboard element {sb_ref!r}"
            )
    return report
