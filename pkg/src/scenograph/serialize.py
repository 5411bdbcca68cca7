"""Canonical scenario file format (format_version "1").

One scenario per JSON document. Field names and parameter encodings are
normative; serialization is byte-stable (fixed key order, two-space
indent, trailing newline) so golden files can pin it exactly.
"""

from __future__ import annotations

import json
from typing import Dict

from .errors import ParseError, SchemaError
from .model import (
    AbstractionLevel,
    ActionNode,
    Actor,
    ActorCategory,
    Edge,
    GraphNode,
    JoinNode,
    JoinPolicy,
    ModuleDef,
    ModuleInstanceNode,
    NodeKind,
    Pose2D,
    ScenarioGraph,
)
from .params import param_from_json, param_to_json

FORMAT_VERSION = "1"


# -- writing ------------------------------------------------------------


def _node_record(node: GraphNode) -> dict:
    record = {"id": node.id, "kind": node.kind.value}
    payload = node.payload
    if isinstance(payload, ActionNode):
        record["action_type"] = payload.action_type
        record["category"] = payload.category
        record["ref_actor"] = payload.ref_actor
        record["target_actor"] = payload.target_actor
        record["params"] = {k: param_to_json(v) for k, v in payload.params.items()}
    elif isinstance(payload, JoinNode):
        record["policy"] = payload.policy.value
    elif isinstance(payload, ModuleInstanceNode):
        record["module"] = payload.def_name
        record["bindings"] = dict(payload.bindings)
        record["overrides"] = {
            element: {k: param_to_json(v) for k, v in params.items()}
            for element, params in payload.overrides.items()
        }
    return record


def _edge_record(edge: Edge) -> dict:
    record = {"from": edge.src, "to": edge.dst}
    if edge.src_port is not None:
        record["from_port"] = edge.src_port
    if edge.dst_port is not None:
        record["to_port"] = edge.dst_port
    return record


def _actor_record(actor: Actor) -> dict:
    return {
        "id": actor.id,
        "name": actor.name,
        "category": actor.category.value,
        "model": actor.model,
        "is_ego": actor.is_ego,
        "start_pose": {
            "x": param_to_json(actor.start_pose.x),
            "y": param_to_json(actor.start_pose.y),
            "heading": param_to_json(actor.start_pose.heading),
        },
        "start_speed": param_to_json(actor.start_speed),
    }


def _module_record(mod: ModuleDef) -> dict:
    return {
        "name": mod.name,
        "roles": list(mod.roles),
        "elements": [_node_record(n) for n in mod.elements],
        "edges": [_edge_record(e) for e in mod.edges],
        "in_ports": dict(mod.in_ports),
        "out_ports": dict(mod.out_ports),
    }


def to_document(graph: ScenarioGraph) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "name": graph.name,
        "map": graph.map_name,
        "abstraction_level": graph.abstraction_level.name,
        "environment": {k: param_to_json(v) for k, v in graph.environment.items()},
        "actors": [_actor_record(a) for a in graph.actors],
        "nodes": [_node_record(n) for n in graph.nodes],
        "edges": [_edge_record(e) for e in graph.edges],
        "module_defs": [_module_record(m) for m in graph.module_defs],
    }


def serialize(graph: ScenarioGraph) -> str:
    return json.dumps(to_document(graph), indent=2) + "\n"


# -- reading ------------------------------------------------------------


def _require(data: dict, key: str, path: str):
    if key not in data:
        raise SchemaError(f"{path}: missing required field {key!r}")
    return data[key]


def _parse_params(data, path: str) -> Dict[str, object]:
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected an object")
    return {key: param_from_json(value, f"{path}.{key}") for key, value in data.items()}


def _parse_node(data, path: str) -> GraphNode:
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected an object")
    node_id = _require(data, "id", path)
    kind_name = _require(data, "kind", path)
    try:
        kind = NodeKind(kind_name)
    except ValueError:
        raise SchemaError(f"{path}.kind: unknown node kind {kind_name!r}") from None
    if kind in (NodeKind.Maneuver, NodeKind.Condition):
        payload = ActionNode(
            action_type=_require(data, "action_type", path),
            category=_require(data, "category", path),
            ref_actor=_require(data, "ref_actor", path),
            target_actor=data.get("target_actor"),
            params=_parse_params(data.get("params", {}), f"{path}.params"),
        )
    elif kind is NodeKind.Join:
        policy_name = _require(data, "policy", path)
        try:
            payload = JoinNode(JoinPolicy(policy_name))
        except ValueError:
            raise SchemaError(f"{path}.policy: unknown join policy {policy_name!r}") from None
    elif kind is NodeKind.ModuleInstance:
        overrides_data = data.get("overrides", {})
        if not isinstance(overrides_data, dict):
            raise SchemaError(f"{path}.overrides: expected an object")
        payload = ModuleInstanceNode(
            def_name=_require(data, "module", path),
            bindings=dict(data.get("bindings", {})),
            overrides={
                element: _parse_params(params, f"{path}.overrides.{element}")
                for element, params in overrides_data.items()
            },
        )
    else:
        payload = None
    return GraphNode(node_id, kind, payload)


def _parse_edge(data, path: str) -> Edge:
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected an object")
    return Edge(
        src=_require(data, "from", path),
        dst=_require(data, "to", path),
        src_port=data.get("from_port"),
        dst_port=data.get("to_port"),
    )


def _parse_actor(data, path: str) -> Actor:
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected an object")
    category_name = _require(data, "category", path)
    try:
        category = ActorCategory(category_name)
    except ValueError:
        raise SchemaError(f"{path}.category: unknown actor category {category_name!r}") from None
    pose_data = data.get("start_pose", {})
    if not isinstance(pose_data, dict):
        raise SchemaError(f"{path}.start_pose: expected an object")
    return Actor(
        id=_require(data, "id", path),
        name=_require(data, "name", path),
        category=category,
        model=data.get("model", ""),
        is_ego=bool(data.get("is_ego", False)),
        start_pose=Pose2D(
            x=param_from_json(pose_data.get("x"), f"{path}.start_pose.x"),
            y=param_from_json(pose_data.get("y"), f"{path}.start_pose.y"),
            heading=param_from_json(pose_data.get("heading"), f"{path}.start_pose.heading"),
        ),
        start_speed=param_from_json(data.get("start_speed"), f"{path}.start_speed"),
    )


def _parse_module(data, path: str) -> ModuleDef:
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected an object")
    return ModuleDef(
        name=_require(data, "name", path),
        roles=tuple(data.get("roles", [])),
        elements=[
            _parse_node(n, f"{path}.elements[{i}]")
            for i, n in enumerate(_require(data, "elements", path))
        ],
        edges=[
            _parse_edge(e, f"{path}.edges[{i}]")
            for i, e in enumerate(data.get("edges", []))
        ],
        in_ports=dict(data.get("in_ports", {})),
        out_ports=dict(data.get("out_ports", {})),
    )


def from_document(doc: dict) -> ScenarioGraph:
    if not isinstance(doc, dict):
        raise SchemaError("document: expected a JSON object")
    version = _require(doc, "format_version", "document")
    if version != FORMAT_VERSION:
        raise SchemaError(f"document.format_version: unsupported version {version!r}")
    name = _require(doc, "name", "document")
    if not isinstance(name, str) or not name:
        raise SchemaError("document.name: expected non-empty text")
    level_name = _require(doc, "abstraction_level", "document")
    try:
        level = AbstractionLevel[level_name]
    except KeyError:
        raise SchemaError(
            f"document.abstraction_level: unknown level {level_name!r}"
        ) from None

    graph = ScenarioGraph.__new__(ScenarioGraph)
    graph.name = name
    graph.map_name = _require(doc, "map", "document")
    graph.abstraction_level = level
    graph.environment = _parse_params(doc.get("environment", {}), "document.environment")
    graph.actors = [
        _parse_actor(a, f"document.actors[{i}]")
        for i, a in enumerate(_require(doc, "actors", "document"))
    ]
    graph.nodes = [
        _parse_node(n, f"document.nodes[{i}]")
        for i, n in enumerate(_require(doc, "nodes", "document"))
    ]
    graph.edges = [
        _parse_edge(e, f"document.edges[{i}]")
        for i, e in enumerate(_require(doc, "edges", "document"))
    ]
    graph.module_defs = [
        _parse_module(m, f"document.module_defs[{i}]")
        for i, m in enumerate(doc.get("module_defs", []))
    ]
    graph._id_counter = 0

    seen = set()
    for node in graph.nodes:
        if node.id in seen:
            raise SchemaError(f"document.nodes: duplicate node id {node.id!r}")
        seen.add(node.id)
    return graph


def parse(text: str) -> ScenarioGraph:
    """Parse a canonical scenario document.

    Raises ParseError for malformed JSON (with line/column), SchemaError
    for well-formed JSON that violates the file schema. Graph-level
    invariants (single root, ref integrity, ...) are validation findings,
    not parse failures, so editors can load broken files for repair.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return from_document(doc)


def load(path) -> ScenarioGraph:
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read())


def save(graph: ScenarioGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(serialize(graph))
