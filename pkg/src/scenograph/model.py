"""In-memory scenario graph model and mutation API.

A scenario is a directed graph between one root and one end node. Nodes
are maneuvers, conditions, joins, or module instances; actors live on the
graph and are referenced by id from action nodes. Mutation is permissive
where the editor needs intermediate states (cycles, dangling module refs,
missing targets) — the validation module reports those as findings.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import (
    DuplicateEdge,
    DuplicateTerminal,
    InvalidArgument,
    UnknownNode,
    UnknownParameter,
)
from .params import UNSET, ParamValue, Scalar
from .registry import DEFAULT_REGISTRY, Registry


class AbstractionLevel(enum.IntEnum):
    """Functional < Logical < Concrete."""

    Functional = 1
    Logical = 2
    Concrete = 3


class NodeKind(str, enum.Enum):
    RootNode = "RootNode"
    EndNode = "EndNode"
    Maneuver = "Maneuver"
    Condition = "Condition"
    Join = "Join"
    ModuleInstance = "ModuleInstance"


class ActorCategory(str, enum.Enum):
    Pedestrian = "Pedestrian"
    TwoWheeler = "TwoWheeler"
    FourWheeler = "FourWheeler"


class JoinPolicy(str, enum.Enum):
    AllFinished = "AllFinished"
    OneFinished = "OneFinished"


@dataclass
class Pose2D:
    """World-frame pose; each component is a ParamValue (meters / radians)."""

    x: ParamValue = UNSET
    y: ParamValue = UNSET
    heading: ParamValue = UNSET


@dataclass
class Actor:
    id: str
    name: str
    category: ActorCategory
    model: str = ""
    is_ego: bool = False
    start_pose: Pose2D = field(default_factory=Pose2D)
    start_speed: ParamValue = UNSET


@dataclass
class ActionNode:
    """Payload for Maneuver and Condition kinds."""

    action_type: str
    category: str
    ref_actor: str
    target_actor: Optional[str] = None
    params: Dict[str, ParamValue] = field(default_factory=dict)


@dataclass(frozen=True)
class JoinNode:
    policy: JoinPolicy


@dataclass
class ModuleInstanceNode:
    """Reference to a module definition with role bindings and overrides.

    `overrides` maps element id -> {param key -> value}, applied to the
    instance's private copy of the definition at flatten time.
    """

    def_name: str
    bindings: Dict[str, str] = field(default_factory=dict)
    overrides: Dict[str, Dict[str, ParamValue]] = field(default_factory=dict)


@dataclass
class GraphNode:
    id: str
    kind: NodeKind
    payload: object = None


@dataclass
class Edge:
    src: str
    dst: str
    src_port: Optional[str] = None
    dst_port: Optional[str] = None

    def key(self) -> Tuple:
        return (self.src, self.dst, self.src_port, self.dst_port)


@dataclass
class ModuleDef:
    """Reusable sub-scenario: elements wired between named ports.

    Elements may be maneuvers, conditions, joins, or nested module
    instances — never root/end nodes. Actor references inside elements
    are symbolic role names bound at instantiation.
    """

    name: str
    roles: Tuple[str, ...] = ()
    elements: List[GraphNode] = field(default_factory=list)
    edges: List[Edge] = field(default_factory=list)
    in_ports: Dict[str, str] = field(default_factory=dict)
    out_ports: Dict[str, str] = field(default_factory=dict)

    @property
    def id(self) -> str:
        return self.name

    def element(self, element_id: str) -> Optional[GraphNode]:
        for node in self.elements:
            if node.id == element_id:
                return node
        return None


ROOT_ID = "root"
END_ID = "end"


class ScenarioGraph:
    """The scenario itself: actors, nodes, edges, module definitions.

    Instances are plain mutable objects; treat a validated graph as a
    snapshot and mutate only through an exclusive handle. All read paths
    are side-effect free.
    """

    def __init__(self, name: str, map_name: str, level: AbstractionLevel):
        if not name:
            raise InvalidArgument("scenario name must not be empty")
        self.name = name
        self.map_name = map_name
        self.abstraction_level = AbstractionLevel(level)
        self.environment: Dict[str, ParamValue] = {}
        self.actors: List[Actor] = []
        self.nodes: List[GraphNode] = [
            GraphNode(ROOT_ID, NodeKind.RootNode),
            GraphNode(END_ID, NodeKind.EndNode),
        ]
        self.edges: List[Edge] = []
        self.module_defs: List[ModuleDef] = []
        self._id_counter = 0

    # -- identity ------------------------------------------------------

    @property
    def id(self) -> str:
        return self.name

    def __eq__(self, other):
        if not isinstance(other, ScenarioGraph):
            return NotImplemented
        return (
            self.name == other.name
            and self.map_name == other.map_name
            and self.abstraction_level == other.abstraction_level
            and self.environment == other.environment
            and self.actors == other.actors
            and self.nodes == other.nodes
            and self.edges == other.edges
            and self.module_defs == other.module_defs
        )

    # -- lookups -------------------------------------------------------

    def node(self, node_id: str) -> GraphNode:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise UnknownNode(f"no node {node_id!r} in scenario {self.name!r}")

    def has_node(self, node_id: str) -> bool:
        return any(node.id == node_id for node in self.nodes)

    def actor(self, actor_id: str) -> Optional[Actor]:
        for actor in self.actors:
            if actor.id == actor_id:
                return actor
        return None

    def module_def(self, name: str) -> Optional[ModuleDef]:
        for mod in self.module_defs:
            if mod.name == name:
                return mod
        return None

    def root(self) -> GraphNode:
        return next(n for n in self.nodes if n.kind is NodeKind.RootNode)

    def end(self) -> GraphNode:
        return next(n for n in self.nodes if n.kind is NodeKind.EndNode)

    def predecessors(self, node_id: str) -> List[str]:
        return [e.src for e in self.edges if e.dst == node_id]

    def successors(self, node_id: str) -> List[str]:
        return [e.dst for e in self.edges if e.src == node_id]

    def action_nodes(self) -> List[GraphNode]:
        return [n for n in self.nodes if n.kind in (NodeKind.Maneuver, NodeKind.Condition)]

    # -- mutation ------------------------------------------------------

    def _fresh_id(self) -> str:
        while True:
            self._id_counter += 1
            candidate = f"n{self._id_counter}"
            if not self.has_node(candidate):
                return candidate

    def add_actor(
        self,
        actor_id: str,
        name: str,
        category: ActorCategory,
        model: str = "",
        is_ego: bool = False,
        start_pose: Optional[Pose2D] = None,
        start_speed: ParamValue = UNSET,
    ) -> Actor:
        if self.actor(actor_id) is not None:
            raise InvalidArgument(f"actor id {actor_id!r} already in use")
        if is_ego and any(a.is_ego for a in self.actors):
            raise InvalidArgument("scenario already has an ego actor")
        actor = Actor(
            actor_id, name, ActorCategory(category), model, is_ego,
            start_pose or Pose2D(), start_speed,
        )
        self.actors.append(actor)
        return actor

    def add_node(self, kind: NodeKind, payload=None, node_id: Optional[str] = None) -> str:
        kind = NodeKind(kind)
        if kind in (NodeKind.RootNode, NodeKind.EndNode):
            raise DuplicateTerminal(f"scenario already contains its {kind.value}")
        if node_id is None:
            node_id = self._fresh_id()
        elif self.has_node(node_id):
            raise InvalidArgument(f"node id {node_id!r} already in use")
        self.nodes.append(GraphNode(node_id, kind, payload))
        return node_id

    def add_maneuver(
        self,
        action_type: str,
        ref_actor: str,
        target_actor: Optional[str] = None,
        params: Optional[Dict[str, ParamValue]] = None,
        node_id: Optional[str] = None,
        registry: Registry = DEFAULT_REGISTRY,
    ) -> str:
        return self._add_action(
            NodeKind.Maneuver, action_type, ref_actor, target_actor, params, node_id, registry
        )

    def add_condition(
        self,
        action_type: str,
        ref_actor: str,
        target_actor: Optional[str] = None,
        params: Optional[Dict[str, ParamValue]] = None,
        node_id: Optional[str] = None,
        registry: Registry = DEFAULT_REGISTRY,
    ) -> str:
        return self._add_action(
            NodeKind.Condition, action_type, ref_actor, target_actor, params, node_id, registry
        )

    def _add_action(self, kind, action_type, ref_actor, target_actor, params, node_id, registry):
        action = registry.action(action_type)
        expected_kind = NodeKind.Condition if action.category == "Condition" else NodeKind.Maneuver
        if kind is not expected_kind:
            raise InvalidArgument(
                f"{action_type} is a {action.category} action, not a {kind.value}"
            )
        payload = ActionNode(action_type, action.category, ref_actor, target_actor, {})
        for key, value in (params or {}).items():
            if action.param(key) is None:
                raise UnknownParameter(f"{action_type} declares no parameter {key!r}")
            payload.params[key] = value
        return self.add_node(kind, payload, node_id)

    def add_join(self, policy: JoinPolicy, node_id: Optional[str] = None) -> str:
        return self.add_node(NodeKind.Join, JoinNode(JoinPolicy(policy)), node_id)

    def connect(
        self,
        src: str,
        dst: str,
        src_port: Optional[str] = None,
        dst_port: Optional[str] = None,
    ) -> str:
        """Add an edge. Cycles are allowed here; validation rejects them (R9)."""
        for endpoint in (src, dst):
            if not self.has_node(endpoint):
                raise UnknownNode(f"no node {endpoint!r} in scenario {self.name!r}")
        if src == dst:
            raise InvalidArgument("self-loops are not allowed")
        edge = Edge(src, dst, src_port, dst_port)
        if any(e.key() == edge.key() for e in self.edges):
            raise DuplicateEdge(f"edge {src!r} -> {dst!r} already exists")
        self.edges.append(edge)
        return f"e{len(self.edges) - 1}"

    def set_parameter(
        self,
        node_id: str,
        key: str,
        value: ParamValue,
        registry: Registry = DEFAULT_REGISTRY,
    ) -> GraphNode:
        """Store a parameter verbatim; level conformance is validation's job."""
        node = self.node(node_id)
        if not isinstance(node.payload, ActionNode):
            raise InvalidArgument(f"node {node_id!r} carries no parameters")
        action = registry.action(node.payload.action_type)
        if action.param(key) is None:
            raise UnknownParameter(f"{node.payload.action_type} declares no parameter {key!r}")
        node.payload.params[key] = value
        return node

    def set_environment(self, key: str, value: ParamValue) -> None:
        self.environment[key] = value

    def add_module_def(self, module: ModuleDef) -> ModuleDef:
        if self.module_def(module.name) is not None:
            raise InvalidArgument(f"module {module.name!r} already defined in this scenario")
        self.module_defs.append(module)
        return module


def new_graph(name: str, map_name: str, level: AbstractionLevel) -> ScenarioGraph:
    """Create an empty scenario: a root, an end, nothing else."""
    return ScenarioGraph(name, map_name, level)


def ego_actor(graph: ScenarioGraph) -> Optional[Actor]:
    for actor in graph.actors:
        if actor.is_ego:
            return actor
    return None


def scalar(value, unit: str = "") -> Scalar:
    """Shorthand used heavily by fixtures and tests."""
    return Scalar(value, unit)
