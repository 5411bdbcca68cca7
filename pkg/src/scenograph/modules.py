"""Reusable sub-scenario modules: definition, instantiation, flattening.

A module definition wires maneuvers/conditions/joins (and nested module
instances) between named in/out ports, with symbolic actor roles bound
when the module is instantiated into a scenario. Flattening replaces
every instance with a private copy of its definition: roles substituted,
overrides applied, port edges rewired, and copy node ids derived
deterministically as "<instance id>.<element id>" so two flatten runs
(and flatten-then-validate versus validate-then-flatten) agree exactly.
"""

from __future__ import annotations

import copy
from typing import Dict, List, Optional, Tuple

from .errors import (
    BindingMismatch,
    DepthExceeded,
    IllegalElement,
    InvalidArgument,
    RecursiveModule,
    UnboundRole,
    UnknownModule,
    UnknownParameter,
)
from .model import (
    ActionNode,
    Edge,
    GraphNode,
    ModuleDef,
    ModuleInstanceNode,
    NodeKind,
    ScenarioGraph,
)
from .registry import DEFAULT_REGISTRY, Registry

DEFAULT_DEPTH_LIMIT = 32


def _claim(node: GraphNode, owner: str) -> None:
    # one element object lives in exactly one parent (graph or module)
    current = getattr(node, "_owner", None)
    if current is not None and current != owner:
        raise InvalidArgument(
            f"node {node.id!r} already belongs to {current}; "
            "an instance can only be part of one parent"
        )
    node._owner = owner


def define_module(
    name: str,
    elements: List[GraphNode],
    edges: List[Edge],
    in_ports: Dict[str, str],
    out_ports: Dict[str, str],
    roles: Tuple[str, ...] = (),
    registry: Registry = DEFAULT_REGISTRY,
) -> ModuleDef:
    """Build a module definition, checking its structural invariants."""
    if not name:
        raise InvalidArgument("module name must not be empty")
    if not in_ports or not out_ports:
        raise InvalidArgument("a module needs at least one in-port and one out-port")
    ids = set()
    for node in elements:
        if node.kind in (NodeKind.RootNode, NodeKind.EndNode):
            raise IllegalElement(f"{node.kind.value} cannot be part of a module")
        if node.id in ids:
            raise InvalidArgument(f"duplicate element id {node.id!r}")
        ids.add(node.id)
        if node.kind is NodeKind.ModuleInstance and node.payload.def_name == name:
            raise RecursiveModule(f"module {name!r} cannot contain itself")
        if isinstance(node.payload, ActionNode):
            registry.action(node.payload.action_type)  # UnknownAction on bad data
    for edge in edges:
        for endpoint in (edge.src, edge.dst):
            if endpoint not in ids:
                raise InvalidArgument(f"edge endpoint {endpoint!r} is not an element")
    for port_name, element_id in {**in_ports, **out_ports}.items():
        if element_id not in ids:
            raise InvalidArgument(f"port {port_name!r} maps to unknown element {element_id!r}")

    module = ModuleDef(name, tuple(roles), list(elements), list(edges),
                       dict(in_ports), dict(out_ports))
    _check_port_coverage(module)
    for node in elements:
        _claim(node, f"module:{name}")
    return module


def _check_port_coverage(module: ModuleDef) -> None:
    """Every element must lie on some in-port -> out-port path."""
    succ: Dict[str, list] = {}
    pred: Dict[str, list] = {}
    for edge in module.edges:
        succ.setdefault(edge.src, []).append(edge.dst)
        pred.setdefault(edge.dst, []).append(edge.src)
    forward = _reach(set(module.in_ports.values()), succ)
    backward = _reach(set(module.out_ports.values()), pred)
    for node in module.elements:
        if node.id not in forward or node.id not in backward:
            raise InvalidArgument(
                f"element {node.id!r} is not on any in-port to out-port path"
            )


def _reach(seeds, adjacency) -> set:
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        current = stack.pop()
        for nxt in adjacency.get(current, []):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def module_roles_used_by(module: ModuleDef, role: str) -> List[GraphNode]:
    """Elements whose reference or target actor is the given role."""
    hits = []
    for node in module.elements:
        payload = node.payload
        if isinstance(payload, ActionNode) and role in (payload.ref_actor, payload.target_actor):
            hits.append(node)
    return hits


def instantiate(
    graph: ScenarioGraph,
    module: ModuleDef,
    bindings: Dict[str, str],
    overrides: Optional[Dict[str, Dict[str, object]]] = None,
    node_id: Optional[str] = None,
    registry: Registry = DEFAULT_REGISTRY,
) -> str:
    """Place a module instance node into the graph.

    All roles must be bound to existing actors whose categories are
    allowed by every element using the role. Overrides address direct
    elements of the definition by id.
    """
    for role in module.roles:
        if role not in bindings:
            raise UnboundRole(f"role {role!r} is not bound")
    for role, actor_id in bindings.items():
        if role not in module.roles:
            raise InvalidArgument(f"module {module.name!r} declares no role {role!r}")
        actor = graph.actor(actor_id)
        if actor is None:
            raise UnboundRole(f"role {role!r} bound to unknown actor {actor_id!r}")
        for element in module_roles_used_by(module, role):
            action = registry.action(element.payload.action_type)
            if element.payload.ref_actor == role and \
                    actor.category.value not in action.allowed_actor_categories:
                raise BindingMismatch(
                    f"{actor.category.value} actor {actor_id!r} cannot execute "
                    f"{action.name} (element {element.id!r})"
                )
    overrides = overrides or {}
    for element_id, params in overrides.items():
        element = module.element(element_id)
        if element is None:
            raise UnknownParameter(f"override targets unknown element {element_id!r}")
        if not isinstance(element.payload, ActionNode):
            raise UnknownParameter(f"element {element_id!r} carries no parameters")
        action = registry.action(element.payload.action_type)
        for key in params:
            if action.param(key) is None:
                raise UnknownParameter(
                    f"{element.payload.action_type} declares no parameter {key!r}"
                )

    if graph.module_def(module.name) is None:
        graph.add_module_def(module)
    elif graph.module_def(module.name) is not module and graph.module_def(module.name) != module:
        raise InvalidArgument(f"graph already defines a different module {module.name!r}")

    payload = ModuleInstanceNode(
        module.name,
        dict(bindings),
        {element: dict(params) for element, params in overrides.items()},
    )
    return graph.add_node(NodeKind.ModuleInstance, payload, node_id)


def has_module_instances(graph: ScenarioGraph) -> bool:
    return any(n.kind is NodeKind.ModuleInstance for n in graph.nodes)


def _single_port(ports: Dict[str, str], requested: Optional[str], where: str) -> str:
    if requested is not None:
        if requested not in ports:
            raise InvalidArgument(f"{where} has no port {requested!r}")
        return ports[requested]
    if len(ports) == 1:
        return next(iter(ports.values()))
    raise InvalidArgument(f"{where} has {len(ports)} ports; edge must name one")


def _expand(
    graph: ScenarioGraph,
    module: ModuleDef,
    prefix: str,
    bindings: Dict[str, str],
    overrides: Dict[str, Dict[str, object]],
    depth: int,
    limit: int,
    def_stack: Tuple[str, ...],
):
    """Expand one instance; returns (nodes, edges, entry ids, exit ids per port)."""
    if depth > limit:
        raise DepthExceeded(f"module nesting exceeds depth limit {limit}")
    if module.name in def_stack:
        raise RecursiveModule(
            f"module {module.name!r} recursively contains itself via {'/'.join(def_stack)}"
        )
    stack = def_stack + (module.name,)

    nodes: List[GraphNode] = []
    edges: List[Edge] = []
    plain: Dict[str, str] = {}
    nested: Dict[str, tuple] = {}

    for element in module.elements:
        flat_id = f"{prefix}.{element.id}"
        if element.kind is NodeKind.ModuleInstance:
            inner = graph.module_def(element.payload.def_name)
            if inner is None:
                raise UnknownModule(f"unknown module {element.payload.def_name!r}")
            inner_bindings = {
                role: bindings.get(actor, actor)
                for role, actor in element.payload.bindings.items()
            }
            sub_nodes, sub_edges, entries, exits = _expand(
                graph, inner, flat_id, inner_bindings, element.payload.overrides,
                depth + 1, limit, stack,
            )
            nodes.extend(sub_nodes)
            edges.extend(sub_edges)
            nested[element.id] = (entries, exits)
        elif isinstance(element.payload, ActionNode):
            payload = element.payload
            params = dict(payload.params)
            params.update(overrides.get(element.id, {}))
            target = payload.target_actor
            nodes.append(GraphNode(flat_id, element.kind, ActionNode(
                payload.action_type,
                payload.category,
                bindings.get(payload.ref_actor, payload.ref_actor),
                bindings.get(target, target) if target is not None else None,
                params,
            )))
            plain[element.id] = flat_id
        else:  # Join
            nodes.append(GraphNode(flat_id, element.kind, element.payload))
            plain[element.id] = flat_id

    def resolve(element_id: str, port: Optional[str], incoming: bool) -> str:
        if element_id in nested:
            entries, exits = nested[element_id]
            ports = entries if incoming else exits
            if port is not None:
                if port not in ports:
                    raise InvalidArgument(f"instance {element_id!r} has no port {port!r}")
                return ports[port]
            if len(ports) == 1:
                return next(iter(ports.values()))
            raise InvalidArgument(f"instance {element_id!r} has {len(ports)} ports; name one")
        return plain[element_id]

    for edge in module.edges:
        edges.append(Edge(
            resolve(edge.src, edge.src_port, incoming=False),
            resolve(edge.dst, edge.dst_port, incoming=True),
        ))

    entry_ids = {port: resolve(el, None, incoming=True) for port, el in module.in_ports.items()}
    exit_ids = {port: resolve(el, None, incoming=False) for port, el in module.out_ports.items()}
    return nodes, edges, entry_ids, exit_ids


def flatten(
    graph: ScenarioGraph,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
) -> ScenarioGraph:
    """Replace every module instance by a copy of its definition.

    The result carries no ModuleInstance nodes (definitions stay attached,
    inert). Module-free graphs come back as an identical deep copy, which
    makes flatten idempotent.
    """
    result = copy.deepcopy(graph)
    if not has_module_instances(graph):
        return result

    new_nodes: List[GraphNode] = []
    new_edges: List[Edge] = []
    expansions: Dict[str, tuple] = {}

    for node in result.nodes:
        if node.kind is not NodeKind.ModuleInstance:
            new_nodes.append(node)
            continue
        module = result.module_def(node.payload.def_name)
        if module is None:
            raise UnknownModule(f"unknown module {node.payload.def_name!r}")
        sub_nodes, sub_edges, entries, exits = _expand(
            result, module, node.id, node.payload.bindings, node.payload.overrides,
            1, depth_limit, (),
        )
        for sub in sub_nodes:
            if any(existing.id == sub.id for existing in result.nodes):
                raise InvalidArgument(f"flattened id {sub.id!r} collides with an existing node")
        new_nodes.extend(sub_nodes)
        expansions[node.id] = (entries, exits, sub_edges)

    for edge in result.edges:
        src, dst = edge.src, edge.dst
        if src in expansions:
            _, exits, _ = expansions[src]
            src = exits[_port_name(exits, edge.src_port, src)]
        if dst in expansions:
            entries, _, _ = expansions[dst]
            dst = entries[_port_name(entries, edge.dst_port, dst)]
        new_edges.append(Edge(src, dst))
    for instance_id in (n.id for n in result.nodes if n.id in expansions):
        new_edges.extend(expansions[instance_id][2])

    result.nodes = new_nodes
    result.edges = new_edges
    return result


def _port_name(ports: Dict[str, str], requested: Optional[str], instance_id: str) -> str:
    if requested is not None:
        if requested not in ports:
            raise InvalidArgument(f"instance {instance_id!r} has no port {requested!r}")
        return requested
    if len(ports) == 1:
        return next(iter(ports))
    raise InvalidArgument(f"instance {instance_id!r} has {len(ports)} ports; edge must name one")


def effective_graph(graph: ScenarioGraph) -> ScenarioGraph:
    """The module-free view rules and tools operate on."""
    if has_module_instances(graph):
        return flatten(graph)
    return graph
