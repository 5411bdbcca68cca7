"""Rule-based static validation of scenario graphs.

Ten rules, R1..R10. Structural rules guard the root/end skeleton and the
DAG shape; content rules check parameter completeness against the
declared abstraction level and plausibility against the registry bounds.
R7 and R8 are warnings; everything else is an error. All rules always
run — findings accumulate, validation never aborts early.

Graphs with module instances are checked on their flattened view (ids in
findings are then the deterministic flattened ids), so validating before
or after flattening gives the same verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List

from .errors import ScenarioError, UnknownRule
from .model import (
    AbstractionLevel,
    ActionNode,
    ModuleInstanceNode,
    NodeKind,
    ScenarioGraph,
)
from .modules import effective_graph, has_module_instances, module_roles_used_by
from .params import UNSET, DiscreteSet, Range, Scalar, Unset
from .registry import DEFAULT_REGISTRY, Registry

ERROR = "Error"
WARNING = "Warning"

RULE_SEVERITY = {
    "R1": ERROR, "R2": ERROR, "R3": ERROR, "R4": ERROR, "R5": ERROR,
    "R6": ERROR, "R7": WARNING, "R8": WARNING, "R9": ERROR, "R10": ERROR,
}

RULE_TEXT = {
    "R1": "Exactly one root node: a scenario starts at a single root holding "
          "scenario-wide information.",
    "R2": "Exactly one end node: every maneuver path has to end in the one end node.",
    "R3": "Terminal connectivity: the root node cannot have an incoming connection "
          "and the end node cannot have an outgoing connection.",
    "R4": "Path coverage: every maneuver, condition, and module instance must lie on "
          "some directed path from the root that is connected to the end node.",
    "R5": "Join arity: a join node merges parallel sequences and needs at least two "
          "incoming edges.",
    "R6": "Level completeness: parameters must fit the declared abstraction level — "
          "Concrete requires fixed scalars, Logical allows scalars, ranges, and "
          "discrete sets, Functional allows anything including unset values.",
    "R7": "Parallel conflicts (warning): an actor should not run conflicting maneuvers "
          "at the same time, e.g. accelerate and decelerate.",
    "R8": "Plausibility bounds (warning): scalar values should fit the actor category, "
          "e.g. a pedestrian cannot move at 50 km/h.",
    "R9": "Acyclicity: the scenario graph must be a DAG; loops can never reach the end node.",
    "R10": "Reference integrity: action nodes must resolve their reference actor, "
           "two-actor actions must name a resolvable target actor, and module "
           "bindings must map every role to a suitable actor.",
}


@dataclass(frozen=True)
class Finding:
    rule_id: str
    severity: str
    node_ids: tuple
    message: str

    def to_json(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "severity": self.severity,
            "node_ids": list(self.node_ids),
            "message": self.message,
        }


@dataclass
class ValidationReport:
    findings: List[Finding] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not any(f.severity == ERROR for f in self.findings)

    def errors(self) -> List[Finding]:
        return [f for f in self.findings if f.severity == ERROR]

    def warnings(self) -> List[Finding]:
        return [f for f in self.findings if f.severity == WARNING]

    def by_rule(self, rule_id: str) -> List[Finding]:
        return [f for f in self.findings if f.rule_id == rule_id]

    def to_json(self) -> dict:
        return {
            "is_valid": self.is_valid,
            "findings": [f.to_json() for f in self.findings],
        }


def explain(rule_id: str) -> str:
    try:
        return RULE_TEXT[rule_id]
    except KeyError:
        raise UnknownRule(f"unknown validation rule {rule_id!r}") from None


def _finding(rule_id: str, node_ids, message: str) -> Finding:
    return Finding(rule_id, RULE_SEVERITY[rule_id], tuple(node_ids), message)


# -- reachability helpers -------------------------------------------------


def _adjacency(graph: ScenarioGraph):
    succ: Dict[str, list] = {n.id: [] for n in graph.nodes}
    pred: Dict[str, list] = {n.id: [] for n in graph.nodes}
    for edge in graph.edges:
        if edge.src in succ and edge.dst in pred:
            succ[edge.src].append(edge.dst)
            pred[edge.dst].append(edge.src)
    return succ, pred

def _reachable(seeds, adjacency) -> set:
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        for nxt in adjacency.get(stack.pop(), []):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def _cycle_nodes(graph: ScenarioGraph) -> List[str]:
    """Node ids that sit on some cycle: nodes that can reach themselves."""
    succ, _ = _adjacency(graph)
    return sorted(
        node.id for node in graph.nodes
        if node.id in _reachable(succ[node.id], succ)
    )


# -- rules -----------------------------------------------------------------


def _rule_terminals(graph: ScenarioGraph) -> List[Finding]:
    findings = []
    roots = [n.id for n in graph.nodes if n.kind is NodeKind.RootNode]
    ends = [n.id for n in graph.nodes if n.kind is NodeKind.EndNode]
    if len(roots) != 1:
        findings.append(_finding("R1", roots, f"expected exactly one root node, found {len(roots)}"))
    if len(ends) != 1:
        findings.append(_finding("R2", ends, f"expected exactly one end node, found {len(ends)}"))
    return findings


def _rule_terminal_edges(graph: ScenarioGraph) -> List[Finding]:
    findings = []
    for node in graph.nodes:
        if node.kind is NodeKind.RootNode and graph.predecessors(node.id):
            findings.append(_finding("R3", [node.id], "root node has an incoming connection"))
        if node.kind is NodeKind.EndNode and graph.successors(node.id):
            findings.append(_finding("R3", [node.id], "end node has an outgoing connection"))
    return findings


_R4_SUBJECTS = (NodeKind.Maneuver, NodeKind.Condition, NodeKind.ModuleInstance)


def _rule_path_coverage(graph: ScenarioGraph) -> List[Finding]:
    succ, pred = _adjacency(graph)
    roots = [n.id for n in graph.nodes if n.kind is NodeKind.RootNode]
    ends = [n.id for n in graph.nodes if n.kind is NodeKind.EndNode]
    from_root = _reachable(roots, succ)
    to_end = _reachable(ends, pred)
    findings = []
    for node in graph.nodes:
        if node.kind in _R4_SUBJECTS and (node.id not in from_root or node.id not in to_end):
            findings.append(_finding(
                "R4", [node.id],
                f"node {node.id!r} is not on any root-to-end path",
            ))
    return findings


def _rule_join_arity(graph: ScenarioGraph) -> List[Finding]:
    findings = []
    for node in graph.nodes:
        if node.kind is NodeKind.Join:
            incoming = len(graph.predecessors(node.id))
            if incoming < 2:
                findings.append(_finding(
                    "R5", [node.id],
                    f"join node {node.id!r} has {incoming} incoming sequence(s), needs at least two",
                ))
    return findings


def _level_ok(value, level: AbstractionLevel) -> bool:
    if level is AbstractionLevel.Concrete:
        return isinstance(value, Scalar)
    if level is AbstractionLevel.Logical:
        return isinstance(value, (Scalar, Range, DiscreteSet))
    return True


def _param_slots(graph: ScenarioGraph, registry: Registry):
    """Every required parameter slot: (owner id, key, value).

    Owners are node ids, "actor:<id>" for start pose/speed, and "env"
    for environment entries. The same walk drives R6, level
    classification, and concretization planning.
    """
    for node in graph.nodes:
        payload = node.payload
        if not isinstance(payload, ActionNode) or not registry.has_action(payload.action_type):
            continue
        for spec in registry.action(payload.action_type).params:
            yield node.id, spec.name, payload.params.get(spec.name, UNSET)
    for actor in graph.actors:
        owner = f"actor:{actor.id}"
        yield owner, "start_pose.x", actor.start_pose.x
        yield owner, "start_pose.y", actor.start_pose.y
        yield owner, "start_pose.heading", actor.start_pose.heading
        yield owner, "start_speed", actor.start_speed
    for key, value in graph.environment.items():
        yield "env", key, value


def _rule_level(graph: ScenarioGraph, registry: Registry) -> List[Finding]:
    level = graph.abstraction_level
    if level is AbstractionLevel.Functional:
        return []
    findings = []
    for owner, key, value in _param_slots(graph, registry):
        if not _level_ok(value, level):
            shape = "unset" if isinstance(value, Unset) else type(value).__name__.lower()
            findings.append(_finding(
                "R6", [owner],
                f"{key!r} on {owner!r} is {shape}, not allowed at {level.name} level",
            ))
    return findings


def _rule_parallel_conflicts(graph: ScenarioGraph, registry: Registry) -> List[Finding]:
    """Two maneuvers conflict when the same actor could run both at once.

    Structural approximation: neither node is an ancestor of the other
    and both funnel into a common merge point (a join node or the end
    node, which joins all paths).
    """
    succ, _ = _adjacency(graph)
    maneuvers = [n for n in graph.nodes if n.kind is NodeKind.Maneuver]
    descendants = {n.id: _reachable(succ.get(n.id, []), succ) for n in maneuvers}
    merge_ids = {n.id for n in graph.nodes if n.kind in (NodeKind.Join, NodeKind.EndNode)}
    findings = []
    for i, a in enumerate(maneuvers):
        for b in maneuvers[i + 1:]:
            if a.payload.ref_actor != b.payload.ref_actor:
                continue
            if not registry.conflicting(a.payload.action_type, b.payload.action_type):
                continue
            if b.id in descendants[a.id] or a.id in descendants[b.id]:
                continue  # sequential, not parallel
            if descendants[a.id] & descendants[b.id] & merge_ids:
                pair = tuple(sorted((a.id, b.id)))
                findings.append(_finding(
                    "R7", pair,
                    f"actor {a.payload.ref_actor!r} may run {a.payload.action_type} and "
                    f"{b.payload.action_type} in parallel",
                ))
    return findings


def _rule_plausibility(graph: ScenarioGraph, registry: Registry) -> List[Finding]:
    findings = []
    for node in graph.nodes:
        payload = node.payload
        if not isinstance(payload, ActionNode) or not registry.has_action(payload.action_type):
            continue
        actor = graph.actor(payload.ref_actor)
        if actor is None:
            continue  # R10 territory
        limits = registry.limits(actor.category.value)
        for spec in registry.action(payload.action_type).params:
            value = payload.params.get(spec.name, UNSET)
            problem = _bound_problem(value, spec.dimension, limits)
            if problem:
                findings.append(_finding(
                    "R8", [node.id],
                    f"{spec.name}={value.value} on {node.id!r} {problem} for a "
                    f"{actor.category.value}",
                ))
    for actor in graph.actors:
        limits = registry.limits(actor.category.value)
        problem = _bound_problem(actor.start_speed, "speed", limits)
        if problem:
            findings.append(_finding(
                "R8", [f"actor:{actor.id}"],
                f"start_speed={actor.start_speed.value} {problem} for a {actor.category.value}",
            ))
    return findings


def _bound_problem(value, dimension, limits):
    if dimension is None or not isinstance(value, Scalar):
        return None
    if not isinstance(value.value, (int, float)):
        return None
    magnitude = value.value
    if dimension == "speed" and not 0 <= magnitude <= limits.max_speed:
        return f"is outside the plausible speed range 0..{limits.max_speed} m/s"
    if dimension == "acceleration" and abs(magnitude) > limits.max_acceleration:
        return f"exceeds the plausible acceleration bound {limits.max_acceleration} m/s^2"
    return None


def _rule_acyclic(graph: ScenarioGraph) -> List[Finding]:
    on_cycle = _cycle_nodes(graph)
    if on_cycle:
        return [_finding("R9", on_cycle, "graph contains a cycle")]
    return []


def _rule_references(graph: ScenarioGraph, registry: Registry) -> List[Finding]:
    findings = []
    for node in graph.nodes:
        payload = node.payload
        if isinstance(payload, ActionNode):
            findings.extend(_check_action_refs(graph, node, payload, registry))
        elif isinstance(payload, ModuleInstanceNode):
            findings.extend(_check_instance_refs(graph, node, payload, registry))
    return findings


def _check_action_refs(graph, node, payload, registry):
    findings = []
    actor = graph.actor(payload.ref_actor)
    if actor is None:
        findings.append(_finding(
            "R10", [node.id],
            f"reference actor {payload.ref_actor!r} of {node.id!r} does not resolve",
        ))
    if not registry.has_action(payload.action_type):
        findings.append(_finding(
            "R10", [node.id], f"unknown action type {payload.action_type!r} on {node.id!r}",
        ))
        return findings
    action = registry.action(payload.action_type)
    if actor is not None and actor.category.value not in action.allowed_actor_categories:
        findings.append(_finding(
            "R10", [node.id],
            f"a {actor.category.value} cannot execute {action.name} ({node.id!r})",
        ))
    if action.two_actor:
        if payload.target_actor is None:
            findings.append(_finding(
                "R10", [node.id], f"two-actor action {action.name} on {node.id!r} needs a target actor",
            ))
        elif graph.actor(payload.target_actor) is None:
            findings.append(_finding(
                "R10", [node.id],
                f"target actor {payload.target_actor!r} of {node.id!r} does not resolve",
            ))
    elif payload.target_actor is not None:
        findings.append(_finding(
            "R10", [node.id],
            f"single-actor action {action.name} on {node.id!r} must not name a target actor",
        ))
    return findings


def _check_instance_refs(graph, node, payload, registry):
    findings = []
    module = graph.module_def(payload.def_name)
    if module is None:
        return [_finding(
            "R10", [node.id], f"module instance {node.id!r} references unknown module "
            f"{payload.def_name!r}",
        )]
    for role in module.roles:
        if role not in payload.bindings:
            findings.append(_finding(
                "R10", [node.id], f"role {role!r} of {node.id!r} is not bound",
            ))
            continue
        actor = graph.actor(payload.bindings[role])
        if actor is None:
            findings.append(_finding(
                "R10", [node.id],
                f"role {role!r} of {node.id!r} is bound to unknown actor "
                f"{payload.bindings[role]!r}",
            ))
            continue
        for element in module_roles_used_by(module, role):
            if not registry.has_action(element.payload.action_type):
                continue
            action = registry.action(element.payload.action_type)
            if element.payload.ref_actor == role and \
                    actor.category.value not in action.allowed_actor_categories:
                findings.append(_finding(
                    "R10", [node.id],
                    f"a {actor.category.value} cannot execute {action.name} "
                    f"(role {role!r} of {node.id!r})",
                ))
    return findings


# -- driver ----------------------------------------------------------------


def validate(graph: ScenarioGraph, registry: Registry = DEFAULT_REGISTRY) -> ValidationReport:
    """Run all rules; returns a deterministic report, never raises on content."""
    working = graph
    expansion_failure = None
    if has_module_instances(graph):
        try:
            working = effective_graph(graph)
        except ScenarioError as exc:
            expansion_failure = exc
            working = graph

    findings: List[Finding] = []
    findings.extend(_rule_terminals(working))
    findings.extend(_rule_terminal_edges(working))
    findings.extend(_rule_path_coverage(working))
    findings.extend(_rule_join_arity(working))
    findings.extend(_rule_level(working, registry))
    findings.extend(_rule_parallel_conflicts(working, registry))
    findings.extend(_rule_plausibility(working, registry))
    findings.extend(_rule_acyclic(working))
    findings.extend(_rule_references(working, registry))
    if expansion_failure is not None:
        findings.append(_finding(
            "R10", [], f"module expansion failed: {expansion_failure}",
        ))

    findings.sort(key=lambda f: (f.node_ids[0] if f.node_ids else "", _rule_number(f.rule_id)))
    return ValidationReport(findings)


def _rule_number(rule_id: str) -> int:
    return int(rule_id[1:])
