"""Shared fixtures and random graph generators for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from scenograph.model import (
    AbstractionLevel,
    ActionNode,
    ActorCategory,
    Edge,
    GraphNode,
    JoinPolicy,
    NodeKind,
    Pose2D,
    ScenarioGraph,
    new_graph,
)
from scenograph.modules import define_module, instantiate
from scenograph.params import UNSET, DiscreteSet, Range, Scalar

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def quick_pose(x=0.0, y=0.0, heading=0.0) -> Pose2D:
    return Pose2D(Scalar(x, "m"), Scalar(y, "m"), Scalar(heading, "rad"))


def single_actor_graph(name="g", level=AbstractionLevel.Concrete) -> ScenarioGraph:
    graph = new_graph(name, "testmap", level)
    graph.add_actor("car", "Car", ActorCategory.FourWheeler, model="sedan",
                    start_pose=quick_pose(), start_speed=Scalar(5, "m/s"))
    return graph


# -- generator for executable graphs (valid by construction) ----------------


def random_executable_graph(rng: random.Random, max_nodes: int = 12) -> ScenarioGraph:
    """Small valid concrete graph out of waits, cruising, and joins.

    Built head-first: every new node continues some open head, joins
    merge at least two heads, and all remaining heads finish at the end
    node, so R1-R10 hold by construction. Single actor, so runs cannot
    collide and always complete.
    """
    graph = single_actor_graph(f"rand{rng.randrange(1 << 30)}")
    heads = ["root"]
    count = rng.randrange(2, max_nodes - 1)
    for i in range(count):
        choice = rng.random()
        if choice < 0.25 and len(heads) >= 2:
            policy = JoinPolicy.AllFinished if rng.random() < 0.6 else JoinPolicy.OneFinished
            join_id = graph.add_join(policy, node_id=f"join{i}")
            picked = rng.sample(heads, rng.randrange(2, len(heads) + 1))
            for head in picked:
                graph.connect(head, join_id)
                heads.remove(head)
            heads.append(join_id)
            continue
        source = rng.choice(heads)
        if rng.random() < 0.6:
            node_id = graph.add_condition(
                "TimeElapsed", "car",
                params={"duration": Scalar(round(rng.uniform(0.1, 1.5), 2), "s")},
                node_id=f"wait{i}",
            )
        else:
            node_id = graph.add_maneuver(
                "KeepVelocity", "car",
                params={"velocity": Scalar(rng.randrange(2, 9), "m/s"),
                        "duration": Scalar(round(rng.uniform(0.1, 1.0), 2), "s")},
                node_id=f"cruise{i}",
            )
        graph.connect(source, node_id)
        if rng.random() < 0.7:
            heads.remove(source)  # sequence: consume the head; else branch
        heads.append(node_id)
    for head in heads:
        graph.connect(head, "end")
    return graph


# -- generator for serialization round-trips (structure over validity) ------

_PARAM_POOL = (
    lambda rng: UNSET,
    lambda rng: Scalar(rng.randrange(-50, 50), "m"),
    lambda rng: Scalar(round(rng.uniform(-10, 10), 4), "m/s"),
    lambda rng: Scalar(rng.choice(["dry", "wet", "dusk"]), ""),
    lambda rng: Range(float(rng.randrange(0, 5)), float(rng.randrange(5, 12)),
                      rng.choice([0.5, 1.0, 2.0]), "m/s"),
    lambda rng: DiscreteSet([rng.randrange(1, 9) for _ in range(rng.randrange(1, 4))], "m"),
)


def _random_param(rng: random.Random):
    return rng.choice(_PARAM_POOL)(rng)


def _random_chain_module(rng: random.Random, name: str, inner_name=None):
    """Chain-shaped module definition, optionally nesting another module."""
    elements = []
    edges = []
    previous = None
    roles = ("mover", "other")
    length = rng.randrange(1, 4)
    for i in range(length):
        element_id = f"{name}_el{i}"
        if rng.random() < 0.5:
            payload = ActionNode("InVehicleRadius", "Condition", "mover", "other",
                                 {"radius": _random_param(rng)})
            kind = NodeKind.Condition
        else:
            payload = ActionNode("Accelerate", "Longitudinal", "mover", None,
                                 {"target_velocity": _random_param(rng),
                                  "throttle": _random_param(rng)})
            kind = NodeKind.Maneuver
        elements.append(GraphNode(element_id, kind, payload))
        if previous is not None:
            edges.append(Edge(previous, element_id))
        previous = element_id
    if inner_name is not None:
        from scenograph.model import ModuleInstanceNode

        instance_id = f"{name}_sub"
        elements.append(GraphNode(instance_id, NodeKind.ModuleInstance, ModuleInstanceNode(
            inner_name, {"mover": "mover", "other": "other"},
            {},
        )))
        edges.append(Edge(previous, instance_id))
        previous = instance_id
    return define_module(
        name, elements, edges,
        in_ports={"start": elements[0].id}, out_ports={"finish": previous},
        roles=roles,
    )


def random_document_graph(rng: random.Random) -> ScenarioGraph:
    """Arbitrary well-formed graph exercising every encodable construct."""
    graph = new_graph(f"doc{rng.randrange(1 << 30)}", rng.choice(["north", "south_map"]),
                      rng.choice(list(AbstractionLevel)))
    if rng.random() < 0.7:
        graph.set_environment("time_of_day", _random_param(rng))
    if rng.random() < 0.4:
        graph.set_environment("precipitation", _random_param(rng))
    categories = [ActorCategory.FourWheeler, ActorCategory.TwoWheeler]
    for index in range(rng.randrange(1, 4)):
        graph.add_actor(
            f"actor{index}", f"Actor {index}", rng.choice(categories),
            model=rng.choice(["sedan", "bike", ""]),
            is_ego=index == 0 and rng.random() < 0.5,
            start_pose=Pose2D(_random_param(rng), _random_param(rng), _random_param(rng)),
            start_speed=_random_param(rng),
        )
    actor_ids = [a.id for a in graph.actors]

    previous = "root"
    for i in range(rng.randrange(1, 6)):
        kind = rng.random()
        if kind < 0.4:
            node_id = graph.add_maneuver(
                "Accelerate", rng.choice(actor_ids),
                params={"target_velocity": _random_param(rng), "throttle": _random_param(rng)},
                node_id=f"node{i}",
            )
        elif kind < 0.7:
            node_id = graph.add_condition(
                "InLocationRadius", rng.choice(actor_ids),
                params={"x": _random_param(rng), "y": _random_param(rng),
                        "radius": _random_param(rng)},
                node_id=f"node{i}",
            )
        else:
            node_id = graph.add_join(
                rng.choice([JoinPolicy.AllFinished, JoinPolicy.OneFinished]),
                node_id=f"node{i}",
            )
        graph.connect(previous, node_id)
        previous = node_id

    depth = rng.randrange(0, 4)  # nesting depth of module definitions
    if depth:
        names = [f"mod{rng.randrange(1 << 20)}_{level}" for level in range(depth)]
        inner = None
        module = None
        for level, name in enumerate(names):
            module = _random_chain_module(rng, name, inner)
            graph.add_module_def(module)
            inner = name
        instance_id = instantiate(
            graph, module,
            {"mover": rng.choice(actor_ids), "other": rng.choice(actor_ids)},
            overrides={module.elements[0].id: {
                next(iter(module.elements[0].payload.params)): _random_param(rng)}}
            if rng.random() < 0.5 and isinstance(module.elements[0].payload, ActionNode)
            else None,
            node_id=f"inst{rng.randrange(1 << 20)}",
        )
        graph.connect(previous, instance_id, dst_port="start")
        graph.connect(instance_id, "end", src_port="finish")
    else:
        graph.connect(previous, "end")
    return graph
