import pytest

from scenograph.errors import (
    DuplicateEdge,
    DuplicateTerminal,
    InvalidArgument,
    UnknownAction,
    UnknownNode,
    UnknownParameter,
)
from scenograph.model import (
    AbstractionLevel,
    ActorCategory,
    JoinPolicy,
    NodeKind,
    new_graph,
)
from scenograph.params import UNSET, Range, Scalar

from conftest import single_actor_graph


def test_new_graph_has_exactly_root_and_end():
    graph = new_graph("UIS1", "urban_intersection", AbstractionLevel.Concrete)
    kinds = [n.kind for n in graph.nodes]
    assert kinds == [NodeKind.RootNode, NodeKind.EndNode]
    assert graph.edges == []
    assert graph.actors == []


def test_new_graph_level_is_stored():
    graph = new_graph("UIS2", "urban_intersection", AbstractionLevel.Logical)
    assert graph.abstraction_level is AbstractionLevel.Logical


def test_new_graph_rejects_empty_name():
    with pytest.raises(InvalidArgument):
        new_graph("", "m", AbstractionLevel.Functional)


def test_add_second_terminal_is_rejected():
    graph = single_actor_graph()
    with pytest.raises(DuplicateTerminal):
        graph.add_node(NodeKind.RootNode)
    with pytest.raises(DuplicateTerminal):
        graph.add_node(NodeKind.EndNode)
    assert sum(1 for n in graph.nodes if n.kind is NodeKind.RootNode) == 1
    assert sum(1 for n in graph.nodes if n.kind is NodeKind.EndNode) == 1


def test_add_maneuver_with_params():
    graph = single_actor_graph()
    node_id = graph.add_maneuver(
        "Accelerate", "car",
        params={"target_velocity": Scalar(5, "m/s"), "throttle": Scalar(0.7, "ratio")},
    )
    node = graph.node(node_id)
    assert node.kind is NodeKind.Maneuver
    assert node.payload.category == "Longitudinal"
    assert node.payload.params["target_velocity"] == Scalar(5, "m/s")


def test_unknown_action_type_rejected():
    graph = single_actor_graph()
    with pytest.raises(UnknownAction):
        graph.add_maneuver("Levitate", "car")


def test_condition_and_maneuver_kinds_must_match_registry():
    graph = single_actor_graph()
    with pytest.raises(InvalidArgument):
        graph.add_maneuver("InLocationRadius", "car")
    with pytest.raises(InvalidArgument):
        graph.add_condition("Accelerate", "car")


def test_two_actor_condition():
    graph = single_actor_graph()
    graph.add_actor("ego", "Ego", ActorCategory.FourWheeler, is_ego=True)
    node_id = graph.add_condition(
        "InVehicleRadius", "car", target_actor="ego",
        params={"radius": Scalar(10, "m")},
    )
    assert graph.node(node_id).payload.target_actor == "ego"


def test_connect_and_errors():
    graph = single_actor_graph()
    a = graph.add_condition("TimeElapsed", "car", params={"duration": Scalar(1, "s")})
    edge_id = graph.connect("root", a)
    assert edge_id.startswith("e")
    with pytest.raises(InvalidArgument):
        graph.connect(a, a)
    with pytest.raises(UnknownNode):
        graph.connect("root", "ghost")
    with pytest.raises(DuplicateEdge):
        graph.connect("root", a)


def test_cycles_are_allowed_at_mutation_time():
    graph = single_actor_graph()
    a = graph.add_condition("TimeElapsed", "car", params={"duration": Scalar(1, "s")})
    b = graph.add_condition("TimeElapsed", "car", params={"duration": Scalar(2, "s")})
    graph.connect(a, b)
    graph.connect(b, a)  # validation reports R9; mutation holds the state


def test_set_parameter_stores_verbatim():
    graph = single_actor_graph()
    node_id = graph.add_maneuver("Accelerate", "car")
    graph.set_parameter(node_id, "target_velocity", Range(3, 8, 1, "m/s"))
    assert graph.node(node_id).payload.params["target_velocity"] == Range(3, 8, 1, "m/s")
    graph.set_parameter(node_id, "target_velocity", UNSET)
    assert graph.node(node_id).payload.params["target_velocity"] is UNSET


def test_set_parameter_rejects_undeclared_key():
    graph = single_actor_graph()
    node_id = graph.add_maneuver("Accelerate", "car")
    with pytest.raises(UnknownParameter):
        graph.set_parameter(node_id, "color", Scalar("red"))


def test_unique_actor_and_node_ids():
    graph = single_actor_graph()
    with pytest.raises(InvalidArgument):
        graph.add_actor("car", "Duplicate", ActorCategory.TwoWheeler)
    graph.add_join(JoinPolicy.AllFinished, node_id="j")
    with pytest.raises(InvalidArgument):
        graph.add_join(JoinPolicy.OneFinished, node_id="j")


def test_single_ego():
    graph = single_actor_graph()
    graph.add_actor("ego", "Ego", ActorCategory.FourWheeler, is_ego=True)
    with pytest.raises(InvalidArgument):
        graph.add_actor("ego2", "Ego again", ActorCategory.FourWheeler, is_ego=True)


def test_fresh_ids_do_not_collide():
    graph = single_actor_graph()
    graph.add_join(JoinPolicy.AllFinished, node_id="n1")
    generated = graph.add_join(JoinPolicy.AllFinished)
    assert generated != "n1"
    assert graph.has_node(generated)
