"""Shipped example scenarios: two urban intersection scenarios and friends.

The world is map-free 2D with the intersection at the origin. UIS1: the
ego car drives north on lane x=-2 and turns right onto the eastbound
lane y=2; a bike waits on lane x=+6, starts when the ego comes within
its trigger radius, accelerates north, and crosses the eastbound lane —
so the ego's exit path crosses the bike's path, and parameter choice
decides whether they meet. UIS2 reuses the bike's trigger/accelerate/
arrive sequence as the CrossingManeuver module, re-bound to a pedestrian
triggered by an oncoming car, while the ego turns left instead.

Run `python -m scenograph.fixtures <dir>` to regenerate the fixture files.
"""

from __future__ import annotations

from .model import (
    AbstractionLevel,
    ActorCategory,
    Edge,
    GraphNode,
    JoinPolicy,
    ModuleDef,
    NodeKind,
    Pose2D,
    ScenarioGraph,
    new_graph,
)
from .modules import define_module, instantiate
from .params import UNSET, DiscreteSet, Range, Scalar

HALF_PI = 1.5707963267948966


def _pose(x, y, heading) -> Pose2D:
    return Pose2D(Scalar(x, "m"), Scalar(y, "m"), Scalar(heading, "rad"))


def _environment(graph: ScenarioGraph) -> None:
    graph.set_environment("time_of_day", Scalar(12, "h"))
    graph.set_environment("cloud_cover", Scalar(0.25, "ratio"))


def build_uis1() -> ScenarioGraph:
    """First urban intersection scenario: ego turns right, bike crosses."""
    graph = new_graph("UIS1", "urban_intersection", AbstractionLevel.Concrete)
    _environment(graph)
    graph.add_actor("ego", "Ego vehicle", ActorCategory.FourWheeler, model="sedan",
                    is_ego=True, start_pose=_pose(-2, -30, HALF_PI),
                    start_speed=Scalar(8, "m/s"))
    graph.add_actor("bike", "Bike", ActorCategory.TwoWheeler, model="bike",
                    start_pose=_pose(6, -12, HALF_PI), start_speed=Scalar(0, "m/s"))

    graph.add_maneuver("DriveDistance", "ego", params={"distance": Scalar(26, "m")},
                       node_id="ego_approach")
    graph.add_maneuver("TurnRight", "ego",
                       params={"turn_radius": Scalar(6, "m"),
                               "heading_change": Scalar(HALF_PI, "rad")},
                       node_id="ego_turn")
    graph.add_maneuver("DriveDistance", "ego", params={"distance": Scalar(20, "m")},
                       node_id="ego_exit")
    graph.add_condition("InLocationRadius", "ego",
                        params={"x": Scalar(24, "m"), "y": Scalar(2, "m"),
                                "radius": Scalar(3, "m")},
                        node_id="sync1")
    graph.add_condition("InVehicleRadius", "bike", target_actor="ego",
                        params={"radius": Scalar(16, "m")}, node_id="sync2")
    graph.add_maneuver("Accelerate", "bike",
                       params={"target_velocity": Scalar(6, "m/s"),
                               "throttle": Scalar(0.7, "ratio")},
                       node_id="bike_accel")
    graph.add_condition("InLocationRadius", "bike",
                        params={"x": Scalar(6, "m"), "y": Scalar(14, "m"),
                                "radius": Scalar(3, "m")},
                        node_id="sync3")

    graph.connect("root", "ego_approach")
    graph.connect("ego_approach", "ego_turn")
    graph.connect("ego_turn", "ego_exit")
    graph.connect("ego_exit", "sync1")
    graph.connect("sync1", "end")
    graph.connect("root", "sync2")
    graph.connect("sync2", "bike_accel")
    graph.connect("bike_accel", "sync3")
    graph.connect("sync3", "end")
    return graph


def build_uis1_logical() -> ScenarioGraph:
    """Logical UIS1: bike speed swept over a range, trigger radius over a set.

    12 variants; the 8 m lateral gap between the lanes makes the radius-5
    rows unreachable (the bike never starts), and raising the bike speed
    moves its crossing into the ego's path.
    """
    graph = build_uis1()
    graph.name = "UIS1-logical"
    graph.abstraction_level = AbstractionLevel.Logical
    graph.set_parameter("bike_accel", "target_velocity", Range(3, 8, 1, "m/s"))
    graph.set_parameter("sync2", "radius", DiscreteSet([5, 10], "m"))
    return graph


def build_uis1_functional() -> ScenarioGraph:
    """Functional UIS1 sketch: the bike leg is left unparameterized."""
    graph = build_uis1()
    graph.name = "UIS1-functional"
    graph.abstraction_level = AbstractionLevel.Functional
    graph.set_parameter("bike_accel", "target_velocity", UNSET)
    graph.set_parameter("bike_accel", "throttle", UNSET)
    graph.set_parameter("sync2", "radius", UNSET)
    return graph


def crossing_module() -> ModuleDef:
    """The bike's trigger/accelerate/arrive sequence as a reusable module."""
    elements = [
        GraphNode("m_sync", NodeKind.Condition, _action(
            "InVehicleRadius", "Condition", "crosser", "trigger",
            {"radius": Scalar(15, "m")},
        )),
        GraphNode("m_accel", NodeKind.Maneuver, _action(
            "Accelerate", "Longitudinal", "crosser", None,
            {"target_velocity": Scalar(6, "m/s"), "throttle": Scalar(0.7, "ratio")},
        )),
        GraphNode("m_dest", NodeKind.Condition, _action(
            "InLocationRadius", "Condition", "crosser", None,
            {"x": Scalar(6, "m"), "y": Scalar(14, "m"), "radius": Scalar(3, "m")},
        )),
    ]
    edges = [Edge("m_sync", "m_accel"), Edge("m_accel", "m_dest")]
    return define_module(
        "CrossingManeuver", elements, edges,
        in_ports={"in": "m_sync"}, out_ports={"out": "m_dest"},
        roles=("crosser", "trigger"),
    )


def overtaking_module() -> ModuleDef:
    """Lane change left, pass the vehicle, lane change right."""
    elements = [
        GraphNode("o_out", NodeKind.Maneuver, _action(
            "LaneChangeLeft", "Lateral", "overtaker", None,
            {"lateral_offset": Scalar(3.5, "m"), "duration": Scalar(2, "s")},
        )),
        GraphNode("o_pass", NodeKind.Maneuver, _action(
            "FollowVehicle", "Longitudinal", "overtaker", "overtaken",
            {"gap": Scalar(10, "m"), "duration": Scalar(5, "s")},
        )),
        GraphNode("o_in", NodeKind.Maneuver, _action(
            "LaneChangeRight", "Lateral", "overtaker", None,
            {"lateral_offset": Scalar(3.5, "m"), "duration": Scalar(2, "s")},
        )),
    ]
    edges = [Edge("o_out", "o_pass"), Edge("o_pass", "o_in")]
    return define_module(
        "OvertakingManeuver", elements, edges,
        in_ports={"in": "o_out"}, out_ports={"out": "o_in"},
        roles=("overtaker", "overtaken"),
    )


def _action(action_type, category, ref, target, params):
    from .model import ActionNode

    return ActionNode(action_type, category, ref, target, params)


def build_uis2() -> ScenarioGraph:
    """Second urban intersection scenario: ego turns left, oncoming car
    crosses straight, pedestrian crosses via the CrossingManeuver module."""
    graph = new_graph("UIS2", "urban_intersection", AbstractionLevel.Concrete)
    _environment(graph)
    graph.add_actor("ego", "Ego vehicle", ActorCategory.FourWheeler, model="sedan",
                    is_ego=True, start_pose=_pose(-2, -30, HALF_PI),
                    start_speed=Scalar(8, "m/s"))
    graph.add_actor("car", "Oncoming car", ActorCategory.FourWheeler, model="sedan",
                    start_pose=_pose(-12, 55, -HALF_PI), start_speed=Scalar(7, "m/s"))
    graph.add_actor("ped", "Pedestrian", ActorCategory.Pedestrian, model="walker",
                    start_pose=_pose(-6, -10, HALF_PI), start_speed=Scalar(0, "m/s"))

    graph.add_maneuver("DriveDistance", "ego", params={"distance": Scalar(26, "m")},
                       node_id="ego_approach")
    graph.add_maneuver("TurnLeft", "ego",
                       params={"turn_radius": Scalar(6, "m"),
                               "heading_change": Scalar(HALF_PI, "rad")},
                       node_id="ego_turn")
    graph.add_maneuver("DriveDistance", "ego", params={"distance": Scalar(20, "m")},
                       node_id="ego_exit")
    graph.add_condition("InLocationRadius", "ego",
                        params={"x": Scalar(-26, "m"), "y": Scalar(2, "m"),
                                "radius": Scalar(3, "m")},
                        node_id="sync1")
    graph.add_condition("InLocationRadius", "ego",
                        params={"x": Scalar(-2, "m"), "y": Scalar(-2, "m"),
                                "radius": Scalar(4, "m")},
                        node_id="sync2")
    graph.add_maneuver("DriveDistance", "car", params={"distance": Scalar(30, "m")},
                       node_id="car_drive")
    instantiate(graph, crossing_module(), {"crosser": "ped", "trigger": "car"},
                overrides={
                    "m_sync": {"radius": Scalar(15, "m")},
                    "m_accel": {"target_velocity": Scalar(1.5, "m/s"),
                                "throttle": Scalar(0.7, "ratio")},
                    "m_dest": {"x": Scalar(-6, "m"), "y": Scalar(4, "m"),
                               "radius": Scalar(2, "m")},
                },
                node_id="cross")

    graph.connect("root", "ego_approach")
    graph.connect("ego_approach", "ego_turn")
    graph.connect("ego_turn", "ego_exit")
    graph.connect("ego_exit", "sync1")
    graph.connect("sync1", "end")
    graph.connect("root", "sync2")
    graph.connect("sync2", "car_drive")
    graph.connect("car_drive", "end")
    graph.connect("root", "cross", dst_port="in")
    graph.connect("cross", "end", src_port="out")
    return graph


def build_bad_join() -> ScenarioGraph:
    """Schema-valid graph whose join has a single incoming sequence (R5)."""
    graph = new_graph("bad-join", "urban_intersection", AbstractionLevel.Concrete)
    graph.add_actor("car", "Car", ActorCategory.FourWheeler, model="sedan",
                    start_pose=_pose(0, 0, 0), start_speed=Scalar(5, "m/s"))
    graph.add_maneuver("KeepVelocity", "car",
                       params={"velocity": Scalar(5, "m/s"), "duration": Scalar(1, "s")},
                       node_id="cruise")
    graph.add_join(JoinPolicy.AllFinished, node_id="join1")
    graph.connect("root", "cruise")
    graph.connect("cruise", "join1")
    graph.connect("join1", "end")
    return graph


def build_ped_50kmh() -> ScenarioGraph:
    """Pedestrian placed at 50 km/h start speed: triggers exactly R8."""
    graph = new_graph("ped-50kmh", "urban_intersection", AbstractionLevel.Concrete)
    graph.add_actor("walker", "Pedestrian", ActorCategory.Pedestrian, model="walker",
                    start_pose=_pose(0, 0, 0), start_speed=Scalar(13.9, "m/s"))
    graph.add_maneuver("Accelerate", "walker",
                       params={"target_velocity": Scalar(1.5, "m/s"),
                               "throttle": Scalar(0.5, "ratio")},
                       node_id="walk")
    graph.connect("root", "walk")
    graph.connect("walk", "end")
    return graph


FIXTURE_BUILDERS = {
    "uis1": build_uis1,
    "uis2": build_uis2,
    "uis1_logical": build_uis1_logical,
    "uis1_functional": build_uis1_functional,
    "bad_join": build_bad_join,
    "ped_50kmh": build_ped_50kmh,
}


def write_fixtures(target_dir) -> None:
    """Regenerate the committed fixture files, goldens included."""
    from pathlib import Path

    from .cli import format_sweep_table, sweep_rows
    from .executor import TickConfig
    from .library import module_text
    from .registry import DEFAULT_REGISTRY
    from .serialize import save
    from .xosc import export

    target = Path(target_dir)
    (target / "golden").mkdir(parents=True, exist_ok=True)
    for name, builder in FIXTURE_BUILDERS.items():
        save(builder(), target / f"{name}.json")
    for name in ("uis1", "uis2"):
        document = export(FIXTURE_BUILDERS[name]())
        (target / "golden" / f"{name}.xosc").write_bytes(document.text.encode("utf-8"))
    rows = sweep_rows(build_uis1_logical(), TickConfig(), DEFAULT_REGISTRY)
    (target / "uis1_logical_sweep.csv").write_text(format_sweep_table(rows), encoding="utf-8")
    (target / "crossing_maneuver.module.json").write_text(
        module_text(crossing_module()), encoding="utf-8")
    (target / "overtaking_maneuver.module.json").write_text(
        module_text(overtaking_module()), encoding="utf-8")


if __name__ == "__main__":
    import sys

    write_fixtures(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
