import random

import pytest

from scenograph.errors import UnknownRule
from scenograph.model import (
    AbstractionLevel,
    ActorCategory,
    JoinPolicy,
    NodeKind,
    new_graph,
)
from scenograph.params import UNSET, Range, Scalar
from scenograph.serialize import from_document, to_document
from scenograph.validation import explain, validate

from conftest import random_executable_graph, single_actor_graph
from scenograph.fixtures import build_bad_join, build_ped_50kmh, build_uis1


def rule_ids(report):
    return sorted({f.rule_id for f in report.findings})


# -- per-rule minimal failing and passing fixtures ---------------------------


def test_r1_r2_terminal_counts():
    doc = to_document(build_uis1())
    doc["nodes"].append({"id": "root2", "kind": "RootNode"})
    report = validate(from_document(doc))
    assert "R1" in rule_ids(report) and not report.is_valid

    doc = to_document(build_uis1())
    doc["nodes"] = [n for n in doc["nodes"] if n["id"] != "end"]
    doc["edges"] = [e for e in doc["edges"] if e["to"] != "end"]
    report = validate(from_document(doc))
    assert "R2" in rule_ids(report)

    assert validate(build_uis1()).is_valid


def test_r3_terminal_connectivity():
    graph = single_actor_graph()
    wait = graph.add_condition("TimeElapsed", "car", params={"duration": Scalar(1, "s")})
    graph.connect("root", wait)
    graph.connect(wait, "end")
    graph.connect("end", "root")  # both directions wrong at once
    report = validate(graph)
    r3 = report.by_rule("R3")
    assert len(r3) == 2 and not report.is_valid

    clean = single_actor_graph()
    wait = clean.add_condition("TimeElapsed", "car", params={"duration": Scalar(1, "s")})
    clean.connect("root", wait)
    clean.connect(wait, "end")
    assert not validate(clean).by_rule("R3")


def test_r4_dangling_node_flagged():
    graph = single_actor_graph()
    wait = graph.add_condition("TimeElapsed", "car", params={"duration": Scalar(1, "s")})
    graph.connect("root", wait)
    graph.connect(wait, "end")
    orphan = graph.add_maneuver("Stop", "car", params={"deceleration": Scalar(2, "m/s^2")})
    report = validate(graph)
    findings = report.by_rule("R4")
    assert [f.node_ids for f in findings] == [(orphan,)]
    graph.connect(wait, orphan)
    graph.connect(orphan, "end")
    assert not validate(graph).by_rule("R4")


def test_r4_agrees_with_brute_force_path_enumeration():
    rng = random.Random(4242)
    for _ in range(60):
        graph = single_actor_graph()
        count = rng.randrange(1, 10)
        ids = [
            graph.add_condition("TimeElapsed", "car",
                                params={"duration": Scalar(1, "s")}, node_id=f"c{i}")
            for i in range(count)
        ]
        every = ["root"] + ids + ["end"]
        for i, src in enumerate(every):
            for dst in every[i + 1:]:
                if src == "root" and dst == "end":
                    continue
                if rng.random() < 0.25:
                    graph.connect(src, dst)

        # oracle: enumerate all root->end paths
        on_path = set()
        def walk(node, path):
            if node == "end":
                on_path.update(path)
                return
            for edge in graph.edges:
                if edge.src == node:
                    walk(edge.dst, path + [edge.dst])
        walk("root", ["root"])

        flagged = {f.node_ids[0] for f in validate(graph).by_rule("R4")}
        for node_id in ids:
            assert (node_id not in on_path) == (node_id in flagged)


def test_r5_join_arity():
    report = validate(build_bad_join())
    assert rule_ids(report) == ["R5"]
    assert not report.is_valid

    graph = single_actor_graph()
    a = graph.add_condition("TimeElapsed", "car", params={"duration": Scalar(1, "s")})
    b = graph.add_condition("TimeElapsed", "car", params={"duration": Scalar(2, "s")})
    join = graph.add_join(JoinPolicy.AllFinished)
    graph.connect("root", a)
    graph.connect("root", b)
    graph.connect(a, join)
    graph.connect(b, join)
    graph.connect(join, "end")
    assert not validate(graph).by_rule("R5")


def test_r6_level_completeness():
    logical = single_actor_graph(level=AbstractionLevel.Logical)
    node = logical.add_maneuver("Accelerate", "car",
                                params={"target_velocity": UNSET,
                                        "throttle": Scalar(0.5, "ratio")})
    logical.connect("root", node)
    logical.connect(node, "end")
    report = validate(logical)
    assert report.by_rule("R6") and not report.is_valid

    concrete = single_actor_graph(level=AbstractionLevel.Concrete)
    node = concrete.add_maneuver("Accelerate", "car",
                                 params={"target_velocity": Range(3, 8, 1, "m/s"),
                                         "throttle": Scalar(0.5, "ratio")})
    concrete.connect("root", node)
    concrete.connect(node, "end")
    assert validate(concrete).by_rule("R6")

    functional = single_actor_graph(level=AbstractionLevel.Functional)
    node = functional.add_maneuver("Accelerate", "car", params={})
    functional.connect("root", node)
    functional.connect(node, "end")
    assert not validate(functional).by_rule("R6")


def test_r6_missing_required_param_counts_as_unset():
    graph = single_actor_graph(level=AbstractionLevel.Concrete)
    node = graph.add_maneuver("Accelerate", "car",
                              params={"target_velocity": Scalar(5, "m/s")})
    graph.connect("root", node)
    graph.connect(node, "end")
    findings = validate(graph).by_rule("R6")
    assert any("throttle" in f.message for f in findings)


def test_r7_documented_conflict_found_exactly_once():
    graph = single_actor_graph()
    accel = graph.add_maneuver("Accelerate", "car",
                               params={"target_velocity": Scalar(8, "m/s"),
                                       "throttle": Scalar(0.5, "ratio")})
    decel = graph.add_maneuver("Decelerate", "car",
                               params={"target_velocity": Scalar(0, "m/s"),
                                       "brake": Scalar(0.5, "ratio")})
    join = graph.add_join(JoinPolicy.AllFinished)
    graph.connect("root", accel)
    graph.connect("root", decel)
    graph.connect(accel, join)
    graph.connect(decel, join)
    graph.connect(join, "end")
    report = validate(graph)
    findings = report.by_rule("R7")
    assert len(findings) == 1
    assert findings[0].severity == "Warning"
    assert set(findings[0].node_ids) == {accel, decel}
    assert report.is_valid  # warnings do not invalidate


def test_r7_sequential_maneuvers_do_not_conflict():
    graph = single_actor_graph()
    accel = graph.add_maneuver("Accelerate", "car",
                               params={"target_velocity": Scalar(8, "m/s"),
                                       "throttle": Scalar(0.5, "ratio")})
    decel = graph.add_maneuver("Decelerate", "car",
                               params={"target_velocity": Scalar(0, "m/s"),
                                       "brake": Scalar(0.5, "ratio")})
    graph.connect("root", accel)
    graph.connect(accel, decel)
    graph.connect(decel, "end")
    assert not validate(graph).by_rule("R7")


def test_r8_pedestrian_at_50_kmh_triggers_exactly_r8():
    report = validate(build_ped_50kmh())
    assert rule_ids(report) == ["R8"]
    assert report.is_valid
    finding = report.by_rule("R8")[0]
    assert "13.9" in finding.message

    calm = build_ped_50kmh()
    calm.actors[0].start_speed = Scalar(1.4, "m/s")
    assert not validate(calm).findings


def test_r8_checks_dimensioned_action_params():
    graph = single_actor_graph()
    graph.actors[0].category = ActorCategory.Pedestrian
    node = graph.add_maneuver("Accelerate", "car",
                              params={"target_velocity": Scalar(13.9, "m/s"),
                                      "throttle": Scalar(0.5, "ratio")})
    graph.connect("root", node)
    graph.connect(node, "end")
    assert validate(graph).by_rule("R8")


def test_r9_cycles():
    graph = single_actor_graph()
    a = graph.add_condition("TimeElapsed", "car", params={"duration": Scalar(1, "s")})
    b = graph.add_condition("TimeElapsed", "car", params={"duration": Scalar(2, "s")})
    graph.connect("root", a)
    graph.connect(a, b)
    graph.connect(b, a)
    graph.connect(b, "end")
    report = validate(graph)
    cycle = report.by_rule("R9")
    assert len(cycle) == 1 and set(cycle[0].node_ids) == {a, b}
    assert not validate(build_uis1()).by_rule("R9")


def test_r10_reference_integrity():
    graph = single_actor_graph()
    node = graph.add_maneuver("Accelerate", "ghost",
                              params={"target_velocity": Scalar(5, "m/s"),
                                      "throttle": Scalar(0.5, "ratio")})
    graph.connect("root", node)
    graph.connect(node, "end")
    assert validate(graph).by_rule("R10")

    graph = single_actor_graph()
    node = graph.add_maneuver("FollowVehicle", "car",
                              params={"gap": Scalar(10, "m"), "duration": Scalar(5, "s")})
    graph.connect("root", node)
    graph.connect(node, "end")
    findings = validate(graph).by_rule("R10")
    assert any("target" in f.message for f in findings)

    lane_ped = single_actor_graph()
    lane_ped.actors[0].category = ActorCategory.Pedestrian
    node = lane_ped.add_maneuver("LaneChangeLeft", "car",
                                 params={"lateral_offset": Scalar(3.5, "m"),
                                         "duration": Scalar(2, "s")})
    lane_ped.connect("root", node)
    lane_ped.connect(node, "end")
    assert validate(lane_ped).by_rule("R10")

    assert not validate(build_uis1()).by_rule("R10")


# -- report behaviour ---------------------------------------------------------


def test_reports_are_deterministic():
    graph = build_bad_join()
    first = validate(graph)
    second = validate(graph)
    assert first.to_json() == second.to_json()


def test_all_rules_always_run():
    # one graph violating several rules at once reports all of them
    doc = to_document(build_bad_join())
    doc["nodes"].append({"id": "root2", "kind": "RootNode"})
    doc["nodes"].append({
        "id": "orphan", "kind": "Maneuver", "action_type": "Stop",
        "category": "Longitudinal", "ref_actor": "nobody", "target_actor": None,
        "params": {"deceleration": {"scalar": 1, "unit": "m/s^2"}},
    })
    report = validate(from_document(doc))
    assert {"R1", "R4", "R5", "R10"} <= set(rule_ids(report))


def test_r6_monotonicity_across_levels():
    rng = random.Random(7)
    for _ in range(40):
        graph = random_executable_graph(rng)
        report_concrete = validate(graph)
        graph.abstraction_level = AbstractionLevel.Logical
        report_logical = validate(graph)
        graph.abstraction_level = AbstractionLevel.Functional
        report_functional = validate(graph)
        if report_concrete.is_valid:
            assert report_logical.is_valid
        if report_logical.is_valid:
            assert report_functional.is_valid


def test_explain():
    assert "root" in explain("R3")
    assert "bound" in explain("R8") or "fit" in explain("R8")
    with pytest.raises(UnknownRule):
        explain("R99")
