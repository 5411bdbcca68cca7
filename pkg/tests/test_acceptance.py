"""Acceptance suite: one test per release criterion, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the PASS lines.
"""

import random
import time

from scenograph.concretize import classify_level, enumerate_variant, plan
from scenograph.errors import LevelError
from scenograph.executor import TickConfig, run
from scenograph.model import AbstractionLevel, JoinPolicy, NodeKind
from scenograph.modules import flatten
from scenograph.params import Scalar
from scenograph.serialize import parse, serialize
from scenograph.validation import validate
from scenograph.xosc import export, verify_structure

from conftest import (
    FIXTURES,
    random_document_graph,
    random_executable_graph,
    single_actor_graph,
)
from scenograph.fixtures import (
    build_bad_join,
    build_ped_50kmh,
    build_uis1,
    build_uis1_functional,
    build_uis1_logical,
    build_uis2,
)


def _passed(name: str) -> None:
    print(f"[PASS] {name}")


def test_criterion_uis1_reproduction():
    """UIS1: structure, validity, golden export, Completed run, < 5 s."""
    started = time.monotonic()
    graph = build_uis1()

    actors = {a.id: a.category.value for a in graph.actors}
    assert actors == {"ego": "FourWheeler", "bike": "TwoWheeler"}
    assert graph.actor("ego").is_ego
    conditions = [n.payload.action_type for n in graph.nodes
                  if n.kind is NodeKind.Condition]
    assert sorted(conditions) == ["InLocationRadius", "InLocationRadius", "InVehicleRadius"]

    assert validate(graph).is_valid
    document = export(graph)
    assert document.text.encode("utf-8") == (FIXTURES / "golden" / "uis1.xosc").read_bytes()

    trace = run(graph)
    assert trace.outcome.kind == "Completed"
    elapsed = time.monotonic() - started
    assert elapsed < 5.0
    _passed(f"UIS1 reproduction (validate + golden export + Completed in {elapsed:.2f}s)")


def test_criterion_uis2_module_and_flatten_equivalence():
    """UIS2: 3 actors, module instance, 4 syncs; flatten preserves the trace."""
    graph = build_uis2()
    assert len(graph.actors) == 3
    assert any(n.kind is NodeKind.ModuleInstance for n in graph.nodes)
    flat = flatten(graph)
    syncs = [n.id for n in flat.nodes if n.kind is NodeKind.Condition]
    assert len(syncs) == 4

    trace_nested = run(graph)
    trace_flat = run(flat)
    assert trace_nested.events == trace_flat.events
    assert trace_nested.outcome == trace_flat.outcome
    _passed("UIS2 module reproduction and flatten trace equivalence "
            f"({len(trace_nested.events)} events)")


def test_criterion_outcome_variability_sweep():
    """Logical UIS1 sweep: 10-50 variants, both outcomes, committed oracle."""
    started = time.monotonic()
    graph = build_uis1_logical()
    plan_ = plan(graph)
    assert 10 <= plan_.total_count <= 50

    from scenograph.cli import format_sweep_table, sweep_rows
    from scenograph.registry import DEFAULT_REGISTRY

    rows = sweep_rows(graph, TickConfig(), DEFAULT_REGISTRY)
    outcomes = [row["outcome"] for row in rows]
    assert "Collision(ego,bike)" in outcomes
    assert "Completed" in outcomes

    committed = (FIXTURES / "uis1_logical_sweep.csv").read_text(encoding="utf-8")
    assert format_sweep_table(rows) == committed

    elapsed = time.monotonic() - started
    assert elapsed < 60.0
    _passed(f"outcome variability: {plan_.total_count} variants, "
            f"{outcomes.count('Collision(ego,bike)')} collisions, "
            f"{outcomes.count('Completed')} completed, oracle reproduced in {elapsed:.1f}s")


def test_criterion_validation_rule_suite():
    """Each rule R1-R10 has failing and passing coverage; R8 fixture is exact."""
    from scenograph.serialize import from_document, to_document

    failing = {}

    doc = to_document(build_uis1())
    doc["nodes"].append({"id": "root2", "kind": "RootNode"})
    failing["R1"] = from_document(doc)

    doc = to_document(build_uis1())
    doc["nodes"] = [n for n in doc["nodes"] if n["id"] != "end"]
    doc["edges"] = [e for e in doc["edges"] if e["to"] != "end"]
    failing["R2"] = from_document(doc)

    g = single_actor_graph()
    wait = g.add_condition("TimeElapsed", "car", params={"duration": Scalar(1, "s")})
    g.connect("root", wait)
    g.connect(wait, "end")
    g.connect("end", "root")
    failing["R3"] = g

    g = single_actor_graph()
    wait = g.add_condition("TimeElapsed", "car", params={"duration": Scalar(1, "s")})
    g.connect("root", wait)
    g.connect(wait, "end")
    g.add_maneuver("Stop", "car", params={"deceleration": Scalar(2, "m/s^2")})
    failing["R4"] = g

    failing["R5"] = build_bad_join()

    g = single_actor_graph(level=AbstractionLevel.Logical)
    node = g.add_maneuver("Accelerate", "car", params={"throttle": Scalar(0.5, "ratio")})
    g.connect("root", node)
    g.connect(node, "end")
    failing["R6"] = g

    g = single_actor_graph()
    a = g.add_maneuver("Accelerate", "car",
                       params={"target_velocity": Scalar(8, "m/s"),
                               "throttle": Scalar(0.5, "ratio")})
    b = g.add_maneuver("Decelerate", "car",
                       params={"target_velocity": Scalar(0, "m/s"),
                               "brake": Scalar(0.5, "ratio")})
    j = g.add_join(JoinPolicy.AllFinished)
    g.connect("root", a)
    g.connect("root", b)
    g.connect(a, j)
    g.connect(b, j)
    g.connect(j, "end")
    failing["R7"] = g

    failing["R8"] = build_ped_50kmh()

    g = single_actor_graph()
    a = g.add_condition("TimeElapsed", "car", params={"duration": Scalar(1, "s")})
    b = g.add_condition("TimeElapsed", "car", params={"duration": Scalar(2, "s")})
    g.connect("root", a)
    g.connect(a, b)
    g.connect(b, a)
    g.connect(b, "end")
    failing["R9"] = g

    g = single_actor_graph()
    node = g.add_maneuver("Accelerate", "ghost",
                          params={"target_velocity": Scalar(5, "m/s"),
                                  "throttle": Scalar(0.5, "ratio")})
    g.connect("root", node)
    g.connect(node, "end")
    failing["R10"] = g

    passing = build_uis1()
    passing_report = validate(passing)
    assert not passing_report.findings

    for rule_id, bad_graph in failing.items():
        report = validate(bad_graph)
        assert report.by_rule(rule_id), f"{rule_id} not triggered"

    ped_report = validate(build_ped_50kmh())
    assert sorted({f.rule_id for f in ped_report.findings}) == ["R8"]
    assert len(ped_report.findings) == 1
    _passed("validation rule suite: R1-R10 each exercised; "
            "pedestrian-at-50km/h triggers exactly R8")


def test_criterion_level_restriction():
    """Functional/logical exports fail; concrete export verifies."""
    for builder in (build_uis1_functional, build_uis1_logical):
        try:
            export(builder())
            raise AssertionError(f"{builder.__name__} must not export")
        except LevelError:
            pass
    document = export(build_uis1())
    assert verify_structure(document).ok
    _passed("level restriction: functional/logical -> LevelError, "
            "concrete export passes verify_structure")


def test_criterion_concretizer_counting():
    """Range(3,8,1) x DiscreteSet{5,10} -> exactly 12 distinct valid variants."""
    graph = build_uis1_logical()
    plan_ = plan(graph)
    assert plan_.total_count == 12
    assignments = set()
    for index in range(12):
        variant = enumerate_variant(graph, plan_, index)
        assignments.add((
            variant.node("bike_accel").payload.params["target_velocity"].value,
            variant.node("sync2").payload.params["radius"].value,
        ))
        assert classify_level(variant) is AbstractionLevel.Concrete
        assert validate(variant).is_valid
    assert len(assignments) == 12
    import itertools

    expected = set(itertools.product([3.0, 4.0, 5.0, 6.0, 7.0, 8.0], [5, 10]))
    assert assignments == expected
    _passed("concretizer counting: 12 enumerations, all distinct, all valid-concrete")


def test_criterion_join_semantics():
    """OneFinished completes at 1 s (+/- dt); AllFinished gate over 200 graphs."""
    race = single_actor_graph("race")
    join = race.add_join(JoinPolicy.OneFinished, node_id="join")
    for i, duration in enumerate((1.0, 5.0)):
        wait = race.add_condition("TimeElapsed", "car",
                                  params={"duration": Scalar(duration, "s")},
                                  node_id=f"wait{i}")
        race.connect("root", wait)
        race.connect(wait, "join")
    race.connect("join", "end")
    trace = run(race)
    dt = trace.config.dt
    assert abs(trace.outcome.completion_time - 1.0) <= dt + 1e-9

    rng = random.Random(5150)
    checked = 0
    for _ in range(200):
        graph = random_executable_graph(rng)
        gate_trace = run(graph, TickConfig(dt=0.05, max_time=120.0))
        events = gate_trace.events
        index_of = {}
        for position, event in enumerate(events):
            index_of[(event.node_id, event.state)] = position
        for node in graph.nodes:
            if (node.id, "Running") not in index_of or node.kind is NodeKind.RootNode:
                continue
            preds = graph.predecessors(node.id)
            if not preds:
                continue
            one_finished = (node.kind is NodeKind.Join
                            and node.payload.policy is JoinPolicy.OneFinished)
            if one_finished:
                done = [index_of[(p, "Succeeded")] for p in preds
                        if (p, "Succeeded") in index_of]
                assert done and min(done) < index_of[(node.id, "Running")]
            else:
                for pred in preds:
                    assert index_of[(pred, "Succeeded")] < index_of[(node.id, "Running")]
                    checked += 1
    assert checked > 200
    _passed(f"join semantics: one-finished at t={trace.outcome.completion_time}s, "
            f"all-finished gate held across 200 random graphs ({checked} edges)")


def test_criterion_round_trip_500_graphs():
    """parse(serialize(g)) == g over 500 random graphs, modules depth <= 3."""
    rng = random.Random(31337)
    deepest = 0
    for _ in range(500):
        graph = random_document_graph(rng)
        deepest = max(deepest, len(graph.module_defs))
        assert parse(serialize(graph)) == graph
    assert deepest == 3
    _passed(f"round trip: 500 random graphs, module nesting depth up to {deepest}")


def test_criterion_dt_refinement():
    """Halving dt moves UIS1 completion by <= 0.1 s, outcome kind stable."""
    coarse = run(build_uis1(), TickConfig(dt=0.05))
    fine = run(build_uis1(), TickConfig(dt=0.025))
    assert coarse.outcome.kind == fine.outcome.kind == "Completed"
    delta = abs(coarse.outcome.completion_time - fine.outcome.completion_time)
    assert delta <= 0.1
    _passed(f"dt refinement: completion delta {delta:.3f}s <= 0.1s, outcome stable")
