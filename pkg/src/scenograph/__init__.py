"""Graph-based driving-test scenario toolkit.

Model scenarios as graphs of maneuvers, conditions, and joins between a
root and an end node; validate them against ten static rules; expand
reusable modules; enumerate logical scenarios into concrete ones; export
concrete scenarios as OpenSCENARIO-shaped XML; and execute them on a
deterministic 2D kinematic world.
"""

from .concretize import (
    ConcretizationPlan,
    apply_defaults,
    classify_level,
    enumerate_variant,
    plan,
    sample,
)
from .errors import ScenarioError
from .executor import Outcome, TickConfig, Trace, outcome, replay_states, run
from .library import library_list, library_load, library_save, module_revision
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
    new_graph,
)
from .modules import define_module, effective_graph, flatten, instantiate
from .params import UNSET, DiscreteSet, ParamValue, Range, Scalar, Unset
from .registry import DEFAULT_REGISTRY, Registry
from .serialize import from_document, load, parse, save, serialize, to_document
from .validation import Finding, ValidationReport, explain, validate
from .xosc import ExportOptions, XoscDocument, export, verify_structure

__version__ = "0.1.0"

__all__ = [
    "AbstractionLevel", "ActionNode", "Actor", "ActorCategory",
    "ConcretizationPlan", "DEFAULT_REGISTRY", "DiscreteSet", "Edge",
    "ExportOptions", "Finding", "GraphNode", "JoinNode", "JoinPolicy",
    "ModuleDef", "ModuleInstanceNode", "NodeKind", "Outcome", "ParamValue",
    "Pose2D", "Range", "Registry", "Scalar", "ScenarioError", "ScenarioGraph",
    "TickConfig", "Trace", "UNSET", "Unset", "ValidationReport", "XoscDocument",
    "apply_defaults", "classify_level", "define_module", "effective_graph",
    "enumerate_variant", "explain", "export", "flatten", "from_document",
    "instantiate", "library_list", "library_load", "library_save", "load",
    "module_revision", "new_graph", "outcome", "parse", "plan",
    "replay_states", "run", "sample", "save", "serialize", "to_document",
    "validate", "verify_structure",
]
