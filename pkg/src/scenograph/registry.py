"""Action registry: the closed v1 vocabulary of maneuvers and conditions.

Everything rule-shaped about an action lives here as data — parameter
schemas with SI units and defaults, two-actor marking, per-actor-category
plausibility bounds, and conflict pairs — so validation, concretization,
export, and execution stay table-driven. Extension happens by editing
registry data (or passing a config override), not code.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .errors import UnknownAction

LONGITUDINAL = "Longitudinal"
LATERAL = "Lateral"
COMPOSITE = "Composite"
CONDITION = "Condition"

ALL_ACTOR_CATEGORIES = ("Pedestrian", "TwoWheeler", "FourWheeler")
VEHICLE_CATEGORIES = ("TwoWheeler", "FourWheeler")


@dataclass(frozen=True)
class ParamSpec:
    """One declared parameter: SI unit, default, and bound dimension.

    `default` None means the registry ships no default (apply_defaults
    raises MissingDefault). `dimension` links the param to a per-category
    plausibility bound: "speed" or "acceleration".
    """

    name: str
    unit: str
    default: Optional[float] = None
    dimension: Optional[str] = None


@dataclass(frozen=True)
class ActionDef:
    name: str
    category: str
    params: tuple
    two_actor: bool = False
    allowed_actor_categories: tuple = ALL_ACTOR_CATEGORIES
    complexity: int = 1  # opaque, maneuver-dependent metadata; not interpreted

    def param(self, key: str) -> Optional[ParamSpec]:
        for spec in self.params:
            if spec.name == key:
                return spec
        return None

    def param_names(self) -> tuple:
        return tuple(spec.name for spec in self.params)


@dataclass(frozen=True)
class CategoryLimits:
    """Plausibility bounds and collision box half-extents per actor category."""

    max_speed: float          # m/s
    max_acceleration: float   # m/s^2
    half_length: float        # m, along world x (heading ignored for the box)
    half_width: float         # m, along world y


_ACTIONS = (
    ActionDef("Accelerate", LONGITUDINAL, (
        ParamSpec("target_velocity", "m/s", 8.0, "speed"),
        ParamSpec("throttle", "ratio", 0.5),
    )),
    ActionDef("Decelerate", LONGITUDINAL, (
        ParamSpec("target_velocity", "m/s", 0.0, "speed"),
        ParamSpec("brake", "ratio", 0.5),
    )),
    ActionDef("KeepVelocity", LONGITUDINAL, (
        ParamSpec("velocity", "m/s", 8.0, "speed"),
        ParamSpec("duration", "s", 2.0),
    )),
    ActionDef("DriveDistance", LONGITUDINAL, (
        ParamSpec("distance", "m", 50.0),
    )),
    ActionDef("FollowVehicle", LONGITUDINAL, (
        ParamSpec("gap", "m", 10.0),
        ParamSpec("duration", "s", 5.0),
    ), two_actor=True, allowed_actor_categories=VEHICLE_CATEGORIES, complexity=2),
    ActionDef("Stop", LONGITUDINAL, (
        ParamSpec("deceleration", "m/s^2", 3.0, "acceleration"),
    )),
    ActionDef("LaneChangeLeft", LATERAL, (
        ParamSpec("lateral_offset", "m", 3.5),
        ParamSpec("duration", "s", 2.0),
    ), allowed_actor_categories=VEHICLE_CATEGORIES, complexity=2),
    ActionDef("LaneChangeRight", LATERAL, (
        ParamSpec("lateral_offset", "m", 3.5),
        ParamSpec("duration", "s", 2.0),
    ), allowed_actor_categories=VEHICLE_CATEGORIES, complexity=2),
    ActionDef("TurnLeft", LATERAL, (
        ParamSpec("turn_radius", "m", 6.0),
        ParamSpec("heading_change", "rad", 1.5707963267948966),
    )),
    ActionDef("TurnRight", LATERAL, (
        ParamSpec("turn_radius", "m", 6.0),
        ParamSpec("heading_change", "rad", 1.5707963267948966),
    )),
    ActionDef("InLocationRadius", CONDITION, (
        ParamSpec("x", "m", 0.0),
        ParamSpec("y", "m", 0.0),
        ParamSpec("radius", "m", 2.0),
    )),
    ActionDef("InVehicleRadius", CONDITION, (
        ParamSpec("radius", "m", 10.0),
    ), two_actor=True),
    ActionDef("TimeElapsed", CONDITION, (
        # global simulation time, not time since activation
        ParamSpec("duration", "s", 1.0),
    )),
    ActionDef("SpeedReached", CONDITION, (
        # deliberately no default: the designated MissingDefault case
        ParamSpec("speed", "m/s", None, "speed"),
    )),
)

_LIMITS = {
    "Pedestrian": CategoryLimits(4.2, 3.0, 0.25, 0.25),
    "TwoWheeler": CategoryLimits(16.7, 4.0, 0.9, 0.3),
    "FourWheeler": CategoryLimits(69.4, 9.0, 2.25, 0.95),
}

# Maneuver pairs an actor cannot plausibly run in parallel (R7).
_CONFLICTS = (
    ("Accelerate", "Decelerate"),
    ("Accelerate", "Stop"),
    ("LaneChangeLeft", "LaneChangeRight"),
    ("TurnLeft", "TurnRight"),
)


class Registry:
    """Lookup surface over the action table and category limits."""

    def __init__(self, actions=_ACTIONS, limits=None, conflicts=_CONFLICTS):
        self._actions = {a.name: a for a in actions}
        self._limits = dict(limits or _LIMITS)
        self._conflicts = {frozenset(pair) for pair in conflicts}

    def action(self, name: str) -> ActionDef:
        try:
            return self._actions[name]
        except KeyError:
            raise UnknownAction(f"unknown action type: {name!r}") from None

    def has_action(self, name: str) -> bool:
        return name in self._actions

    def action_names(self):
        return tuple(self._actions)

    def limits(self, actor_category: str) -> CategoryLimits:
        return self._limits[actor_category]

    def conflicting(self, action_a: str, action_b: str) -> bool:
        return frozenset((action_a, action_b)) in self._conflicts

    def with_overrides(self, config: dict) -> "Registry":
        """Apply a config document overriding defaults and bounds.

        Shape: {"defaults": {action: {param: value}},
                "limits": {category: {"max_speed": v, "max_acceleration": v}}}
        """
        actions = []
        defaults = config.get("defaults", {})
        for action in self._actions.values():
            over = defaults.get(action.name)
            if over:
                specs = tuple(
                    replace(spec, default=over.get(spec.name, spec.default))
                    for spec in action.params
                )
                action = replace(action, params=specs)
            actions.append(action)
        limits = dict(self._limits)
        for category, values in config.get("limits", {}).items():
            base = limits[category]
            limits[category] = replace(
                base,
                max_speed=values.get("max_speed", base.max_speed),
                max_acceleration=values.get("max_acceleration", base.max_acceleration),
            )
        return Registry(tuple(actions), limits, tuple(tuple(p) for p in self._conflicts))


DEFAULT_REGISTRY = Registry()
