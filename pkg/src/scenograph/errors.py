"""Exception types shared across the toolkit."""


class ScenarioError(Exception):
    """Base class for all scenograph errors."""


class InvalidArgument(ScenarioError):
    pass


class DuplicateTerminal(ScenarioError):
    """A graph already holds its single root/end node."""


class UnknownAction(ScenarioError):
    """Action type is not declared in the action registry."""


class UnknownNode(ScenarioError):
    pass


class DuplicateEdge(ScenarioError):
    pass


class UnknownParameter(ScenarioError):
    """Parameter key is not declared for the node's action type."""


class ParseError(ScenarioError):
    """Document is not syntactically valid."""


class SchemaError(ScenarioError):
    """Document parses but violates the scenario file schema."""


class UnknownRule(ScenarioError):
    pass


class IllegalElement(ScenarioError):
    """Node kind that cannot be part of a module definition."""


class RecursiveModule(ScenarioError):
    pass


class UnboundRole(ScenarioError):
    pass


class BindingMismatch(ScenarioError):
    """Bound actor's category is not allowed by a module element."""


class DepthExceeded(ScenarioError):
    pass


class UnknownModule(ScenarioError):
    pass


class Conflict(ScenarioError):
    """Catalog revision exists with different content."""


class NotFound(ScenarioError):
    pass


class MissingDefault(ScenarioError):
    """Registry declares no default for a required parameter."""


class LevelError(ScenarioError):
    """Operation requires a different abstraction level."""


class OutOfRange(ScenarioError):
    pass


class InvalidScenario(ScenarioError):
    """Graph has validation errors."""


class UnsupportedAction(ScenarioError):
    """Action type has no OpenSCENARIO mapping."""


class InvalidConfig(ScenarioError):
    pass
