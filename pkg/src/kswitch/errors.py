"""Exception hierarchy for kswitch."""


class KSwitchError(Exception):
    """Base class for all library errors."""


class GraphError(KSwitchError, ValueError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class NodeOutOfRange(GraphError):
    pass


class KTooLarge(KSwitchError, ValueError):
    pass


class MissingColorData(KSwitchError, ValueError):
    pass


class NotBipartite(KSwitchError, ValueError):
    pass


class NNotDivisibleBy3(KSwitchError, ValueError):
    pass


class NotTrianglePartition(KSwitchError, ValueError):
    pass


class StarterViolatesConstraint(KSwitchError, ValueError):
    pass


class InsufficientSamples(KSwitchError, ValueError):
    pass


class InstanceTooLarge(KSwitchError, ValueError):
    pass


class RegularityViolation(KSwitchError, AssertionError):
    pass


class AsymmetryDetected(KSwitchError, AssertionError):
    pass


class ConfigInvalid(KSwitchError, ValueError):
    pass
