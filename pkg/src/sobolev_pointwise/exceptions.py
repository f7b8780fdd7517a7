"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point (or a whole grid box) lies outside a field's domain."""


class UnsupportedOrderError(ValueError):
    """A derivative or difference order exceeds what the field supports."""


class DegenerateNodesError(ValueError):
    """An interpolation node family has zero step or too few nodes."""


class DegeneratePairError(ValueError):
    """A point pair with x == y was passed where distinct points are required."""


class GeometryError(ValueError):
    """An evaluation point is inconsistent with the requested geometry."""


class ConfigError(ValueError):
    """A configuration object is internally inconsistent or infeasible."""


class EmptyScanError(RuntimeError):
    """A scan produced no admissible pairs, so no report can be formed."""
