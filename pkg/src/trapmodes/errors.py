"""Exception hierarchy used across the package."""


class TrapModesError(Exception):
    """Base class for all package-specific failures."""


class DomainError(TrapModesError, ValueError):
    """An argument lies outside the supported domain."""


class ConvergenceError(TrapModesError, RuntimeError):
    """An iterative or adaptive scheme failed to reach its tolerance."""


class QuadratureError(ConvergenceError):
    """A numerical integral could not be resolved to tolerance."""


class SingularPoint(TrapModesError, ValueError):
    """A field point falls inside the guard disc around the source ring."""


class StagnationEncountered(TrapModesError, RuntimeError):
    """A streamline trace ran into a stagnation point of the velocity field."""


class SeedOffLevel(TrapModesError, ValueError):
    """A trace seed does not lie on the requested level."""


class NotFound(TrapModesError, LookupError):
    """A requested feature (extremum, stagnation point, ...) was not located."""


class InsufficientExtrema(TrapModesError, LookupError):
    """Too few free-surface extrema to place the requested bodies."""


class OverlapUnresolvable(TrapModesError, RuntimeError):
    """Body surfaces keep overlapping after every allowed adjustment."""


class GeometryError(TrapModesError, ValueError):
    """A wetted surface is self-intersecting or otherwise malformed."""


class Infeasible(TrapModesError, ValueError):
    """No admissible mass distribution meets the requested constraints."""


class StabilityViolation(TrapModesError, RuntimeError):
    """The restoring matrix of a body is not positive definite."""


class SchemaError(TrapModesError, ValueError):
    """An input document does not follow the expected layout."""
