"""Exception types shared across the package."""


class DesbovesError(Exception):
    """Base class for all package-specific errors."""


class ZeroVector(DesbovesError):
    """A homogeneous triple was identically zero (indeterminacy hit upstream)."""


class AtPencilCenter(DesbovesError):
    """The pencil projection was requested at its center [0:1:0]."""


class ChartOverflow(DesbovesError):
    """The dehomogenizing coordinate of the requested chart vanishes."""


class IndeterminacyHit(DesbovesError):
    """The degenerate (lambda = 0) map was evaluated at its indeterminacy point."""


class NotEndomorphism(DesbovesError):
    """A general-family evaluation hit a common zero of the three components."""


class SolverDiverged(DesbovesError):
    """Root polishing failed to reach the residual tolerance within budget."""


class DegenerateFiber(DesbovesError):
    """The fiber quartic could not be scaled consistently against the target."""


class PoleInput(DesbovesError):
    """w^3 = -1: the critical-parameter formula has a pole there."""


class DegenerateLambda(DesbovesError):
    """w^3 = 1 maps to lambda = 0, which is outside the parameter space."""


class NotPeriodic(DesbovesError):
    """Periodic-point refinement diverged or left a residual above tolerance."""


class FailedCondition(DesbovesError):
    """A numbered clause of the landing-parameter verification failed."""

    def __init__(self, clause, message=""):
        self.clause = clause
        super().__init__(f"clause ({clause}) failed: {message}")


class ProbeNotFound(DesbovesError):
    """Density probe exhausted its depth budget without a verified hit."""

    def __init__(self, deepest_level, closest_lambda=None, closest_distance=None):
        self.deepest_level = deepest_level
        self.closest_lambda = closest_lambda
        self.closest_distance = closest_distance
        super().__init__(
            f"no verified parameter within radius down to depth {deepest_level} "
            f"(closest miss {closest_lambda} at distance {closest_distance})"
        )


class ConfigError(DesbovesError):
    """Invalid run configuration (CLI exit code 2)."""
