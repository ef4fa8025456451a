"""Error hierarchy for the solver, shooting and analysis layers."""


class BVPError(Exception):
    """Base class for every domain error raised by this package."""


class InvalidConfig(BVPError, ValueError):
    """A problem, control or CLI configuration value is invalid."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class OutOfRange(BVPError, ValueError):
    """A query or parameter lies outside its admissible range."""


class UnsupportedNonlinearity(BVPError, ValueError):
    """Shooting was requested for a g without a proved interval structure."""


class StepUnderflow(BVPError):
    """The step size fell below the representable floor before termination."""


class BracketFailure(BVPError):
    """No Type I slope was found; B1 may be empty for this g."""

    def __init__(self, message, probes=()):
        self.probes = list(probes)  # (b, verdict label) per probe
        super().__init__(message)


class MaxIterations(BVPError):
    """Bisection did not reach bisect_tol within max_bisect_iters."""


class InconsistentPredicate(BVPError):
    """A Type II verdict was seen above a Type I verdict."""


class PlateauNotFound(BVPError):
    """The critical trajectory shows no plateau of f."""


class WindowEmpty(BVPError):
    """No samples fall inside the requested tail-fit window."""


class NonMonotoneY(BVPError):
    """f' is not strictly decreasing, so y = (f'/b)^2 is not a valid chart."""


class TooFewSamples(BVPError):
    """A profile has too few samples for finite differences."""
