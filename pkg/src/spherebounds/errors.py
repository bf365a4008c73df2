"""Exception types shared across the package."""


class InvalidMapError(ValueError):
    """A map does not return to the identity after its declared period."""


class BalancedOrbit(ValueError):
    """The orbit sum vanishes, so the barycentric map is undefined there."""


class DegenerateOrbit(ValueError):
    """Orbit points coincide where distinct points are required."""


class ResolutionError(RuntimeError):
    """Adaptive sampling hit its refinement cap."""


class ConvergenceError(RuntimeError):
    """An iterative solver ran out of iterations."""


class SolverFailure(RuntimeError):
    """A multi-start search exhausted its budget without meeting tolerance.

    The best candidate found is kept on ``best`` for diagnostics.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
