"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: bad input 2, I/O 3,
solver/continuation failures 4, integration quality 5.
"""


class DomainError(ValueError):
    """Argument outside an operation's mathematical domain."""


class ConfigurationError(ValueError):
    """Well-formed input that does not fit the requested computation
    (typically a lattice window too small for the support)."""


class InadmissibleSetError(DomainError):
    """Solution set not admissible at the requested nu/f ratio.

    Carries the birth threshold (the complementary-set sum) that nu/f
    must strictly exceed.
    """

    def __init__(self, message, threshold):
        super().__init__(message)
        self.threshold = threshold


class ResonanceError(RuntimeError):
    """The state energy coincides with a tilt rung on an empty site, so the
    zero-hopping Jacobian is singular and continuation is refused."""


class SolverError(RuntimeError):
    """Newton iteration failed; carries the last residual norm and, for
    continuation runs, the partial path walked so far."""

    def __init__(self, message, residual=None, path=None):
        super().__init__(message)
        self.residual = residual
        self.path = list(path) if path is not None else []


class IntegrationError(RuntimeError):
    """Time integration drifted beyond the accepted quality gate."""
