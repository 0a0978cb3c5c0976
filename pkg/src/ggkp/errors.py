"""Exception hierarchy shared by the library and the command line.

Every error carries a human readable ``detail`` and the process ``exit_code``
the CLI reports for it (0 success, 1 verification failure, 2 usage/config).
"""


class GGKPError(Exception):
    exit_code = 2

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class DomainError(GGKPError):
    """Input outside the domain of an operation."""


class GeometryError(DomainError):
    """Physical parameters produce an invalid period matrix."""


class QuadratureResolutionError(GGKPError):
    """The composite rule cannot resolve the integrand within its node cap."""


class ThetaCapacityError(GGKPError):
    """A certified lattice radius would exceed the configured cap."""


class DegenerateScanError(GGKPError):
    exit_code = 1


class VerificationError(GGKPError):
    exit_code = 1
