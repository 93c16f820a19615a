"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures to its
documented status codes without a lookup table.
"""


class KobayashiError(Exception):
    exit_code = 1


class SpecSchemaError(KobayashiError):
    exit_code = 2


class SpecValidationError(KobayashiError):
    exit_code = 3


class NonConvergenceError(KobayashiError):
    exit_code = 4


class PreconditionError(KobayashiError, ValueError):
    exit_code = 5


class DomainViolationError(PreconditionError):
    """A point lies outside the model domain of a distance formula."""


class PrecisionLossError(DomainViolationError):
    """A point is so close to a model boundary that artanh would overflow."""


class InvalidStripError(PreconditionError):
    pass


class AmbiguousSupportError(PreconditionError):
    """No unique active constraint at a boundary point."""


class CertificationError(PreconditionError):
    pass


class InclusionError(CertificationError):
    pass


class ZeroRadiusError(PreconditionError):
    pass


class DegenerateInputError(PreconditionError):
    pass


class PathGenerationError(PreconditionError):
    pass
