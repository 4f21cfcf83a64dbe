"""
errors.py

Exception hierarchy shared by every tessellab module.
Input problems carry exit code 2, failed computations exit code 1.
"""


class TessellabError(Exception):
    """Base class for every error raised by tessellab."""

    exit_code = 1


# --- Input errors (file could not be turned into a valid truncation) ---

class InputError(TessellabError):
    exit_code = 2


class ParseError(InputError):
    """The input file is not a readable tessellab-rotation/1 document."""


class ValidationError(ParseError):
    """The document parsed but describes an invalid map or truncation."""


class InconsistentAdjacency(ValidationError):
    pass


class TerminalVertex(ValidationError):
    pass


class EdgeOnOneFace(ValidationError):
    pass


class NonPlanarRotation(ValidationError):
    """The rotation system traces faces that violate V - E + F = 2."""


class DisconnectedGraph(ValidationError):
    pass


class SphericalParameters(InputError):
    pass


class UnsupportedQ(InputError):
    pass


class NotHyperbolic(InputError):
    pass


class InvalidTau(InputError):
    pass


class NonpositiveA(InputError):
    pass


class InvalidCap(InputError):
    """A subset size cap below 1."""


# --- Computation errors (an operation's precondition failed) ---

class ComputationError(TessellabError):
    pass


class IdentityViolated(ComputationError):
    """An exact counting identity failed; indicates a corrupted map."""


class GenerationInconsistent(ComputationError):
    pass


class BudgetExceeded(ComputationError):
    pass


class CapTooLargeForBudget(ComputationError):
    pass


class CenterOnBoundary(ComputationError):
    pass


class SubsetTouchesBoundary(ComputationError):
    pass


class SubsetDisconnected(ComputationError):
    pass


class BoundaryVertex(ComputationError):
    pass


class NoInteriorVertices(ComputationError):
    pass


class QSmallerThanFaceDegree(ComputationError):
    pass


class CompletionLeavesInterior(ComputationError):
    pass


class NoTrustedRadii(ComputationError):
    pass


class DegreeBoundViolated(ComputationError):
    pass


class IndexSetTouchesBoundary(ComputationError):
    pass


class NoConvergence(ComputationError):
    pass


class RegionTouchesBoundary(ComputationError):
    pass


class SupportTouchesBoundary(ComputationError):
    pass
