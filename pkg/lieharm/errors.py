"""Exception hierarchy for lieharm."""


class LieHarmError(Exception):
    """Base class of every error raised by the package."""


# -- input problems (CLI exit code 2) ---------------------------------------

class InputError(LieHarmError):
    pass


class UnsupportedFamily(InputError):
    pass


class InvalidParams(InputError):
    pass


class UnknownAlgebra(InputError):
    pass


class MalformedPoint(InputError):
    pass


class CatalogFormatError(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class DegenerateS(InputError):
    pass


class OrderOutOfRange(InputError):
    pass


class MultiplicityMismatch(InputError):
    pass


class NoIsotropicVector(MultiplicityMismatch):
    pass


class StepTooSmall(InputError):
    pass


class DegeneratePlane(InputError):
    pass


# -- numerical failures (CLI exit code 3) ------------------------------------

class NumericalFailure(LieHarmError):
    pass


class RealizationError(NumericalFailure):
    pass


class ThetaNotInvolutive(NumericalFailure):
    pass


class NonMaximalA(NumericalFailure):
    pass


class ClusteringAmbiguity(NumericalFailure):
    pass


class DecompositionFailure(NumericalFailure):
    pass


class RootNotFound(NumericalFailure):
    pass


class IdealCheckFailure(NumericalFailure):
    pass


class NonUnipotentProduct(NumericalFailure):
    pass


class NotClosedUnderBracket(NumericalFailure):
    pass


class EvaluationFailure(NumericalFailure):
    pass
