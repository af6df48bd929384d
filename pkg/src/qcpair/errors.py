"""Exception hierarchy. Every operation raises subclasses of QcpairError so the
CLI can map validation failures to exit codes."""


class QcpairError(Exception):
    """Base class for all validation and computation errors."""


class InvalidScene(QcpairError):
    pass


# geometry
class DegenerateQuadruple(QcpairError):
    pass


class DegenerateSet(QcpairError):
    pass


class InfinityNotSupported(QcpairError):
    pass


class DegenerateMobius(QcpairError):
    pass


class NotSimplePolygon(QcpairError):
    pass


# grid metrics
class PointNotInterior(QcpairError):
    pass


class Unreachable(QcpairError):
    pass


class EndpointInsideU(QcpairError):
    pass


class SnapError(QcpairError):
    """Endpoint snapping displacement exceeded twice the grid step."""


# distortion
class TooFewSamples(QcpairError):
    pass


class NotMonotone(QcpairError):
    pass


# extensions
class NotAnchored(QcpairError):
    pass


class NotIncreasing(QcpairError):
    pass


class CellDistortionTooLarge(QcpairError):
    pass


class QuadratureRangeExceeded(QcpairError):
    pass


class NotOrientationPreserving(QcpairError):
    pass


class PreconditionSpread(QcpairError):
    pass


class RadiusOutOfRange(QcpairError):
    pass


class LogRatioViolation(QcpairError):
    pass


class OriginExcluded(QcpairError):
    pass


class WrongSideOfLine(QcpairError):
    pass


class ImageInsideDisk(QcpairError):
    pass


# dilatation / modulus
class DegenerateTriangle(QcpairError):
    pass


class StepTooLarge(QcpairError):
    pass


class NotARing(QcpairError):
    pass


class SolverDiverged(QcpairError):
    pass


# scenarios
class BadRadii(QcpairError):
    pass


class BandViolation(QcpairError):
    pass


class NotPositive(QcpairError):
    pass


class AlphaOutOfRange(QcpairError):
    pass


# rendering
class EmptyLayer(QcpairError):
    pass
