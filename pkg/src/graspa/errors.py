"""Exception hierarchy shared by every stage of the scoring pipeline."""


class GraspaError(Exception):
    """Base class for all scoring-engine errors."""


class DataSyntaxError(GraspaError):
    """A data file is not well-formed (e.g. broken XML, unparsable number)."""


class SchemaError(GraspaError):
    """A data file is well-formed but has missing or unexpected elements."""


class SemanticError(GraspaError):
    """Parsed values violate a domain invariant."""


class FormatError(GraspaError):
    """A mesh file cannot be interpreted."""


class DegenerateMesh(GraspaError):
    """A mesh has no volume or no usable surface."""


class CyclicKinematics(GraspaError):
    pass


class UnknownJoint(GraspaError):
    pass


class OutOfBoard(GraspaError):
    """A point lies more than the boundary tolerance outside the board."""


class EmptyRegion(GraspaError):
    """A pose set leaves at least one region without poses."""


class InitialPenetration(GraspaError):
    """The hand already intersects the object at its pregrasp configuration."""


class TrialCountMismatch(GraspaError):
    pass


class RangeError(GraspaError):
    pass


class ModalityError(GraspaError):
    pass


class LengthMismatch(GraspaError):
    pass
