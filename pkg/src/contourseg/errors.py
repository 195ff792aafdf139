"""Exception types shared across the package."""


class ContourSegError(Exception):
    """Base class for all contourseg errors."""


class EmptyPointSet(ContourSegError):
    pass


class OracleSizeExceeded(ContourSegError):
    pass


class DegenerateCrop(ContourSegError):
    pass


class EmptyMask(ContourSegError):
    pass


class EmptySeedSet(ContourSegError):
    pass


class ShapeMismatch(ContourSegError):
    pass


class TooFewPoints(ContourSegError):
    pass


class TooSmallTarget(ContourSegError):
    pass


class TooFewClicks(ContourSegError):
    pass


class PredictorTimeout(ContourSegError):
    pass


class ProtocolError(ContourSegError):
    pass


class DatasetNotFound(ContourSegError):
    pass


class CorruptInstance(ContourSegError):
    def __init__(self, instance_id, message):
        super().__init__(f"{instance_id}: {message}")
        self.instance_id = instance_id
