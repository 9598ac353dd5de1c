"""Exception hierarchy shared by every module."""


class FatgraphNielsenError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FatgraphNielsenError, ValueError):
    pass


class InvalidBasepoint(FatgraphNielsenError, ValueError):
    pass


class InvalidDiagram(FatgraphNielsenError, ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__("invalid marked diagram: " + "; ".join(report.failures()))


class BoundaryNotFixed(FatgraphNielsenError, ValueError):
    pass


class IdentityLabel(FatgraphNielsenError, ValueError):
    pass


# automorphism-facing name for the same condition
IdentityImage = IdentityLabel


class IllegalSlide(FatgraphNielsenError, ValueError):
    pass


class EmptyLabelProduced(FatgraphNielsenError):
    pass


class InconsistentRecord(FatgraphNielsenError, ValueError):
    pass


class StuckNotAtBasepoint(FatgraphNielsenError):
    pass


class GuidedInvariantViolated(FatgraphNielsenError, AssertionError):
    pass


class StepLimitExceeded(FatgraphNielsenError):
    pass


class ShapeRecurrenceTimeout(FatgraphNielsenError):
    pass


class TailEdge(FatgraphNielsenError, ValueError):
    pass


class LoopEdge(FatgraphNielsenError, ValueError):
    pass


class InvalidMove(FatgraphNielsenError, ValueError):
    pass
