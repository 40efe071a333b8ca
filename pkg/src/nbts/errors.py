"""Exception hierarchy shared by all nbts modules."""


class NBTSError(Exception):
    """Base class for domain errors raised by this package."""

    code = "NBTSError"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class InvalidBehavior(NBTSError, ValueError):
    code = "InvalidBehavior"


class IndexOutOfRange(NBTSError, IndexError):
    code = "IndexOutOfRange"


class WrongPartyCount(NBTSError, ValueError):
    code = "WrongPartyCount"


class WeightError(NBTSError, ValueError):
    code = "WeightError"


class ScenarioMismatch(NBTSError, ValueError):
    code = "ScenarioMismatch"


class DimensionMismatch(NBTSError, ValueError):
    code = "DimensionMismatch"


class Unbounded(NBTSError):
    code = "Unbounded"


class Empty(NBTSError):
    code = "Empty"


class NotInPolytope(NBTSError, ValueError):
    code = "NotInPolytope"


class CapacityExceeded(NBTSError):
    code = "CapacityExceeded"


class UnsupportedScenario(NBTSError, ValueError):
    code = "UnsupportedScenario"


class NotDeterministic(NBTSError, ValueError):
    code = "NotDeterministic"


class PreconditionFailed(NBTSError):
    """A decomposition input violates NBTS or the classicality equalities."""

    code = "PreconditionFailed"

    def __init__(self, condition, detail=""):
        self.condition = condition
        msg = f"PreconditionFailed({condition})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)

    def to_dict(self):
        return {"error": self.code, "condition": self.condition, "message": str(self)}


class InternalContradiction(NBTSError, RuntimeError):
    code = "InternalContradiction"


class IndexCollision(NBTSError, ValueError):
    code = "IndexCollision"


class WrongWireSet(NBTSError, ValueError):
    code = "WrongWireSet"


class ZeroDenominator(NBTSError, ZeroDivisionError):
    code = "ZeroDenominator"


class NonScalarResult(NBTSError, ValueError):
    code = "NonScalarResult"


class NotPositive(NBTSError, ValueError):
    code = "NotPositive"
