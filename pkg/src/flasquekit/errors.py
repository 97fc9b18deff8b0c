"""Exception hierarchy shared by every module."""


class FlasqueKitError(Exception):
    """Base class for all errors raised by flasquekit."""


class NotAPermutation(FlasqueKitError):
    pass


class GroupTooLarge(FlasqueKitError):
    pass


class NotASubgroup(FlasqueKitError):
    pass


class NotARepresentation(FlasqueKitError):
    pass


class NotUnimodular(FlasqueKitError):
    pass


class GroupMismatch(FlasqueKitError):
    pass


class TorsionInput(FlasqueKitError):
    """Raised when an operation needs a lattice but got a module with torsion."""


class ShiftBoundExceeded(FlasqueKitError):
    pass


class TorsionUnsupportedDegree(FlasqueKitError):
    pass


class ConstructionFailure(FlasqueKitError):
    """A certificate of a construction failed to verify."""


class ParseError(FlasqueKitError):
    pass


class ValidationError(FlasqueKitError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.detail = message
