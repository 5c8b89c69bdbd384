"""
Exception hierarchy shared by the numerical core and the command line.

Every error carries a machine-readable ``code`` which the CLI reports as
``{"error": code, "message": ...}``.
"""


class GarlandError(Exception):
    code = "GarlandError"

    def __init__(self, message: str = "", code: str | None = None):
        super().__init__(message or self.code)
        if code is not None:
            self.code = code

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


# --------------------------------------------------------------
# Families
# --------------------------------------------------------------
class ComplexError(GarlandError):
    code = "ComplexError"


class GroupError(GarlandError):
    code = "GroupError"


class RepresentationError(GarlandError):
    code = "RepresentationError"


class CochainError(GarlandError):
    code = "CochainError"


class SpectralError(GarlandError):
    code = "SpectralError"


class InputError(GarlandError):
    code = "InputError"


# --------------------------------------------------------------
# complex_core
# --------------------------------------------------------------
class MixedDimension(ComplexError):
    code = "MixedDimension"


class DuplicateVertexInSimplex(ComplexError):
    code = "DuplicateVertexInSimplex"


class IndexOutOfRange(ComplexError):
    code = "IndexOutOfRange"


class NotASimplex(ComplexError):
    code = "NotASimplex"


class LinkEmpty(ComplexError):
    code = "LinkEmpty"


class NotDisjoint(ComplexError):
    code = "NotDisjoint"


class JoinNotASimplex(ComplexError):
    code = "JoinNotASimplex"


class NotPure(ComplexError):
    code = "NotPure"


# --------------------------------------------------------------
# group_action
# --------------------------------------------------------------
class CapExceeded(GroupError):
    code = "CapExceeded"


class NotABijection(GroupError):
    code = "NotABijection"


class InvalidAction(GroupError):
    code = "InvalidAction"


class NotInvariant(GroupError):
    code = "NotInvariant"


# --------------------------------------------------------------
# representations
# --------------------------------------------------------------
class InconsistentRelations(RepresentationError):
    code = "InconsistentRelations"


class Singular(RepresentationError):
    code = "Singular"


class NotOrthogonal(RepresentationError):
    code = "NotOrthogonal"


class DimensionMismatch(RepresentationError):
    code = "DimensionMismatch"


# --------------------------------------------------------------
# cochains
# --------------------------------------------------------------
class DegreeMismatch(CochainError):
    code = "DegreeMismatch"


class DegreeOverflow(CochainError):
    code = "DegreeOverflow"


class DegreeUnderflow(CochainError):
    code = "DegreeUnderflow"


class ExtensionIncoherent(CochainError):
    code = "ExtensionIncoherent"


# --------------------------------------------------------------
# spectral
# --------------------------------------------------------------
class IsolatedVertex(SpectralError):
    code = "IsolatedVertex"


class DisconnectedLink(SpectralError):
    code = "DisconnectedLink"


class EmptyLink(SpectralError):
    code = "EmptyLink"


class TooLarge(SpectralError):
    code = "TooLarge"


class SpectralResidual(SpectralError):
    code = "SpectralResidual"


# --------------------------------------------------------------
# cli_io
# --------------------------------------------------------------
class ParseError(InputError):
    code = "ParseError"


class SchemaError(InputError):
    code = "SchemaError"


class UnknownVertex(InputError):
    code = "UnknownVertex"


class ConfigError(InputError):
    code = "ConfigError"
