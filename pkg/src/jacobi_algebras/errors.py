"""Exception hierarchy shared by every module."""


class AlgebraError(Exception):
    """Base class for all errors raised by the toolkit."""


class FieldError(AlgebraError):
    pass


class ScalarParseError(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


class FieldNotFinite(FieldError):
    pass


class DimensionMismatch(AlgebraError):
    pass


# Several operations describe shape problems with this name.
ShapeMismatch = DimensionMismatch


class MissingUnit(AlgebraError):
    pass


class NotInvertible(AlgebraError):
    pass


class NotPoisson(AlgebraError):
    pass


class UnknownName(AlgebraError):
    pass


class ParamOutOfDomain(AlgebraError):
    pass


class CharConditionViolated(AlgebraError):
    pass


class BudgetExceeded(AlgebraError):
    pass


class NotAlgebraMap(AlgebraError):
    pass


class NotLieMap(AlgebraError):
    pass


class CompatFailure(AlgebraError):
    def __init__(self, which: int, message: str = ""):
        self.which = which
        super().__init__(message or f"compatibility condition {which} fails")


class BimoduleAxiomFailure(AlgebraError):
    pass


class NotAnIntegral(AlgebraError):
    pass


class InvalidFlagDatum(AlgebraError):
    pass


class NotASubalgebra(AlgebraError):
    pass


class NotARetraction(AlgebraError):
    pass


class NotSubalgebra(AlgebraError):
    def __init__(self, which: str, message: str = ""):
        self.which = which
        super().__init__(message or f"{which} is not a subalgebra")


class NotDirectSum(AlgebraError):
    pass


class NotADeformationMap(AlgebraError):
    pass


class SingularSigma(AlgebraError):
    pass


class FileFormatError(AlgebraError):
    """A structure file is malformed; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
