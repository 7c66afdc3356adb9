class EquationalityError(ValueError):
    """Base class for every error raised by the toolkit."""


# --- Algebra ---

class NoDerivationError(EquationalityError):
    pass


class WrongDescriptorError(EquationalityError):
    pass


class FieldDivisionError(EquationalityError, ZeroDivisionError):
    pass


class DimensionMismatchError(EquationalityError):
    pass


class NonSquareError(EquationalityError):
    pass


class GradeMismatchError(EquationalityError):
    pass


class ZeroInputError(EquationalityError):
    pass


# --- Formulas ---

class FormulaSyntaxError(EquationalityError):
    """A parse failure, carrying the 1-based position of the offending token."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class ArityError(EquationalityError):
    pass


class LanguageTagError(EquationalityError):
    pass


class ShapeError(EquationalityError):
    pass


# --- Oracles and harness ---

class OracleMismatchError(EquationalityError):
    pass


class UndecidableShapeError(EquationalityError):
    pass


class UnsupportedShapeError(EquationalityError):
    pass


class ImplicationViolation(EquationalityError):
    pass


class UnknownPassError(EquationalityError):
    pass
