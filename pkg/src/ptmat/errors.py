"""Exception hierarchy.

Everything raised on purpose by ptmat derives from :class:`PTMatError`.
Input-shape problems additionally subclass :class:`ValueError`, so plain
``except ValueError`` keeps working for callers that do not care.
"""


class PTMatError(Exception):
    pass


# -- shapes and formats ----------------------------------------------------

class MatrixFormatError(PTMatError, ValueError):
    """Malformed matrix input (ragged, non-square, non-finite)."""


class DimensionMismatch(PTMatError, ValueError):
    pass


class DimensionOutOfRange(PTMatError, ValueError):
    pass


# -- linear algebra --------------------------------------------------------

class NonConvergence(PTMatError, ArithmeticError):
    pass


class NotHermitian(PTMatError, ValueError):
    pass


class NotPositiveDefinite(PTMatError, ValueError):
    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NotUnitary(PTMatError, ValueError):
    pass


# -- parity / M-matrix -----------------------------------------------------

class WrongParityKind(PTMatError, ValueError):
    pass


class SpectrumNotPlusMinusOne(PTMatError, ValueError):
    pass


class DegenerateParameterPoint(PTMatError, ValueError):
    pass


class CoefficientNotInEigenspace(PTMatError, ValueError):
    pass


# -- phases and spectra ----------------------------------------------------

class Broken(PTMatError):
    """The matrix has no PT-symmetric (real-spectrum, diagonalizable) form."""


class ExceptionalPoint(Broken):
    """Real but defective spectrum: gamma^2 == mu^2 + nu^2."""


class BrokenOrExceptional(PTMatError, ValueError):
    pass


class GammaZero(PTMatError, ValueError):
    pass


class NotPTSymmetric(PTMatError, ValueError):
    pass


class ComplexSpectrum(PTMatError, ValueError):
    pass


class DegenerateSpectrum(PTMatError, ValueError):
    pass


# -- CPT frame -------------------------------------------------------------

class InvalidWeight(PTMatError, ValueError):
    pass


class MinusBranchSingular(PTMatError, ZeroDivisionError):
    pass


class SingularEta(PTMatError, ValueError):
    pass


# -- special cases ---------------------------------------------------------

class ExceptionalOrBroken(BrokenOrExceptional):
    pass


class MapSingular(PTMatError, ZeroDivisionError):
    pass


class DegeneratePoint(PTMatError, ValueError):
    pass
