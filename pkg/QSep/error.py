class QSepError(Exception):
    """Base class of every exception raised by QSep."""
    def __init__(self, msg: str = "QSep came across an unexpected issue."):
        super(QSepError, self).__init__(msg)


class MalformedInput(QSepError):
    """An Exception raised when an input is structurally wrong (bad shape, bad field, unknown name)."""
    def __init__(self, msg: str = "The input supplied to QSep is malformed."):
        super(MalformedInput, self).__init__(msg)


class InvariantViolation(QSepError):
    """An Exception raised when a well-formed input breaks a numerical invariant."""
    def __init__(self, msg: str = "An input violated a numerical invariant."):
        super(InvariantViolation, self).__init__(msg)


class NonHermitianInput(InvariantViolation):
    r"""
    An Exception raised when a matrix expected to be Hermitian is not.

    Parameters
    ----------
    deviation: :class:`float`
        The largest entry of :math:`|A - A^\dagger|`.
    tolerance: :class:`float`
        The tolerance that was exceeded.
    """
    def __init__(self, deviation: float, tolerance: float):
        self.deviation = deviation
        self.tolerance = tolerance
        super(NonHermitianInput, self).__init__(
            f"Matrix is not Hermitian: max |A - A^H| = {deviation:.3e} exceeds {tolerance:.1e}.")


class DimensionMismatch(MalformedInput):
    """An Exception raised when matrix dimensions are unsupported or incompatible."""
    def __init__(self, msg: str = "Matrix dimensions are incompatible."):
        super(DimensionMismatch, self).__init__(msg)


class NonUnitVector(InvariantViolation):
    """
    An Exception raised when a direction is not a unit vector.

    Parameters
    ----------
    norm: :class:`float`
        The norm of the offending vector.
    """
    def __init__(self, norm: float):
        self.norm = norm
        super(NonUnitVector, self).__init__(f"Expected a unit vector, got norm {norm!r}.")


class InvalidDensityMatrix(InvariantViolation):
    """An Exception raised when a matrix is not Hermitian, trace-one and positive semidefinite."""
    def __init__(self, msg: str = "The matrix is not a valid density matrix."):
        super(InvalidDensityMatrix, self).__init__(msg)


class UnnormalizedWeights(InvariantViolation):
    """
    An Exception raised when ensemble weights are negative or do not sum to one.

    Parameters
    ----------
    deficit: :class:`float`
        ``1 - sum(weights)``.
    """
    def __init__(self, deficit: float, msg: str = None):
        self.deficit = deficit
        super(UnnormalizedWeights, self).__init__(
            msg or f"Ensemble weights do not sum to 1 (deficit {deficit:.3e}).")


class InvalidWernerParameter(InvariantViolation):
    """An Exception raised when the Werner mixing parameter is outside [0, 1]."""
    def __init__(self, beta: float):
        self.beta = beta
        super(InvalidWernerParameter, self).__init__(f"Werner beta must lie in [0, 1], got {beta!r}.")


class UnknownStateKind(MalformedInput):
    """An Exception raised when a named state or a state-spec kind is not known."""
    def __init__(self, kind):
        self.kind = kind
        super(UnknownStateKind, self).__init__(f"Unknown state kind: {kind!r}.")


class ImaginaryResidue(InvariantViolation):
    """
    An Exception raised when an expectation value that must be real carries an imaginary part.

    This signals a non-Hermitian observable upstream.
    """
    def __init__(self, residue: float):
        self.residue = residue
        super(ImaginaryResidue, self).__init__(f"Expectation value has imaginary part {residue:.3e}.")


class NonProjectorInput(InvariantViolation):
    """An Exception raised when an observable that must be a projector fails P^2 = P."""
    def __init__(self, label: str = "observable"):
        super(NonProjectorInput, self).__init__(f"{label} is not a projector.")


class NotPure(InvariantViolation):
    """
    An Exception raised when the pure-state criterion is asked about a mixed state.

    Use the mixed-state criteria (band checks, PPT, diagonal sums) instead.
    """
    def __init__(self, largest_eigenvalue: float):
        self.largest_eigenvalue = largest_eigenvalue
        super(NotPure, self).__init__(
            f"State is not pure (largest eigenvalue {largest_eigenvalue:.6f}); "
            f"use the mixed-state criteria instead.")


class InvalidMode(MalformedInput):
    """An Exception raised when an averaging mode is not supported by the operation."""
    def __init__(self, mode):
        self.mode = mode
        super(InvalidMode, self).__init__(f"Invalid averaging mode: {mode!r}.")


class ModeMismatch(MalformedInput):
    """An Exception raised when a curve or an ensemble belongs to a different mode than requested."""
    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super(ModeMismatch, self).__init__(f"Mode mismatch: expected {expected!r}, got {got!r}.")


class InsufficientCurve(MalformedInput):
    """An Exception raised when a curve has too few points, too short a span or an uneven grid."""
    def __init__(self, msg: str = "The correlation curve cannot support the requested fit."):
        super(InsufficientCurve, self).__init__(msg)


class DegenerateFit(InvariantViolation):
    """An Exception raised when the least-squares design matrix is rank deficient."""
    def __init__(self, msg: str = "The least-squares fit is degenerate."):
        super(DegenerateFit, self).__init__(msg)


class ZeroReferenceRate(InvariantViolation):
    """An Exception raised when the no-polarizer coincidence rate R0 is zero."""
    def __init__(self):
        super(ZeroReferenceRate, self).__init__("The reference rate R0 must be positive.")


class NegativeRate(InvariantViolation):
    """An Exception raised when a coincidence rate is negative."""
    def __init__(self, name: str, value: float):
        super(NegativeRate, self).__init__(f"Rate {name} must be non-negative, got {value!r}.")


class UnknownFigure(MalformedInput):
    """An Exception raised when a figure index other than 1, 2 or 3 is requested."""
    def __init__(self, index):
        self.index = index
        super(UnknownFigure, self).__init__(f"Unknown figure index {index!r}; expected 1, 2 or 3.")


class EigenSolverDidNotConverge(QSepError):
    """An Exception raised when the Jacobi eigensolver exhausts its sweep budget."""
    def __init__(self, sweeps: int, off_norm: float):
        self.sweeps = sweeps
        self.off_norm = off_norm
        super(EigenSolverDidNotConverge, self).__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e}).")


class TsirelsonViolation(QSepError):
    """An Exception raised when a CHSH value exceeds 2*sqrt(2), which can only be a bug."""
    def __init__(self, value: float):
        self.value = value
        super(TsirelsonViolation, self).__init__(f"|S| = {value!r} exceeds the Tsirelson bound.")


class MalformedStateSpec(MalformedInput):
    r"""
    An Exception raised when a JSON state spec cannot be turned into a state.

    Parameters
    ----------
    field: :class:`str`
        Path of the offending field, e.g. ``entries[2].left``. Empty for syntax errors.
    msg: :class:`str`
        What is wrong with it.
    line: Optional[:class:`int`]
        Line of a JSON syntax error.
    column: Optional[:class:`int`]
        Column of a JSON syntax error.
    """
    def __init__(self, field: str, msg: str, line: int = None, column: int = None):
        self.field = field
        self.line = line
        self.column = column
        where = f"line {line}, column {column}" if line is not None else f"field '{field or '<root>'}'"
        super(MalformedStateSpec, self).__init__(f"Malformed state spec at {where}: {msg}")


class InvalidRunConfig(MalformedInput):
    """An Exception raised when a run configuration breaks its invariants."""
    def __init__(self, msg: str = "The run configuration is invalid."):
        super(InvalidRunConfig, self).__init__(msg)
