"""Exception types shared across the package."""


class HypersliceError(Exception):
    """Base class for all package-specific errors."""


class DomainError(HypersliceError):
    """A point fell outside the declared domain of a function or stem."""


class RealSliceError(DomainError):
    """An operation that needs |y_h| >= delta was attempted on a real slice."""


class NegativeRadicandError(HypersliceError):
    """The determinant radicand came out negative beyond tolerance.

    This indicates a formula or input bug, never a legitimate value, so it
    is reported instead of being clamped silently.
    """


class ZeroPivotError(HypersliceError):
    """A matrix entry required to be nonzero by an inverse formula is zero."""


class SingularMatrixError(HypersliceError):
    """A matrix (or Schur-type complement) required to be invertible is not."""


class ExcludedPointError(DomainError):
    """The input is the single point excluded from the domain of a map."""


class FreenessViolation(HypersliceError):
    """A nonidentity group word nearly fixes a sampled point.

    Attributes:
        word: tuple of generator labels describing the offending element.
        point: the sampled point it fails to move.
        displacement: how far the point actually moved.
    """

    def __init__(self, word, point, displacement):
        self.word = word
        self.point = point
        self.displacement = displacement
        super().__init__(
            f"group word {'.'.join(word) or '<id>'} moves a sampled point "
            f"by only {displacement:.3e}"
        )


class ExprSyntaxError(HypersliceError):
    """Malformed expression source; carries the byte offset of the error."""

    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


class ArityError(HypersliceError):
    """A variable index exceeds the declared number of variables."""


class EvalError(HypersliceError):
    """Expression evaluation failed; carries the source span of the node."""

    def __init__(self, message, span):
        self.span = span
        super().__init__(f"{message} (source span {span[0]}..{span[1]})")
