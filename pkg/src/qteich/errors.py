"""Exception hierarchy shared by all qteich modules."""


class QTeichError(Exception):
    """Base class for all domain errors raised by this package."""


class NonTriangulable(QTeichError):
    """Gluing data does not describe an ideal triangulation of the declared surface."""


class BoundaryEdge(QTeichError):
    """Operation requires an internal edge but got a boundary edge."""


class SearchBudgetExceeded(QTeichError):
    """Flip-graph search exhausted its node budget."""


class ContextMismatch(QTeichError):
    """Operands live over different algebra contexts."""


class NotElementary(QTeichError):
    """Two triangulations do not differ by a single flip or reindexing."""


class SelfFoldedFlip(QTeichError):
    """Coordinate-change map requested across a self-folded edge."""


class SingularDenominator(QTeichError):
    """Denominator of a rational expression is not invertible in this representation."""


class NotScalar(QTeichError):
    """A matrix expected to be scalar deviates from a multiple of the identity."""


class NotLocallyEquivalent(QTeichError):
    """Two triangle-representation tuples do not represent the same local representation."""


class NotIsomorphic(QTeichError):
    """No intertwiner exists between the two representations."""


class NotUnique(QTeichError):
    """Intertwiner space has dimension > 1 (reducible pair)."""

    def __init__(self, dimension, message=None):
        self.dimension = dimension
        super().__init__(message or f"intertwiner space has dimension {dimension}")


class DegenerateInvariant(QTeichError):
    """An edge invariant sits at the degenerate value -1."""


class NotFixedShadow(QTeichError):
    """Shear-coordinate vector is not fixed by the mapping class within tolerance."""


class NotPentagonConfiguration(QTeichError):
    """The two chosen edges are not the diagonals of an embedded pentagon."""
