"""Exception types raised by the construction and verification pipeline."""


class E6LieError(Exception):
    """Base class for all package errors."""


class NumericalRankAmbiguous(E6LieError):
    """Singular-value gap at the rank cutoff is too small to trust."""


class GramSchmidtDegenerate(E6LieError):
    """An intermediate Gram-Schmidt vector has vanishing norm."""


class NotClosed(E6LieError):
    """A bracket does not lie in the span of the basis."""


class AmbiguousSolution(E6LieError):
    """A least-squares system is rank deficient."""


class HighResidual(E6LieError):
    """A reconstruction system has an unexpectedly large residual.

    Carries the generator index and the residual value; signals a defect in
    the reference table entries involving that index.
    """

    def __init__(self, index: int, residual: float):
        super().__init__(f"generator {index}: residual {residual:.3e}")
        self.index = index
        self.residual = residual


class CartanDimMismatch(E6LieError):
    """The maximal abelian subalgebra found does not have dimension 6."""


class DegenerateRootSpace(E6LieError):
    """A root space has dimension different from 1."""


class CorruptDataset(E6LieError):
    """An embedded data file fails its checksum or structural checks."""


class NotAntiHermitian(E6LieError):
    """A matrix expected to be anti-Hermitian is not."""


class MissingGenerator(E6LieError):
    """A composition chain references a generator that is not available."""


class NotConverged(E6LieError):
    """Quadrature failed the order-doubling agreement test."""
