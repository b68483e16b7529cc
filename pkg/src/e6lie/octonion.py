"""Octonion arithmetic over the fixed basis e1..e8 (e1 = unit).

Coefficients are stored in a length-8 float array; slot ``i`` of the array
holds the coefficient of ``e_{i+1}`` (the single place where the 1-based
basis labels meet 0-based storage).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Signed multiplication table: MUL_TABLE[i-1][j-1] = s*k encodes e_i e_j = s e_k.
# This fixed table is the normative convention for the whole package; the
# basis is not re-derived from a Fano-plane labeling at runtime.
MUL_TABLE = (
    (1, 2, 3, 4, 5, 6, 7, 8),
    (2, -1, 5, 8, -3, 7, -6, -4),
    (3, -5, -1, 6, 2, -4, 8, -7),
    (4, -8, -6, -1, 7, 3, -5, 2),
    (5, 3, -2, -7, -1, 8, 4, -6),
    (6, -7, 4, -3, -8, -1, 2, 5),
    (7, 6, -8, 5, -4, -2, -1, 3),
    (8, 4, 7, -2, 6, -5, -3, -1),
)

# Dense bilinear form of the table: PRODUCT_TENSOR[i, j, k] is the coefficient
# of e_{k+1} in e_{i+1} e_{j+1}.
PRODUCT_TENSOR = np.zeros((8, 8, 8))
for _i in range(8):
    for _j in range(8):
        _t = MUL_TABLE[_i][_j]
        PRODUCT_TENSOR[_i, _j, abs(_t) - 1] = 1.0 if _t > 0 else -1.0


@dataclass(frozen=True)
class Octonion:
    """An octonion as a coefficient vector over e1..e8."""

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(8))

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (8,):
            raise ValueError(f"octonion needs 8 coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @staticmethod
    def basis(k: int) -> "Octonion":
        """Basis element e_k, 1-based."""
        c = np.zeros(8)
        c[k - 1] = 1.0
        return Octonion(c)

    @staticmethod
    def unit() -> "Octonion":
        return Octonion.basis(1)

    @staticmethod
    def zero() -> "Octonion":
        return Octonion()

    def conjugate(self) -> "Octonion":
        c = -self.coeffs
        c[0] = self.coeffs[0]
        return Octonion(c)

    def norm_sq(self) -> float:
        return float(self.coeffs @ self.coeffs)

    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq()))

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.coeffs + other.coeffs)

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.coeffs - other.coeffs)

    def __neg__(self) -> "Octonion":
        return Octonion(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return mul(self, other)
        return Octonion(self.coeffs * float(other))

    def __rmul__(self, scalar) -> "Octonion":
        return Octonion(self.coeffs * float(scalar))

    def allclose(self, other: "Octonion", tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= tol)


def mul(a: Octonion, b: Octonion) -> Octonion:
    """Bilinear extension of the multiplication table."""
    return Octonion(np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, PRODUCT_TENSOR))


def rho(a: Octonion) -> np.ndarray:
    """Coefficient vector of ``a`` in the fixed basis order."""
    return a.coeffs.copy()


def rho_inv(v: np.ndarray) -> Octonion:
    """Inverse of :func:`rho`."""
    return Octonion(np.asarray(v, dtype=float).copy())


def dot(a: Octonion, b: Octonion) -> float:
    """Euclidean pairing of coefficients; equals the real part of a b*."""
    return float(a.coeffs @ b.coeffs)
