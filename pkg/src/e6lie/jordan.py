"""The exceptional Jordan algebra of 3x3 Hermitian octonionic matrices.

Elements are stored structurally: three real diagonal entries and the three
independent off-diagonal octonions

    [a1   o1   o2 ]
    [o1*  a2   o3 ]
    [o2*  o3*  a3 ]

The linear chart onto R^27 orders the components as
(a1, rho(o1), rho(o2), a2, rho(o3), a3); positions 1, 18 and 27 (1-based)
carry the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .octonion import Octonion, dot, mul, rho, rho_inv


@dataclass(frozen=True)
class JordanElement:
    a1: float
    a2: float
    a3: float
    o1: Octonion
    o2: Octonion
    o3: Octonion

    @staticmethod
    def zero() -> "JordanElement":
        z = Octonion.zero()
        return JordanElement(0.0, 0.0, 0.0, z, z, z)

    @staticmethod
    def identity() -> "JordanElement":
        z = Octonion.zero()
        return JordanElement(1.0, 1.0, 1.0, z, z, z)

    @staticmethod
    def diag(a1: float, a2: float, a3: float) -> "JordanElement":
        z = Octonion.zero()
        return JordanElement(a1, a2, a3, z, z, z)

    def trace(self) -> float:
        return self.a1 + self.a2 + self.a3

    def __add__(self, other: "JordanElement") -> "JordanElement":
        return JordanElement(
            self.a1 + other.a1, self.a2 + other.a2, self.a3 + other.a3,
            self.o1 + other.o1, self.o2 + other.o2, self.o3 + other.o3,
        )

    def __sub__(self, other: "JordanElement") -> "JordanElement":
        return JordanElement(
            self.a1 - other.a1, self.a2 - other.a2, self.a3 - other.a3,
            self.o1 - other.o1, self.o2 - other.o2, self.o3 - other.o3,
        )

    def __rmul__(self, s) -> "JordanElement":
        s = float(s)
        return JordanElement(s * self.a1, s * self.a2, s * self.a3,
                             s * self.o1, s * self.o2, s * self.o3)

    def allclose(self, other: "JordanElement", tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(phi(self) - phi(other))) <= tol)


def jordan_product(X: JordanElement, Y: JordanElement) -> JordanElement:
    """Symmetrized matrix product (XY + YX)/2, evaluated structurally."""
    c1 = X.a1 * Y.a1 + dot(X.o1, Y.o1) + dot(X.o2, Y.o2)
    c2 = X.a2 * Y.a2 + dot(X.o1, Y.o1) + dot(X.o3, Y.o3)
    c3 = X.a3 * Y.a3 + dot(X.o2, Y.o2) + dot(X.o3, Y.o3)
    q1 = 0.5 * (
        (X.a1 + X.a2) * Y.o1 + (Y.a1 + Y.a2) * X.o1
        + mul(X.o2, Y.o3.conjugate()) + mul(Y.o2, X.o3.conjugate())
    )
    q2 = 0.5 * (
        (X.a1 + X.a3) * Y.o2 + (Y.a1 + Y.a3) * X.o2
        + mul(X.o1, Y.o3) + mul(Y.o1, X.o3)
    )
    q3 = 0.5 * (
        (X.a2 + X.a3) * Y.o3 + (Y.a2 + Y.a3) * X.o3
        + mul(X.o1.conjugate(), Y.o2) + mul(Y.o1.conjugate(), X.o2)
    )
    return JordanElement(c1, c2, c3, q1, q2, q3)


def phi(X: JordanElement) -> np.ndarray:
    """Chart onto R^27 in the normative component order."""
    v = np.empty(27)
    v[0] = X.a1
    v[1:9] = rho(X.o1)
    v[9:17] = rho(X.o2)
    v[17] = X.a2
    v[18:26] = rho(X.o3)
    v[26] = X.a3
    return v


def phi_inv(v: np.ndarray) -> JordanElement:
    v = np.asarray(v, dtype=float)
    return JordanElement(
        float(v[0]), float(v[17]), float(v[26]),
        rho_inv(v[1:9]), rho_inv(v[9:17]), rho_inv(v[18:26]),
    )


# Diagonal of the trace bilinear form Tr(X o Y) in phi coordinates: the
# diagonal slots enter once, each octonion coefficient twice.
TRACE_WEIGHTS = np.ones(27)
for _blk in (slice(1, 9), slice(9, 17), slice(18, 26)):
    TRACE_WEIGHTS[_blk] = 2.0


def right_mult_matrix(Y: JordanElement) -> np.ndarray:
    """27x27 matrix of X -> Y o X in phi coordinates.

    Self-adjoint with respect to the trace form (TRACE_WEIGHTS), which is
    what Hermiticity of Y means in this chart; it is not symmetric as a
    plain matrix.
    """
    M = np.empty((27, 27))
    for k in range(27):
        e = np.zeros(27)
        e[k] = 1.0
        M[:, k] = phi(jordan_product(Y, phi_inv(e)))
    return M


def traceless_basis() -> list[JordanElement]:
    """The 26 traceless basis elements in the normative listing order.

    Slots 1 and 18 are the diagonal directions diag(1,0,-1) and
    diag(0,1,-1); the remaining slots are the single-octonion-coefficient
    off-diagonal elements.  This order fixes the Gram-Schmidt output
    downstream and must not be permuted.
    """
    out = []
    for j in range(1, 27):
        v = np.zeros(27)
        if j == 1:
            v[0], v[26] = 1.0, -1.0
        elif j == 18:
            v[17], v[26] = 1.0, -1.0
        else:
            v[j - 1] = 1.0
        out.append(phi_inv(v))
    return out


def jordan_product_tensor() -> np.ndarray:
    """Dense tensor T with T[a, b, :] = phi(e_a o e_b) on chart basis vectors."""
    T = np.zeros((27, 27, 27))
    units = [phi_inv(row) for row in np.eye(27)]
    for a in range(27):
        for b in range(a, 27):
            v = phi(jordan_product(units[a], units[b]))
            T[a, b] = v
            T[b, a] = v
    return T
