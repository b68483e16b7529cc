"""Cartan subalgebra, root system, homology exponents, and group volume.

Roots are computed numerically from the adjoint action and then rotated
into the standard orthonormal presentation, where the 72 roots are the 40
integer vectors +-L_i +- L_j (i < j <= 5) and the 32 vectors
(+-L1 ... +-L5 +- sqrt3 L6)/2 with an even number of minus signs among the
first five.  The compact group volume comes from the product of odd-sphere
volumes times a lattice factor derived from the coroot lattice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .construct import StructureTensor
from .errors import CartanDimMismatch, DegenerateRootSpace

RANK = 6
N_ROOTS = 72

# simple roots of the standard presentation (rows; columns are L1..L6)
STANDARD_SIMPLE_ROOTS = np.array([
    [1, 1, 0, 0, 0, 0],
    [-1, 1, 0, 0, 0, 0],
    [0, -1, 1, 0, 0, 0],
    [0, 0, -1, 1, 0, 0],
    [0, 0, 0, -1, 1, 0],
    [0.5, -0.5, -0.5, -0.5, -0.5, math.sqrt(3) / 2],
])

# simple roots of the 52-dimensional subalgebra's root system in its own
# standard 4-dimensional presentation (long roots normalized to length^2 2)
STANDARD_F4_SIMPLE_ROOTS = np.array([
    [0, 1, -1, 0],
    [0, 0, 1, -1],
    [0, 0, 0, 1],
    [0.5, -0.5, -0.5, -0.5],
])


def adjoint_matrix(tensor: StructureTensor, coeffs: np.ndarray) -> np.ndarray:
    """Matrix of ad(x) on coefficient vectors: (ad x y)_K = x_I y_J s_IJK."""
    return np.einsum("i,ijk->kj", coeffs, tensor.dense)


def _kernel(m: np.ndarray, rtol: float = 1e-8) -> np.ndarray:
    evals, evecs = np.linalg.eigh(m.T @ m)
    sing = np.sqrt(np.clip(evals, 0.0, None))
    mask = sing < rtol * max(sing[-1], 1.0)
    return evecs[:, mask]


def find_cartan(tensor: StructureTensor, seed: int = 0) -> np.ndarray:
    """Orthonormal basis (rows) of a maximal abelian subalgebra.

    The centralizer of a generic element is already a Cartan subalgebra;
    the greedy loop intersects centralizers of random elements until the
    dimension stops shrinking, then validates commutativity.
    """
    rng = np.random.default_rng(seed)
    n = tensor.dense.shape[0]
    basis = np.eye(n)
    for _ in range(8):
        x = basis @ rng.normal(size=basis.shape[0])
        x /= np.linalg.norm(x)
        ker = _kernel(adjoint_matrix(tensor, x))
        # intersect current span with the kernel
        proj = basis.T @ (basis @ ker)
        q, r = np.linalg.qr(proj)
        keep = np.abs(np.diag(r)) > 1e-10
        basis = q[:, : int(keep.sum())].T if keep.all() else q[:, keep].T
        if basis.shape[0] == RANK:
            break
    if basis.shape[0] != RANK:
        raise CartanDimMismatch(f"abelian dimension {basis.shape[0]}")
    # orthonormalize rows (coefficients of an orthonormal basis, so plain QR)
    basis = np.linalg.qr(basis.T)[0].T
    worst = max(
        float(np.max(np.abs(np.einsum("i,j,ijk->k", a, b, tensor.dense))))
        for a in basis for b in basis
    )
    if worst > 1e-10:
        raise CartanDimMismatch(f"candidate subalgebra not abelian ({worst:.3e})")
    return basis


@dataclass(frozen=True)
class RootDatum:
    cartan: np.ndarray           # (6, 78) orthonormal coefficient rows
    roots: np.ndarray            # (72, 6) in the numeric Cartan frame
    positive: np.ndarray         # (36, 6)
    simple: np.ndarray           # (6, 6)
    standard_roots: np.ndarray   # (72, 6) rotated+snapped standard frame
    cartan_matrix: np.ndarray    # (6, 6) integer


def _lex_positive(root: np.ndarray, tol: float = 1e-8) -> bool:
    """Sign of the first nonzero coordinate, scanned from the last one."""
    for x in root[::-1]:
        if abs(x) > tol:
            return x > 0
    return False


def _simple_roots(positive: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    sums = positive[:, None, :] + positive[None, :, :]
    simple = []
    for r in positive:
        diff = np.abs(sums - r).max(axis=2)
        if not (diff < tol).any():
            simple.append(r)
    return np.array(simple)


def cartan_matrix_of(simple: np.ndarray) -> np.ndarray:
    g = simple @ simple.T
    c = 2 * g / np.diag(g)[None, :]
    snapped = np.rint(c)
    if np.max(np.abs(c - snapped)) > 1e-6:
        raise DegenerateRootSpace("Cartan matrix entries not integral")
    return snapped.astype(int)


def _match_to_standard(simple: np.ndarray) -> np.ndarray:
    """Orthogonal map sending the found simple roots to the standard ones.

    The assignment is fixed by matching Cartan matrices over all index
    permutations; the resulting linear map is orthogonal because both
    systems are isometric presentations of the same root system.
    """
    c_found = cartan_matrix_of(simple)
    c_std = cartan_matrix_of(STANDARD_SIMPLE_ROOTS)
    for perm in itertools.permutations(range(RANK)):
        p = np.array(perm)
        if np.array_equal(c_found[np.ix_(p, p)], c_std):
            rot = np.linalg.solve(simple[p], STANDARD_SIMPLE_ROOTS).T
            if np.max(np.abs(rot @ rot.T - np.eye(RANK))) < 1e-6:
                return rot
    raise DegenerateRootSpace("no permutation matches the standard Cartan matrix")


def _snap_standard(roots: np.ndarray) -> np.ndarray:
    """Snap to the half-integer / sqrt3-half-integer lattice (tol 1e-6)."""
    snapped = roots.copy()
    snapped[:, :5] = np.rint(roots[:, :5] * 2) / 2
    s3 = math.sqrt(3) / 2
    snapped[:, 5] = np.rint(roots[:, 5] / s3) * s3
    if np.max(np.abs(snapped - roots)) > 1e-6:
        raise DegenerateRootSpace("roots do not lie on the standard lattice")
    return snapped


def compute_roots(tensor: StructureTensor, cartan: np.ndarray,
                  seed: int = 0) -> RootDatum:
    """Joint adjoint eigenvalues on the complexified algebra.

    A generic combination of the Cartan elements separates all root spaces;
    each nonzero eigenvector carries the 6-tuple of eigenvalues (divided by
    i) as its root.
    """
    rng = np.random.default_rng(seed + 1)
    ads = np.array([adjoint_matrix(tensor, h) for h in cartan])
    weights = rng.normal(size=RANK)
    m = np.tensordot(weights, ads, axes=(0, 0))
    evals, evecs = np.linalg.eig(m)
    order = np.argsort(-np.abs(evals))
    nonzero = order[: N_ROOTS]
    lam = np.abs(evals[nonzero])
    if lam.min() < 1e-6 or np.abs(evals[order[N_ROOTS]]) > 1e-6:
        raise DegenerateRootSpace("adjoint spectrum does not split 72 + 6")
    gaps = np.abs(np.subtract.outer(evals[nonzero], evals[nonzero]))
    np.fill_diagonal(gaps, np.inf)
    if gaps.min() < 1e-8:
        raise DegenerateRootSpace("joint eigenvalues are not simple")

    roots = np.empty((N_ROOTS, RANK))
    for n, idx in enumerate(nonzero):
        v = evecs[:, idx]
        denom = np.vdot(v, v)
        for i in range(RANK):
            val = np.vdot(v, ads[i] @ v) / denom
            if abs(val.real) > 1e-8:
                raise DegenerateRootSpace(f"root coordinate not imaginary: {val}")
            roots[n, i] = val.imag
    positive = np.array([r for r in roots if _lex_positive(r)])
    if positive.shape[0] != N_ROOTS // 2:
        raise DegenerateRootSpace(f"{positive.shape[0]} positive roots")
    simple = _simple_roots(positive)
    if simple.shape[0] != RANK:
        raise DegenerateRootSpace(f"{simple.shape[0]} simple roots")
    rot = _match_to_standard(simple)
    standard = _snap_standard(roots @ rot.T)
    return RootDatum(
        cartan=cartan,
        roots=roots,
        positive=positive,
        simple=simple,
        standard_roots=standard,
        cartan_matrix=cartan_matrix_of(simple),
    )


def root_heights(simple: np.ndarray, positive: np.ndarray) -> np.ndarray:
    """Heights (sums of simple-root coefficients) of the positive roots."""
    coeffs = np.linalg.solve((simple @ simple.T).T, simple @ positive.T).T
    snapped = np.rint(coeffs)
    if np.max(np.abs(coeffs - snapped)) > 1e-6:
        raise DegenerateRootSpace("positive roots not integral over the simple ones")
    if snapped.min() < 0:
        raise DegenerateRootSpace("negative expansion coefficient")
    return snapped.sum(axis=1).astype(int)


def homology_sphere_dimensions(simple: np.ndarray,
                               positive: np.ndarray) -> tuple[int, ...]:
    """Odd sphere dimensions 2 m_i + 1 from the height partition.

    The number of positive roots of height j equals the number of exponents
    m_i >= j; reading the height histogram columnwise yields the exponents.
    """
    heights = root_heights(simple, positive)
    counts = np.bincount(heights)[1:]  # counts[j-1] = number of roots of height j
    rank = simple.shape[0]
    # the height histogram is the conjugate partition of the exponents
    exps = [int(np.sum(counts >= r)) for r in range(rank, 0, -1)]
    return tuple(2 * m + 1 for m in sorted(exps))


def sphere_volume_exact(n: int) -> tuple[Fraction, int]:
    """Unit n-sphere volume for odd n as (rational coefficient, power of pi)."""
    if n % 2 != 1:
        raise ValueError("only odd-dimensional spheres carry the factorization")
    m = (n - 1) // 2
    return Fraction(2, math.factorial(m)), m + 1


def sphere_product_exact(dims) -> tuple[Fraction, int]:
    coeff, power = Fraction(1), 0
    for n in dims:
        c, p = sphere_volume_exact(n)
        coeff *= c
        power += p
    return coeff, power


def macdonald_volume(dims, lattice_factor: float) -> float:
    """lattice_factor times the product of unit odd-sphere volumes."""
    if lattice_factor <= 0:
        raise ValueError("lattice factor must be positive")
    coeff, power = sphere_product_exact(dims)
    return lattice_factor * float(coeff) * math.pi ** power


def generate_root_system(simple: np.ndarray) -> np.ndarray:
    """Closure of the simple roots under reflections through known roots."""
    roots = [tuple(np.round(r, 12)) for r in simple]
    seen = set(roots)
    stack = list(simple)
    all_roots = list(simple)
    while stack:
        alpha = stack.pop()
        for beta in list(all_roots):
            for a, b in ((alpha, beta), (beta, alpha)):
                r = b - 2 * (a @ b) / (a @ a) * a
                key = tuple(np.round(r, 12))
                if key not in seen:
                    seen.add(key)
                    all_roots.append(r)
                    stack.append(r)
        # also include negatives
        key = tuple(np.round(-alpha, 12))
        if key not in seen:
            seen.add(key)
            all_roots.append(-alpha)
            stack.append(-alpha)
    return np.array(all_roots)


def lattice_factor_from_roots(simple: np.ndarray) -> float:
    """Lattice factor of the Macdonald product for a compact simple group.

    Equal to the coroot-lattice covolume times 2^(number of positive roots)
    times the product over positive roots of 2/|root|^2, in the metric where
    the construction's roots live (long roots of length^2 2 here).
    """
    roots = generate_root_system(simple)
    # positives: nonnegative expansion over the simple roots
    coeffs = np.linalg.solve((simple @ simple.T).T, simple @ roots.T).T
    positive = roots[coeffs.min(axis=1) > -1e-9]
    coroots_simple = 2 * simple / np.einsum("ij,ij->i", simple, simple)[:, None]
    covol = math.sqrt(abs(np.linalg.det(coroots_simple @ coroots_simple.T)))
    lengths = np.einsum("ij,ij->i", positive, positive)
    return covol * (2.0 ** len(positive)) * float(np.prod(2.0 / lengths))
