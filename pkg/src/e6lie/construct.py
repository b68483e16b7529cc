"""Construction of the 78-dimensional algebra in its 27-dimensional chart.

Pipeline: the 52-dimensional derivation algebra of the Jordan algebra is
computed as a nullspace; the 26 coset generators are Jordan right
multiplications by the traceless basis, Gram-Schmidt orthonormalized in the
normative listing order, rotated into the frame that splits off the
singlet coordinate, and (compact form) multiplied by i.  All public
matrices live in the orthonormal chart, where compact generators are
anti-Hermitian and exponentials are unitary; `to_table_frame` converts to
the chart used by the reference tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import oracle
from .errors import (
    AmbiguousSolution,
    GramSchmidtDegenerate,
    HighResidual,
    NotClosed,
    NumericalRankAmbiguous,
)
from .jordan import (
    TRACE_WEIGHTS,
    jordan_product_tensor,
    right_mult_matrix,
    traceless_basis,
)
from .oracle import to_orthonormal_frame, to_table_frame

N = 78
N_F4 = 52
N_COSET = 26
DIM_REP = 27

# rank decisions use singular values relative to the largest one
RANK_RTOL = 1e-8
# minimum acceptable ratio between the smallest kept and largest discarded
# singular value at the rank cutoff
RANK_GAP = 1e6 * np.finfo(float).eps


def _rotation_matrix() -> np.ndarray:
    """Orthogonal change of chart isolating the singlet direction.

    Replaces the three diagonal coordinates (slots 1, 18, 27) by the
    orthonormal combinations (1,-1,0)/sqrt2, (1,1,-2)/sqrt6, (1,1,1)/sqrt3
    and leaves the octonion coordinates alone; afterwards the identity
    element points along the last coordinate and the first 26 carry the
    irreducible action.
    """
    R = np.eye(DIM_REP)
    d = [0, 17, 26]
    block = np.array([
        [1 / np.sqrt(2), -1 / np.sqrt(2), 0],
        [1 / np.sqrt(6), 1 / np.sqrt(6), -2 / np.sqrt(6)],
        [1 / np.sqrt(3), 1 / np.sqrt(3), 1 / np.sqrt(3)],
    ])
    for a, ra in enumerate(d):
        for b, cb in enumerate(d):
            R[ra, cb] = block[a, b]
    return R


ROTATION = _rotation_matrix()


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Invariant pairing <a,b> = -(1/6) Tr(ab)."""
    return -np.trace(a @ b) / 6


def bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def derivation_space() -> list[np.ndarray]:
    """Basis of the derivation algebra, dimension exactly 52.

    A matrix D is a derivation when D(X o Y) = DX o Y + X o DY for all X, Y;
    by bilinearity it is enough to impose the identity on unordered pairs of
    chart basis vectors, giving a linear system on the 729 entries of D
    whose nullspace is returned.  Output is in the plain chart (derivations
    annihilate the identity element's coordinate vector there).
    """
    T = jordan_product_tensor()
    pairs = [(a, b) for a in range(DIM_REP) for b in range(a, DIM_REP)]
    A = np.zeros((len(pairs), DIM_REP, DIM_REP, DIM_REP))
    for r, (a, b) in enumerate(pairs):
        A[r, range(DIM_REP), range(DIM_REP), :] += T[a, b, :]
        A[r, :, :, a] -= T[:, b, :].T
        A[r, :, :, b] -= T[a, :, :].T
    A = A.reshape(len(pairs) * DIM_REP, DIM_REP * DIM_REP)

    # nullspace via the normal matrix; eigenvalues are squared singular values
    gram = A.T @ A
    evals, evecs = np.linalg.eigh(gram)
    sing = np.sqrt(np.clip(evals, 0.0, None))
    smax = sing[-1]
    null_mask = sing < RANK_RTOL * smax
    nullity = int(null_mask.sum())
    kept_min = sing[~null_mask].min()
    null_max = float(sing[null_mask].max())
    if (kept_min - null_max) / smax < RANK_GAP:
        raise NumericalRankAmbiguous(
            f"gap at rank cutoff too small: kept {kept_min:.3e}, "
            f"discarded {null_max:.3e}"
        )
    if nullity != N_F4:
        raise NumericalRankAmbiguous(f"derivation nullity {nullity}, expected {N_F4}")
    return [evecs[:, i].reshape(DIM_REP, DIM_REP) for i in range(nullity)]


def _orthonormalize(elements: list[np.ndarray]) -> list[np.ndarray]:
    """Lower-triangular re-combination making the family orthonormal in <,>."""
    gram = np.array([[inner(a, b).real for b in elements] for a in elements])
    L = np.linalg.cholesky(gram)
    co = np.linalg.inv(L)
    stack = np.array(elements)
    return list(np.einsum("ij,jkl->ikl", co, stack))


@dataclass(frozen=True)
class LieBasis:
    """Ordered basis of 78 generators in the orthonormal chart.

    Indices 1..52 form the derivation block, 53..78 the coset block.  For
    the compact form all elements are anti-Hermitian and traceless and the
    pairing Gram matrix is the identity; for the split form the coset block
    is real symmetric-weighted and the pairing restricted to it is -1.
    """

    form: str
    elements: tuple[np.ndarray, ...]

    def __getitem__(self, index: int) -> np.ndarray:
        """1-based access following the tabulated numbering."""
        return self.elements[index - 1]

    def gram_matrix(self) -> np.ndarray:
        stack = np.array(self.elements)
        return -np.einsum("aij,bji->ab", stack, stack).real / 6

    def gram_deviation(self) -> float:
        expected = np.diag([1.0] * N_F4 + ([1.0] * N_COSET if self.form == "compact"
                                           else [-1.0] * N_COSET))
        return float(np.max(np.abs(self.gram_matrix() - expected)))

    def table_frame(self) -> list[np.ndarray]:
        return [to_table_frame(m) for m in self.elements]


def coset_generators(form: str = "compact") -> list[np.ndarray]:
    """The 26 generators completing the derivation block, normative order.

    Right multiplications by the traceless basis, Gram-Schmidt under the
    trace pairing in listing order, normalized to -sqrt6 times the unit
    vector, rotated; the compact form multiplies by i.  Output in the
    orthonormal chart.
    """
    econi = [right_mult_matrix(Y) for Y in traceless_basis()]
    ortho: list[np.ndarray] = []
    for M in econi:
        V = M.copy()
        for P in ortho:
            V -= np.trace(M @ P) / np.trace(P @ P) * P
        ortho.append(V)
    out = []
    for V in ortho:
        norm_sq = np.trace(V @ V)
        if norm_sq < 1e-10:
            raise GramSchmidtDegenerate(f"norm^2 {norm_sq:.3e} at element {len(out) + 53}")
        M = -np.sqrt(6) * V / np.sqrt(norm_sq)
        M = ROTATION @ M @ ROTATION.T
        M = to_orthonormal_frame(M)
        out.append(1j * M if form == "compact" else M + 0j)
    return out


def f4_block() -> list[np.ndarray]:
    """Orthonormal basis of the rotated derivation algebra (both forms)."""
    ders = [ROTATION @ D @ ROTATION.T for D in derivation_space()]
    ders = [to_orthonormal_frame(D) for D in ders]
    return [D + 0j for D in _orthonormalize(ders)]


def build_e6(form: str = "compact") -> LieBasis:
    """Assemble the full 78-element basis.

    The derivation block is an (arbitrary but deterministic) orthonormal
    basis; `reconstruct_f4_basis` recovers the tabulated generators 1..52
    from it.  The coset block 53..78 is normative and matches the reference
    matrices entrywise.
    """
    if form not in ("compact", "split"):
        raise ValueError(f"unknown form {form!r}")
    return LieBasis(form=form, elements=tuple(f4_block() + coset_generators(form)))


@dataclass(frozen=True)
class StructureTensor:
    """Totally antisymmetric constants s(I,J,K) of an orthonormal basis."""

    dense: np.ndarray  # (78, 78, 78) float array

    def value(self, i: int, j: int, k: int) -> float:
        """1-based lookup with permutation signs applied on read."""
        return float(self.dense[i - 1, j - 1, k - 1])

    def canonical_entries(self, tol: float = 1e-12):
        """Sorted nonzero entries with I < J < K."""
        out = []
        n = self.dense.shape[0]
        for i in range(n):
            for j in range(i + 1, n):
                row = self.dense[i, j]
                for k in np.nonzero(np.abs(row) > tol)[0]:
                    if k > j:
                        out.append((i + 1, j + 1, int(k) + 1, float(row[k])))
        return out

    def antisymmetry_deviation(self) -> float:
        s = self.dense
        return float(max(
            np.max(np.abs(s + np.transpose(s, (1, 0, 2)))),
            np.max(np.abs(s - np.transpose(s, (1, 2, 0)))),
        ))

    def jacobi_residual(self) -> float:
        """max over I,J,K,L of the cyclic double contraction."""
        s = self.dense
        worst = 0.0
        for i in range(s.shape[0]):
            t1 = np.einsum("jm,mkl->jkl", s[i], s)
            t2 = np.einsum("jkm,ml->jkl", s, s[:, i, :])
            t3 = np.transpose(np.einsum("km,mjl->kjl", -s[i], s), (1, 0, 2))
            worst = max(worst, float(np.max(np.abs(t1 + t2 + t3))))
        return worst


def structure_constants(basis: LieBasis | list[np.ndarray],
                        closure_tol: float = 1e-9) -> StructureTensor:
    """All pairwise bracket coefficients of an orthonormal family.

    Raises NotClosed if some bracket leaves the span, and checks that the
    coefficients come out real (imaginary parts below 1e-11 are discarded).
    """
    elements = basis.elements if isinstance(basis, LieBasis) else basis
    stack = np.array(elements)
    br = np.einsum("aij,bjk->abik", stack, stack)
    br = br - np.transpose(br, (1, 0, 2, 3))
    raw = -np.einsum("abik,cki->abc", br, stack) / 6
    max_imag = float(np.max(np.abs(raw.imag)))
    if max_imag > 1e-11:
        raise NotClosed(f"structure constants not real: imag {max_imag:.3e}")
    s = raw.real
    recon = np.einsum("abc,cik->abik", s, stack)
    closure = float(np.max(np.abs(br - recon)))
    if closure > closure_tol:
        raise NotClosed(f"bracket closure residual {closure:.3e}")
    return StructureTensor(dense=s)


@dataclass(frozen=True)
class F4Reconstruction:
    """Tabulated generators 1..52 recovered from the reference constants."""

    elements: tuple[np.ndarray, ...]  # orthonormal chart, index I-1
    residuals: np.ndarray  # per-generator residual over kept equations
    dropped: dict[int, list[tuple[int, int, float, float]]]
    # I -> [(J, K, tabulated value, value implied by the solution)]

    def __getitem__(self, index: int) -> np.ndarray:
        return self.elements[index - 1]


def reconstruct_f4_basis(
    constants: oracle.OracleStructureConstants | None = None,
    coset: list[np.ndarray] | None = None,
    derivations: list[np.ndarray] | None = None,
    *,
    strict: bool = False,
    residual_tol: float = 1e-6,
    outlier_tol: float = 0.1,
    max_dropped: int = 3,
) -> F4Reconstruction:
    """Solve for each tabulated derivation generator by least squares.

    For generator I the unknown X ranges over the derivation algebra and the
    equations are <[X, c_J], c_K> = s(I,J,K) over all coset pairs J < K
    (unlisted pairs are zero).  The coset representation is faithful, so
    each system is uniquely solvable.  Rows inconsistent with the unique
    solution of the remaining ones are dropped one at a time (at most
    `max_dropped`); the dropped rows, with the values the solution implies,
    are the table's defect diagnostics.  With strict=True nothing is
    dropped and an inconsistent system raises HighResidual.
    """
    if constants is None:
        constants = oracle.load_structure_constants(curated=False)
    if coset is None:
        coset = coset_generators("compact")
    if derivations is None:
        derivations = [d + 0j for d in _orthonormalize(
            [to_orthonormal_frame(ROTATION @ D @ ROTATION.T) for D in derivation_space()]
        )]

    pairs = [(j, k) for j in range(53, 79) for k in range(j + 1, 79)]
    pair_index = {p: n for n, p in enumerate(pairs)}
    cs = {i: coset[i - 53] for i in range(53, 79)}

    design = np.zeros((len(pairs), N_F4))
    for alpha, B in enumerate(derivations):
        for n, (j, k) in enumerate(pairs):
            design[n, alpha] = inner(bracket(B, cs[j]), cs[k]).real

    rhs = np.zeros((N_F4 + 1, len(pairs)))
    for row in constants.rows:
        if not (1 <= row.i <= N_F4 and (row.j, row.k) in pair_index):
            raise AmbiguousSolution(f"row {row} outside the reconstruction layout")
        rhs[row.i, pair_index[(row.j, row.k)]] = row.value

    elements, residuals, dropped = [], [], {}
    for i in range(1, N_F4 + 1):
        b = rhs[i]
        keep = np.ones(len(pairs), dtype=bool)
        x = None
        for _ in range(max_dropped + 1):
            x, _, rank, _ = np.linalg.lstsq(design[keep], b[keep], rcond=None)
            if rank != N_F4:
                raise AmbiguousSolution(f"generator {i}: design rank {rank}")
            resid = np.abs(design @ x - b)
            worst = int(np.argmax(resid * keep))
            if strict or resid[worst] <= outlier_tol:
                break
            keep[worst] = False
        final = float(np.linalg.norm((design @ x - b)[keep]))
        if final > residual_tol:
            raise HighResidual(i, final)
        if (~keep).any():
            fit = design @ x
            dropped[i] = [(pairs[n][0], pairs[n][1], float(b[n]), float(fit[n]))
                          for n in np.nonzero(~keep)[0]]
        residuals.append(final)
        elements.append(np.tensordot(x, np.array(derivations), axes=(0, 0)))
    return F4Reconstruction(
        elements=tuple(elements),
        residuals=np.array(residuals),
        dropped=dropped,
    )


def tilde_coset(c53: np.ndarray, c70: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The commuting rotated pair spanning the coset torus directions."""
    t53 = 0.5 * c53 + (np.sqrt(3) / 2) * c70
    t70 = -(np.sqrt(3) / 2) * c53 + 0.5 * c70
    return t53, t70


def killing_form(basis: LieBasis) -> np.ndarray:
    """Trace form of the adjoint action, from brackets of the given basis.

    Works for either form: the adjoint coefficients are extracted with the
    (possibly indefinite) pairing of the basis itself.
    """
    stack = np.array(basis.elements)
    signs = np.array([1.0] * N_F4 + ([1.0] * N_COSET if basis.form == "compact"
                                     else [-1.0] * N_COSET))
    br = np.einsum("aij,bjk->abik", stack, stack)
    br = br - np.transpose(br, (1, 0, 2, 3))
    coeff = -np.einsum("abik,cki->abc", br, stack).real / 6 / signs[None, None, :]
    # ad_I[K, J] = coeff[I, J, K]
    ad = np.transpose(coeff, (0, 2, 1))
    return np.einsum("aij,bji->ab", ad, ad)


def signature(sym: np.ndarray, tol: float = 1e-8) -> tuple[int, int]:
    """(larger count, smaller count) of nonzero eigenvalue signs."""
    ev = np.linalg.eigvalsh(sym)
    scale = np.max(np.abs(ev))
    pos = int(np.sum(ev > tol * scale))
    neg = int(np.sum(ev < -tol * scale))
    return (max(pos, neg), min(pos, neg))


@dataclass(frozen=True)
class Mismatch:
    i: int
    j: int
    k: int
    oracle_value: float
    computed_value: float

    @property
    def residual(self) -> float:
        return abs(self.oracle_value - self.computed_value)


def compare_with_oracle(tensor: StructureTensor,
                        constants: oracle.OracleStructureConstants,
                        tol: float = 1e-9) -> tuple[int, list[Mismatch]]:
    """Match count and mismatch list of tabulated rows against the tensor."""
    mismatches = []
    matched = 0
    for row in constants.rows:
        got = tensor.value(row.i, row.j, row.k)
        if abs(got - row.value) <= tol:
            matched += 1
        else:
            mismatches.append(Mismatch(row.i, row.j, row.k, row.value, got))
    return matched, mismatches


@dataclass(frozen=True)
class Assembly:
    """Everything the verification and measure layers need, built once."""

    basis: LieBasis            # raw construction (anonymous derivation block)
    reconstruction: F4Reconstruction
    aligned: LieBasis          # tabulated numbering 1..78
    tensor: StructureTensor    # constants of the aligned basis
    constants_verbatim: oracle.OracleStructureConstants
    matrices: oracle.OracleMatrices  # curated, orthonormal chart

    def generator(self, index: int) -> np.ndarray:
        return self.aligned[index]


@lru_cache(maxsize=2)
def get_assembly(form: str = "compact") -> Assembly:
    if form != "compact":
        raise ValueError("the aligned assembly is built for the compact form")
    basis = build_e6("compact")
    verbatim = oracle.load_structure_constants(curated=False)
    recon = reconstruct_f4_basis(
        constants=verbatim,
        coset=list(basis.elements[N_F4:]),
        derivations=list(basis.elements[:N_F4]),
    )
    aligned = LieBasis(form="compact",
                       elements=tuple(list(recon.elements) + list(basis.elements[N_F4:])))
    tensor = structure_constants(aligned)
    return Assembly(
        basis=basis,
        reconstruction=recon,
        aligned=aligned,
        tensor=tensor,
        constants_verbatim=verbatim,
        matrices=oracle.load_coset_matrices(curated=True, frame="orthonormal"),
    )
