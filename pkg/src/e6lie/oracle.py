"""Embedded reference datasets: structure constants and coset generators.

The two primary files are verbatim transcriptions of the published
tabulation, preserved defects included.  Separate overlay files carry the
curated corrections, each with a note recording how the correction is
forced by the table's own redundancy.  Loaders expose both views; nothing
ever rewrites the verbatim data.

Matrix entries and constants are stored as exact surd expressions from a
small closed grammar and evaluated on load, so transcription stays diffable
and no precision is lost at rest.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import CorruptDataset
from .jordan import TRACE_WEIGHTS

N_GENERATORS = 78
COSET_RANGE = range(53, 79)
KAPPA = 1j / math.sqrt(3)

# closed surd grammar; every token the data files may contain
SURD_VALUES: dict[str, complex] = {
    "0": 0j,
    "1": 1 + 0j,
    "1/2": 0.5 + 0j,
    "sqrt(3)/2": complex(math.sqrt(3) / 2),
    "i/2": 0.5j,
    "i/sqrt(2)": 1j / math.sqrt(2),
    "i/sqrt(3)": 1j / math.sqrt(3),
    "i/sqrt(6)": 1j / math.sqrt(6),
    "i/(2*sqrt(2))": 1j / (2 * math.sqrt(2)),
    "i/(2*sqrt(3))": 1j / (2 * math.sqrt(3)),
    "i/(2*sqrt(6))": 1j / (2 * math.sqrt(6)),
    "2*i/sqrt(3)": 2j / math.sqrt(3),
    "i*sqrt(2/3)": 1j * math.sqrt(2 / 3),
}

_CHECKSUMS = {
    "structure_constants.txt":
        "1856c8e0e41c04231359b8c7fb8f21ed5626ae5f8f475880fbd2be7caf061b5b",
    "coset_generators.txt":
        "ec62ddb1de8bb22365a6ebb8c6cf1560e216c0b49dfc856dbe789b32c0e0e839",
    "coset_generator_corrections.txt":
        "1eaaffcc76b8581e997b035c8e9c111218d820efd83879053e75674acd11569a",
    "structure_constant_corrections.txt":
        "9100671ebe8cce42fbd9d7c965ee53936fc4a60d90205b240d2cd05426e6815d",
}


def evaluate_surd(token: str) -> complex:
    """Evaluate a token of the closed grammar (optional leading minus)."""
    neg = token.startswith("-")
    body = token[1:] if neg else token
    try:
        val = SURD_VALUES[body]
    except KeyError:
        raise CorruptDataset(f"token outside the surd grammar: {token!r}") from None
    return -val if neg else val


def _read_data(name: str) -> str:
    raw = resources.files("e6lie.data").joinpath(name).read_bytes()
    expected = _CHECKSUMS.get(name)
    if expected is not None:
        got = hashlib.sha256(raw).hexdigest()
        if got != expected:
            raise CorruptDataset(f"{name}: checksum mismatch ({got})")
    return raw.decode("utf-8")


def _data_lines(name: str):
    for lineno, line in enumerate(_read_data(name).splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if body:
            yield lineno, body


@dataclass(frozen=True)
class ConstantRow:
    i: int
    j: int
    k: int
    token: str
    value: float


@dataclass(frozen=True)
class OracleStructureConstants:
    """Structure-constant rows exactly as tabulated (no canonicalization)."""

    rows: tuple[ConstantRow, ...]
    curated: bool

    def as_dict(self) -> dict[tuple[int, int, int], float]:
        """Canonical (I<J<K) -> value map of the nonzero entries."""
        out: dict[tuple[int, int, int], float] = {}
        for r in self.rows:
            if r.value != 0.0:
                out[(r.i, r.j, r.k)] = r.value
        return out

    def dense(self) -> np.ndarray:
        """Fully antisymmetrized dense tensor view (derived, not at rest)."""
        s = np.zeros((N_GENERATORS, N_GENERATORS, N_GENERATORS))
        for (i, j, k), v in self.as_dict().items():
            a, b, c = i - 1, j - 1, k - 1
            for (p, q, r), sign in (
                ((a, b, c), 1), ((b, c, a), 1), ((c, a, b), 1),
                ((b, a, c), -1), ((a, c, b), -1), ((c, b, a), -1),
            ):
                s[p, q, r] = sign * v
        return s

    def consistency_scan(self) -> dict[str, list]:
        """Internal-consistency report of the raw rows.

        Flags index triples tabulated more than once (with or without
        conflicting values), rows out of canonical I<J<K order, and
        first-pair collisions (two rows of one block sharing (I, J), a
        pattern the tabulation otherwise never produces).
        """
        seen: dict[tuple[int, int, int], float] = {}
        duplicate, misordered = [], []
        first_pairs: dict[tuple[int, int], list[ConstantRow]] = {}
        for r in self.rows:
            key = (r.i, r.j, r.k)
            if not (r.i < r.j < r.k):
                misordered.append(key)
            if key in seen:
                duplicate.append((key, seen[key], r.value))
            seen[key] = r.value
            first_pairs.setdefault((r.i, r.j), []).append(r)
        pair_collisions = [
            [(r.i, r.j, r.k, r.token) for r in rows]
            for rows in first_pairs.values() if len(rows) > 1
        ]
        return {
            "duplicate_triples": duplicate,
            "misordered_triples": misordered,
            "first_pair_collisions": pair_collisions,
        }


@dataclass(frozen=True)
class OracleMatrices:
    """The 26 coset generator matrices c53..c78 (27x27 complex)."""

    matrices: dict[int, np.ndarray]
    kappa: complex
    curated: bool
    frame: str  # "table" or "orthonormal"
    anomalies: tuple[tuple[int, int, int], ...]  # weighted-transpose violations

    def __getitem__(self, index: int) -> np.ndarray:
        return self.matrices[index]

    def gram_matrix(self) -> np.ndarray:
        ids = sorted(self.matrices)
        stack = np.array([self.matrices[i] for i in ids])
        return -np.einsum("aij,bji->ab", stack, stack).real / 6


_W = np.sqrt(TRACE_WEIGHTS)


def to_orthonormal_frame(m: np.ndarray) -> np.ndarray:
    """Conjugate a table-frame matrix into the orthonormal chart.

    In the table chart the trace form has the diagonal TRACE_WEIGHTS, so
    compact generators are anti-Hermitian only in the weighted sense; the
    rescaled chart makes them anti-Hermitian matrices proper.  Traces,
    brackets and the invariant pairing are unchanged.
    """
    return (m * _W[:, None]) / _W[None, :]


def to_table_frame(m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_orthonormal_frame`."""
    return (m / _W[:, None]) * _W[None, :]


def load_structure_constants(curated: bool = False) -> OracleStructureConstants:
    rows = []
    for lineno, body in _data_lines("structure_constants.txt"):
        parts = body.split()
        if len(parts) != 4:
            raise CorruptDataset(f"structure_constants.txt:{lineno}: bad row {body!r}")
        i, j, k = (int(p) for p in parts[:3])
        rows.append(ConstantRow(i, j, k, parts[3], evaluate_surd(parts[3]).real))
    if len(rows) != 484:
        raise CorruptDataset(f"expected 484 structure-constant rows, got {len(rows)}")
    if curated:
        fixes = {}
        for lineno, body in _data_lines("structure_constant_corrections.txt"):
            parts = body.split()
            i, j, k = (int(p) for p in parts[:3])
            fixes[(i, j, k)] = parts[3]
        out = []
        for r in rows:
            tok = fixes.pop((r.i, r.j, r.k), None)
            if tok is None:
                out.append(r)
            elif tok != "0":
                out.append(ConstantRow(r.i, r.j, r.k, tok, evaluate_surd(tok).real))
        for (i, j, k), tok in sorted(fixes.items()):
            if tok != "0":
                out.append(ConstantRow(i, j, k, tok, evaluate_surd(tok).real))
        rows = out
    return OracleStructureConstants(rows=tuple(rows), curated=curated)


def load_coset_matrices(curated: bool = True, frame: str = "table") -> OracleMatrices:
    if frame not in ("table", "orthonormal"):
        raise ValueError(f"unknown frame {frame!r}")
    mats = {i: np.zeros((27, 27), dtype=complex) for i in COSET_RANGE}
    filled = {i: set() for i in COSET_RANGE}
    for lineno, body in _data_lines("coset_generators.txt"):
        parts = body.split()
        if len(parts) != 4:
            raise CorruptDataset(f"coset_generators.txt:{lineno}: bad row {body!r}")
        a, r, c = (int(p) for p in parts[:3])
        if a not in mats or not (1 <= r <= 27 and 1 <= c <= 27):
            raise CorruptDataset(f"coset_generators.txt:{lineno}: bad indices {body!r}")
        if (r, c) in filled[a]:
            raise CorruptDataset(f"coset_generators.txt:{lineno}: duplicate entry")
        filled[a].add((r, c))
        mats[a][r - 1, c - 1] = evaluate_surd(parts[3])

    if curated:
        for lineno, body in _data_lines("coset_generator_corrections.txt"):
            parts = body.split()
            a, r, c = (int(p) for p in parts[:3])
            mats[a][r - 1, c - 1] = evaluate_surd(parts[3])

    # structural checks: tracelessness always; weighted anti-self-adjointness
    # holds for the curated view and is scanned (not enforced) verbatim
    anomalies = []
    for a in COSET_RANGE:
        if abs(np.trace(mats[a])) > 1e-12:
            raise CorruptDataset(f"c{a} is not traceless")
        s = TRACE_WEIGHTS[:, None] * mats[a]
        bad = np.argwhere(np.abs(s - s.T) > 1e-12)
        for r, c in bad:
            if r < c:
                anomalies.append((a, int(r) + 1, int(c) + 1))
    if curated and anomalies:
        raise CorruptDataset(f"curated matrices fail symmetry at {anomalies[:3]}...")

    if frame == "orthonormal":
        mats = {a: to_orthonormal_frame(m) for a, m in mats.items()}
    return OracleMatrices(
        matrices=mats, kappa=KAPPA, curated=curated, frame=frame,
        anomalies=tuple(anomalies),
    )


def load_oracle(curated: bool = True):
    """Both datasets with integrity checks; immutable views."""
    return load_structure_constants(curated), load_coset_matrices(curated)
