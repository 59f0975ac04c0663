"""Sparse complex matrices of power-of-two dimension.

Matrices live in coordinate form: a mapping from ``(row, col)`` to a nonzero
complex value, with the dimension fixed to ``2**n_qubits``.  Bit ``p`` of a
row or column index is the value of qubit ``p``, with ``p = 0`` the most
significant bit, i.e. ``r = sum_p 2**(n-1-p) * bit_p``.  This convention is
shared by every module in the package.

All values are immutable after construction; operations return new objects
and are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.io
import scipy.sparse

# Magnitudes at or below this are treated as zero when deduplicating or
# pruning entries.  All the matrices this package targets have O(1)
# integer-like entries, far above it.
ZERO_TOL = 1e-14

DENSE_QUBIT_LIMIT = 14


def _require_power_of_two(dim: int) -> int:
    """Return log2(dim), raising ValueError if dim is not a power of two."""
    n = dim.bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True)
class SparseMatrix:
    """Coordinate-form complex matrix of dimension ``2**n_qubits``.

    ``entries`` maps ``(row, col)`` to a nonzero complex value.  Use
    :meth:`from_entries` or :meth:`from_dense` to build one from raw data;
    they deduplicate coordinates and prune magnitudes at ``ZERO_TOL``.
    """

    n_qubits: int
    entries: dict[tuple[int, int], complex]

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        dim = self.dim
        for (r, c), v in self.entries.items():
            if not (0 <= r < dim and 0 <= c < dim):
                raise ValueError(f"entry ({r}, {c}) outside {dim}x{dim} matrix")
            if abs(v) <= ZERO_TOL:
                raise ValueError(f"entry ({r}, {c}) stores a zero value")

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @classmethod
    def from_entries(
        cls,
        n_qubits: int,
        items: Iterable[tuple[int, int, complex]],
        tol: float = ZERO_TOL,
    ) -> "SparseMatrix":
        """Accumulate (row, col, value) triples, summing duplicate coordinates
        and dropping magnitudes at or below ``tol``."""
        acc: dict[tuple[int, int], complex] = {}
        for r, c, v in items:
            key = (int(r), int(c))
            acc[key] = acc.get(key, 0j) + complex(v)
        pruned = {k: v for k, v in acc.items() if abs(v) > tol}
        return cls(n_qubits, pruned)

    @classmethod
    def from_dense(cls, array: np.ndarray, tol: float = ZERO_TOL) -> "SparseMatrix":
        arr = np.asarray(array)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square 2-d array, got shape {arr.shape}")
        n = _require_power_of_two(arr.shape[0])
        rows, cols = np.nonzero(np.abs(arr) > tol)
        items = [(int(r), int(c), complex(arr[r, c])) for r, c in zip(rows, cols)]
        return cls.from_entries(n, items, tol=tol)

    def to_dense(self) -> np.ndarray:
        """Dense complex array.  Guarded at n_qubits <= 14 to avoid memory
        blowup; round trip with :meth:`from_dense` is exact."""
        if self.n_qubits > DENSE_QUBIT_LIMIT:
            raise ValueError(
                f"to_dense limited to {DENSE_QUBIT_LIMIT} qubits, got {self.n_qubits}"
            )
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for (r, c), v in self.entries.items():
            out[r, c] = v
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.entries == other.entries


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """sqrt(sum |a_ij - b_ij|^2); shapes must match."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def _validate_header(path: str) -> None:
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        header = fh.readline().strip().split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket":
        raise ValueError(f"malformed Matrix Market header in {path}")
    obj, fmt, field, symmetry = (tok.lower() for tok in header[1:])
    if obj != "matrix" or fmt != "coordinate":
        raise ValueError(f"expected 'matrix coordinate' header, got {obj} {fmt}")
    if field not in ("real", "complex", "integer"):
        raise ValueError(f"unsupported Matrix Market field {field!r}")
    if symmetry != "general":
        raise ValueError(f"unsupported Matrix Market symmetry {symmetry!r}")


def load_matrix_market(path: str, tol: float = ZERO_TOL) -> SparseMatrix:
    """Read a Matrix Market coordinate file (real or complex, general).

    The declared dimensions must be equal and a power of two.  1-indexed
    file entries become 0-indexed; duplicate coordinates are summed and
    pruned at ``tol``.
    """
    _validate_header(path)
    try:
        coo = scipy.sparse.coo_matrix(scipy.io.mmread(path))
    except ValueError as exc:
        raise ValueError(f"malformed Matrix Market file {path}: {exc}") from exc
    rows, cols = coo.shape
    if rows != cols:
        raise ValueError(f"matrix is not square: {rows}x{cols}")
    n = _require_power_of_two(rows)
    items = zip(coo.row, coo.col, coo.data)
    return SparseMatrix.from_entries(
        n, ((int(r), int(c), complex(v)) for r, c, v in items), tol=tol
    )


def save_matrix_market(m: SparseMatrix, path: str) -> None:
    """Write coordinate Matrix Market; complex field iff any imaginary part."""
    if m.nnz:
        keys = sorted(m.entries)
        rows = np.array([k[0] for k in keys])
        cols = np.array([k[1] for k in keys])
        data = np.array([m.entries[k] for k in keys])
    else:
        rows = np.array([], dtype=int)
        cols = np.array([], dtype=int)
        data = np.array([], dtype=complex)
    if not np.any(np.abs(data.imag) > 0):
        data = data.real
    coo = scipy.sparse.coo_matrix((data, (rows, cols)), shape=(m.dim, m.dim))
    scipy.io.mmwrite(path, coo, symmetry="general")
