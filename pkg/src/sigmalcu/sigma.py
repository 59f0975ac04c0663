"""Sigma-basis terms and decompositions.

The sigma basis is the five-operator set

    I,  s+ = |0><1|,  s- = |1><0|,  s+s- = |0><0|,  s-s+ = |1><1|,

whose n-fold tensor products are 0/1 matrices with at most one nonzero per
row and column.  A decomposition writes a matrix as ``sum_l coeff_l * T_l``
with each ``T_l`` such a tensor product.  Sparse structured matrices often
need exponentially fewer terms here than in the Pauli basis, at the price
of the factors being non-unitary; the ``circuits`` module restores
unitarity via completion.

Factor strings are encoded with one character per tensor position,
position 0 first (most significant qubit):

    I -> identity, P -> s+, M -> s-, A -> s+s-, B -> s-s+.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from .matrices import ZERO_TOL, SparseMatrix


class SigmaFactor(Enum):
    """Single-qubit factor; the value is its canonical text encoding."""

    IDENT = "I"
    SPLUS = "P"  # |0><1|
    SMINUS = "M"  # |1><0|
    SPSM = "A"  # |0><0|
    SMSP = "B"  # |1><1|

    @property
    def matrix(self) -> np.ndarray:
        return _FACTOR_MATRICES[self]

    @property
    def bit_pairs(self) -> tuple[tuple[int, int], ...]:
        """(row_bit, col_bit) positions holding a 1 in the 2x2 matrix."""
        return _FACTOR_BIT_PAIRS[self]

    @property
    def is_ladder(self) -> bool:
        """True for s+ and s-, the factors completed by X."""
        return self in (SigmaFactor.SPLUS, SigmaFactor.SMINUS)


_FACTOR_MATRICES = {
    SigmaFactor.IDENT: np.eye(2, dtype=complex),
    SigmaFactor.SPLUS: np.array([[0, 1], [0, 0]], dtype=complex),
    SigmaFactor.SMINUS: np.array([[0, 0], [1, 0]], dtype=complex),
    SigmaFactor.SPSM: np.array([[1, 0], [0, 0]], dtype=complex),
    SigmaFactor.SMSP: np.array([[0, 0], [0, 1]], dtype=complex),
}

_FACTOR_BIT_PAIRS = {
    SigmaFactor.IDENT: ((0, 0), (1, 1)),
    SigmaFactor.SPLUS: ((0, 1),),
    SigmaFactor.SMINUS: ((1, 0),),
    SigmaFactor.SPSM: ((0, 0),),
    SigmaFactor.SMSP: ((1, 1),),
}

# Factor carrying a 1 at (row_bit, col_bit); the single-entry decomposition
# of a matrix places one of these per qubit.
FACTOR_FROM_BITS = {
    (0, 0): SigmaFactor.SPSM,
    (0, 1): SigmaFactor.SPLUS,
    (1, 0): SigmaFactor.SMINUS,
    (1, 1): SigmaFactor.SMSP,
}


@dataclass(frozen=True)
class SigmaTerm:
    """Complex coefficient times an ordered string of sigma factors."""

    coeff: complex
    factors: tuple[SigmaFactor, ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError("a sigma term needs at least one factor")

    @property
    def n_qubits(self) -> int:
        return len(self.factors)

    @property
    def factor_string(self) -> str:
        return "".join(f.value for f in self.factors)

    @classmethod
    def from_string(cls, coeff: complex, factors: str) -> "SigmaTerm":
        cleaned = factors.replace(" ", "")
        try:
            parsed = tuple(SigmaFactor(ch) for ch in cleaned)
        except ValueError as exc:
            raise ValueError(f"invalid factor string {factors!r}") from exc
        return cls(complex(coeff), parsed)


@dataclass(frozen=True)
class Decomposition:
    """List of sigma terms over a shared register width.

    Factor strings are unique (equal strings have their coefficients
    summed) and sorted, so construction through :meth:`build` is
    deterministic.
    """

    n_qubits: int
    terms: tuple[SigmaTerm, ...]

    def __post_init__(self) -> None:
        seen = set()
        for t in self.terms:
            if t.n_qubits != self.n_qubits:
                raise ValueError(
                    f"term width {t.n_qubits} does not match register {self.n_qubits}"
                )
            if t.factor_string in seen:
                raise ValueError(f"duplicate factor string {t.factor_string}")
            seen.add(t.factor_string)

    @classmethod
    def build(
        cls,
        n_qubits: int,
        terms: Iterable[SigmaTerm],
        tol: float = ZERO_TOL,
    ) -> "Decomposition":
        """Sum coefficients of equal factor strings, prune, and sort."""
        acc: dict[tuple[SigmaFactor, ...], complex] = {}
        for t in terms:
            acc[t.factors] = acc.get(t.factors, 0j) + t.coeff
        kept = [
            SigmaTerm(coeff, factors)
            for factors, coeff in acc.items()
            if abs(coeff) > tol
        ]
        kept.sort(key=lambda t: t.factor_string)
        return cls(n_qubits, tuple(kept))

    def __len__(self) -> int:
        return len(self.terms)


def decompose_numerical(m: SparseMatrix) -> Decomposition:
    """One term per nonzero entry.

    Entry ``(r, c, v)`` becomes ``v`` times the factor string whose qubit-p
    factor has its single 1 at ``(bit_p(r), bit_p(c))``; the identity factor
    is never emitted on this path.  ``reconstruct`` inverts it exactly.
    """
    if not m.entries:
        raise ValueError("cannot decompose an empty matrix")
    n = m.n_qubits
    terms = []
    for (r, c), v in m.entries.items():
        factors = tuple(
            FACTOR_FROM_BITS[((r >> (n - 1 - p)) & 1, (c >> (n - 1 - p)) & 1)]
            for p in range(n)
        )
        terms.append(SigmaTerm(v, factors))
    return Decomposition.build(n, terms)


def term_matrix(t: SigmaTerm) -> SparseMatrix:
    """Kronecker product of the factors scaled by the coefficient.

    The nonzero positions are exactly the index pairs whose per-qubit bits
    pick a 1 in every factor, so a term with k identity factors has 2**k
    nonzeros.
    """
    entries = []
    for pairs in itertools.product(*(f.bit_pairs for f in t.factors)):
        r = 0
        c = 0
        for row_bit, col_bit in pairs:
            r = (r << 1) | row_bit
            c = (c << 1) | col_bit
        entries.append((r, c, t.coeff))
    return SparseMatrix.from_entries(t.n_qubits, entries)


def reconstruct(d: Decomposition) -> SparseMatrix:
    """Entrywise sum of all term matrices, pruned at ``ZERO_TOL``."""
    items: list[tuple[int, int, complex]] = []
    for t in d.terms:
        items.extend((r, c, v) for (r, c), v in term_matrix(t).entries.items())
    return SparseMatrix.from_entries(d.n_qubits, items)


def completion(t: SigmaTerm) -> list[str]:
    """Per-position completion factors, "X" or "I".

    Ladder factors (s+, s-) complete to X; identity and the projectors
    complete to I.  The Kronecker product of the result is the unitary
    completion of the term's 0/1 matrix: it agrees with the term on the
    term's column span and extends it to a permutation matrix.
    """
    return ["X" if f.is_ladder else "I" for f in t.factors]


def completion_matrix(t: SigmaTerm) -> np.ndarray:
    """Dense Kronecker product of :func:`completion` (a permutation matrix)."""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    out = np.array([[1]], dtype=complex)
    for tag in completion(t):
        out = np.kron(out, x if tag == "X" else eye)
    return out


def merge_terms(d: Decomposition) -> Decomposition:
    """Greedy projector merging: two terms with equal coefficients whose
    strings differ at exactly one position holding {s+s-, s-s+} collapse to
    one term with identity there (|0><0| + |1><1| = I).

    Scans positions left to right and candidate strings in lexicographic
    order until a fixpoint.  Reconstruction is preserved exactly and the
    term count never increases; minimality is not claimed.
    """
    coeffs: dict[tuple[SigmaFactor, ...], complex] = {
        t.factors: t.coeff for t in d.terms
    }
    changed = True
    while changed:
        changed = False
        for p in range(d.n_qubits):
            for factors in sorted(coeffs, key=lambda fs: "".join(f.value for f in fs)):
                if factors not in coeffs or factors[p] is not SigmaFactor.SPSM:
                    continue
                partner = factors[:p] + (SigmaFactor.SMSP,) + factors[p + 1 :]
                if partner not in coeffs or coeffs[partner] != coeffs[factors]:
                    continue
                coeff = coeffs.pop(factors)
                coeffs.pop(partner)
                merged = factors[:p] + (SigmaFactor.IDENT,) + factors[p + 1 :]
                total = coeffs.get(merged, 0j) + coeff
                if abs(total) > ZERO_TOL:
                    coeffs[merged] = total
                elif merged in coeffs:
                    coeffs.pop(merged)
                changed = True
    return Decomposition.build(
        d.n_qubits, (SigmaTerm(c, fs) for fs, c in coeffs.items())
    )


def to_json_dict(d: Decomposition) -> dict:
    return {
        "n_qubits": d.n_qubits,
        "terms": [
            {"re": t.coeff.real, "im": t.coeff.imag, "factors": t.factor_string}
            for t in d.terms
        ],
    }


def from_json_dict(data: dict) -> Decomposition:
    n = int(data["n_qubits"])
    terms = [
        SigmaTerm.from_string(complex(item["re"], item["im"]), item["factors"])
        for item in data["terms"]
    ]
    return Decomposition.build(n, terms)


def save_decomposition(d: Decomposition, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(to_json_dict(d), fh, indent=1)
        fh.write("\n")


def load_decomposition(path: str) -> Decomposition:
    with open(path, "r", encoding="ascii") as fh:
        return from_json_dict(json.load(fh))
