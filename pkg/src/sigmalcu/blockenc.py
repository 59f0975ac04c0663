"""PREP/SELECT block encoding of a full sigma decomposition.

The overall unitary W = PREP^dag . SELECT . PREP acts on a selector
register (ceil(log2) of the padded term count), one completion ancilla,
and the system register, in that order from the most significant qubit.
Its top-left 2^n block, reached with selector and ancilla in |0>, equals
A / lambda with lambda = sum |coeff_l|.

PREP is a single dense state-preparation gate loading sqrt(|coeff_l| /
lambda) onto selector value l; coefficient phases are folded into SELECT
as selector-controlled phase gates, so negative and complex weights are
supported.  SELECT applies each term's completion circuit under
multi-controlled selection on the binary selector value; padded selector
values act as the identity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .circuits import (
    CLOSED,
    OPEN,
    Circuit,
    DenseUnitary,
    Gate,
    build_ul_circuit,
    controlled,
    embedded,
    gate_count,
)
from .matrices import frobenius_distance
from .sigma import Decomposition, reconstruct
from .simulate import MATRIX_QUBIT_LIMIT, circuit_to_matrix

PHASE_TOL = 1e-14


@dataclass(frozen=True)
class BlockEncoding:
    """Assembled encoding; ``overall`` is the full circuit for W."""

    selector_qubits: int
    system_qubits: int
    lam: float
    overall: Circuit
    decomposition: Decomposition

    @property
    def ancilla_index(self) -> int:
        """Completion ancilla; sits between selector and system."""
        return self.selector_qubits

    @property
    def n_qubits(self) -> int:
        return self.selector_qubits + 1 + self.system_qubits


def _selector_width(n_terms: int) -> int:
    return max(0, (n_terms - 1).bit_length())


def _prep_matrix(amplitudes: np.ndarray) -> np.ndarray:
    """Real reflection sending |0> to the given unit vector."""
    dim = amplitudes.size
    target = np.zeros(dim)
    target[0] = 1.0
    v = target - amplitudes
    norm = np.linalg.norm(v)
    if norm < 1e-15:
        return np.eye(dim, dtype=complex)
    v = v / norm
    return (np.eye(dim) - 2.0 * np.outer(v, v)).astype(complex)


def prep_circuit(coeffs: list[complex]) -> Circuit:
    """State preparation loading sqrt(|c_l| / lambda) onto selector value l.

    Phases are excluded here; they belong to the SELECT branches.  The
    amplitude list is zero-padded to the next power of two and the gate is
    a dense reflection, so the selector width is at least one qubit.
    """
    mags = np.array([abs(complex(c)) for c in coeffs], dtype=float)
    lam = mags.sum()
    if len(coeffs) == 0 or lam <= 0:
        raise ValueError("need at least one nonzero coefficient")
    width = max(1, _selector_width(len(coeffs)))
    amplitudes = np.zeros(1 << width)
    amplitudes[: len(coeffs)] = np.sqrt(mags / lam)
    gate = DenseUnitary(tuple(range(width)), _prep_matrix(amplitudes), "prep")
    return Circuit(width, (gate,))


def _selector_controls(circuit: Circuit, value: int, width: int) -> Circuit:
    """Wrap every gate with one control per selector qubit matching the
    binary selector value (qubit 0 is the most significant)."""
    out = circuit
    for sq in range(width):
        bit = (value >> (width - 1 - sq)) & 1
        out = controlled(out, sq, CLOSED if bit else OPEN)
    return out


def _phase_gate(phase: complex, selector_value: int, width: int) -> Gate:
    """Diagonal gate applying the phase on one selector value; for a
    degenerate selector the phase is global and lands on the ancilla."""
    if width == 0:
        matrix = phase * np.eye(2, dtype=complex)
        return DenseUnitary((0,), matrix, "phase")
    diag = np.ones(1 << width, dtype=complex)
    diag[selector_value] = phase
    return DenseUnitary(tuple(range(width)), np.diag(diag), f"phase{selector_value}")


def select_circuit(d: Decomposition) -> Circuit:
    """Term selection on selector + ancilla + system qubits."""
    if not d.terms:
        raise ValueError("cannot select from an empty decomposition")
    width = _selector_width(len(d.terms))
    total = width + 1 + d.n_qubits
    gates: list[Gate] = []
    for value, term in enumerate(d.terms):
        block = embedded(build_ul_circuit(term), total, offset=width)
        block = _selector_controls(block, value, width)
        gates.extend(block.gates)
        phase = cmath.exp(1j * cmath.phase(term.coeff))
        if abs(phase - 1.0) > PHASE_TOL:
            gates.append(_phase_gate(phase, value, width))
    ancillas = frozenset(range(width + 1))
    return Circuit(total, tuple(gates), ancillas)


def assemble(d: Decomposition) -> BlockEncoding:
    """Full encoding W = PREP^dag . SELECT . PREP.

    Guarded to registers simulable by exact statevector extraction
    (selector + 1 + system <= 12 qubits).
    """
    if not d.terms:
        raise ValueError("cannot block-encode an empty decomposition")
    width = _selector_width(len(d.terms))
    total = width + 1 + d.n_qubits
    if total > MATRIX_QUBIT_LIMIT:
        raise ValueError(
            f"block encoding needs {total} qubits, above the {MATRIX_QUBIT_LIMIT}-qubit guard"
        )
    lam = float(sum(abs(t.coeff) for t in d.terms))
    select = select_circuit(d)
    gates: list[Gate] = []
    if width > 0:
        prep = embedded(prep_circuit([t.coeff for t in d.terms]), total, offset=0)
        prep_gate = prep.gates[0]
        gates.append(prep_gate)
        gates.extend(select.gates)
        gates.append(
            DenseUnitary(prep_gate.targets, prep_gate.matrix.conj().T, "prep_dag")
        )
    else:
        gates.extend(select.gates)
    overall = Circuit(total, tuple(gates), frozenset(range(width + 1)))
    return BlockEncoding(width, d.n_qubits, lam, overall, d)


def verify_block_encoding(be: BlockEncoding) -> dict:
    """Extract the zero-selector, zero-ancilla block of W and compare it to
    the reconstructed matrix over lambda."""
    dim = 1 << be.system_qubits
    w = circuit_to_matrix(be.overall)
    block = w[:dim, :dim]
    target = reconstruct(be.decomposition).to_dense() / be.lam
    return {
        "lambda": be.lam,
        "frobenius_error": frobenius_distance(block, target),
        "qubits": be.n_qubits,
    }


def resource_report(d: Decomposition, epsilon: float) -> dict:
    """Asymptotic gate-cost formulas with this decomposition's parameters
    substituted.

    The numbers restate published near-optimal PREP/SELECT complexities for
    an L-term combination on an N-dimensional system at state-preparation
    accuracy epsilon; they are reported, not measured.  Concrete per-term
    control arities come from the completion circuits.
    """
    if not (0 < epsilon < 1):
        raise ValueError("epsilon must be in (0, 1)")
    L = len(d.terms)
    n = d.n_qubits
    N = 1 << n
    lam = float(sum(abs(t.coeff) for t in d.terms))
    log_inv_eps = math.log2(1.0 / epsilon)
    arities = [gate_count(build_ul_circuit(t)).mcx for t in d.terms]
    return {
        "L": L,
        "n": n,
        "N": N,
        "lambda": lam,
        "epsilon": epsilon,
        "selector_qubits": _selector_width(L),
        "per_term_mcx_arities": [list(a) for a in arities],
        "prep": {
            "ancillas": f"Omega(log2 L) <= n_anc <= O(L), L = {L}",
            "count": f"O(L log2(1/eps)) = O({L * log_inv_eps:.1f})",
            "depth": f"O~(L log2(1/eps) log2(n_anc)/n_anc), L log2(1/eps) = {L * log_inv_eps:.1f}",
        },
        "select": {
            "ancillas": f"Omega(log2 L + log2 N) <= n_anc <= O(L log2 N), L log2 N = {L * n}",
            "count": f"O(L log2 N) = O({L * n})",
            "depth": f"O(L log2 N log2(n_anc)/n_anc), L log2 N = {L * n}",
        },
        "controlled_term": {
            "ancillas": n + 2,
            "count": f"O(log2 N) = O({n})",
            "depth": f"O(log2 log2 N) = O(log2 {n})",
        },
    }
