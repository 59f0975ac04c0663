"""Exact dense statevector simulation.

Amplitude index bit p corresponds to qubit p, with p = 0 the most
significant bit, so block structure of extracted matrices lines up
index-for-index with the sparse-matrix convention.  Gates act on a state
tensor of shape [2] * n (plus a trailing batch axis when extracting full
unitaries); applications are pure and return new arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import (
    CLOSED,
    Circuit,
    ControlledDense,
    DenseUnitary,
    Gate,
    MCX,
    SingleQubit,
    _fold_control_into_matrix,
    gate_qubits,
)

MATRIX_QUBIT_LIMIT = 12

NORM_TOL = 1e-10

_SINGLE_QUBIT_MATRICES = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
}


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"expected {1 << self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {norm})")
        object.__setattr__(self, "amplitudes", amps)


def zero_state(n_qubits: int) -> StateVector:
    return basis_state(n_qubits, 0)


def basis_state(n_qubits: int, index: int) -> StateVector:
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


def _apply_dense(tensor: np.ndarray, targets: tuple[int, ...], matrix: np.ndarray) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to the given axes of a [2]*n + [batch] tensor."""
    n_axes = tensor.ndim
    k = len(targets)
    rest = [ax for ax in range(n_axes) if ax not in targets]
    perm = list(targets) + rest
    moved = tensor.transpose(perm)
    shape = moved.shape
    out = (matrix @ moved.reshape(1 << k, -1)).reshape(shape)
    inverse = np.argsort(perm)
    return out.transpose(inverse)


def _apply_to_tensor(tensor: np.ndarray, g: Gate) -> np.ndarray:
    """Gate application on a state tensor of shape [2]*n + [batch]."""
    if isinstance(g, SingleQubit):
        return _apply_dense(tensor, (g.target,), _SINGLE_QUBIT_MATRICES[g.kind])
    if isinstance(g, MCX):
        n_axes = tensor.ndim
        idx0: list = [slice(None)] * n_axes
        idx1: list = [slice(None)] * n_axes
        for q, pol in g.controls:
            bit = 1 if pol == CLOSED else 0
            idx0[q] = bit
            idx1[q] = bit
        idx0[g.target] = 0
        idx1[g.target] = 1
        out = tensor.copy()
        out[tuple(idx0)] = tensor[tuple(idx1)]
        out[tuple(idx1)] = tensor[tuple(idx0)]
        return out
    if isinstance(g, DenseUnitary):
        return _apply_dense(tensor, g.targets, g.matrix)
    if isinstance(g, ControlledDense):
        folded = _fold_control_into_matrix(g)
        return _apply_dense(tensor, folded.targets, folded.matrix)
    raise TypeError(f"unknown gate {g!r}")


def apply_gate(s: StateVector, g: Gate) -> StateVector:
    for q in gate_qubits(g):
        if not (0 <= q < s.n_qubits):
            raise ValueError(f"gate qubit {q} outside {s.n_qubits}-qubit state")
    tensor = s.amplitudes.reshape([2] * s.n_qubits + [1])
    out = _apply_to_tensor(tensor, g).reshape(-1)
    return StateVector(s.n_qubits, out)


def run(c: Circuit, initial: StateVector) -> StateVector:
    """Apply the circuit's gates in order."""
    if c.n_qubits != initial.n_qubits:
        raise ValueError(
            f"circuit width {c.n_qubits} does not match state width {initial.n_qubits}"
        )
    state = initial
    for g in c.gates:
        state = apply_gate(state, g)
    return state


def circuit_to_matrix(c: Circuit) -> np.ndarray:
    """Full unitary of the circuit; column j is the image of basis state j."""
    n = c.n_qubits
    if n > MATRIX_QUBIT_LIMIT:
        raise ValueError(
            f"circuit_to_matrix limited to {MATRIX_QUBIT_LIMIT} qubits, got {n}"
        )
    dim = 1 << n
    tensor = np.eye(dim, dtype=complex).reshape([2] * n + [dim])
    for g in c.gates:
        tensor = _apply_to_tensor(tensor, g)
    return tensor.reshape(dim, dim)


def ancilla_probs(s: StateVector, ancillas: list[int]) -> dict[str, float]:
    """Marginal measurement distribution over the listed qubits.

    Keys are bitstrings in the order given; the values always sum to one.
    """
    if len(set(ancillas)) != len(ancillas):
        raise ValueError("ancilla list contains repeats")
    for q in ancillas:
        if not (0 <= q < s.n_qubits):
            raise ValueError(f"ancilla index {q} out of range")
    probs = np.abs(s.amplitudes.reshape([2] * s.n_qubits)) ** 2
    others = tuple(q for q in range(s.n_qubits) if q not in ancillas)
    marginal = probs.sum(axis=others) if others else probs
    # Summation leaves the kept axes in ascending qubit order; reorder to
    # the caller's listing.
    order = [sorted(ancillas).index(q) for q in ancillas]
    marginal = marginal.transpose(order).reshape(-1)
    k = len(ancillas)
    return {format(i, f"0{k}b"): float(marginal[i]) for i in range(1 << k)}
