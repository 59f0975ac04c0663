"""Hadamard-test evaluation of sigma-term matrix elements.

Two interference circuits on n + 2 qubits (ancillas a0, a1 ahead of the
system register) compute

    <0| U^dag T V |0>            for a single term T, and
    <0| U^dag Ti^t M Tj V |0>    for a sandwiched pair of terms,

where U and V are opaque state-preparation unitaries and M an opaque
observable unitary.  The a0 measurement statistics give the real part as
P00 - P10; inserting an S^dag on a0 after the first Hadamard turns the
same statistic into the imaginary part.  Coefficients are excluded: every
routine returns the bare matrix element of the unit-coefficient term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import (
    CLOSED,
    OPEN,
    Circuit,
    ControlledDense,
    Gate,
    SingleQubit,
    build_ul_circuit,
    controlled,
    embedded,
    _check_unitary,
)
from .sigma import Decomposition, SigmaTerm
from .simulate import ancilla_probs, run, zero_state


@dataclass(frozen=True, eq=False)
class StateOracle:
    """Opaque unitary used as a black-box state-preparation or observable."""

    matrix: np.ndarray
    label: str = "U"

    def __post_init__(self) -> None:
        matrix = np.asarray(self.matrix, dtype=complex)
        dim = matrix.shape[0] if matrix.ndim == 2 else 0
        n = max(dim, 1).bit_length() - 1
        if dim == 0 or (1 << n) != dim:
            raise ValueError("oracle matrix dimension must be a power of two")
        _check_unitary(matrix, dim, self.label)
        object.__setattr__(self, "matrix", matrix)

    @property
    def n_qubits(self) -> int:
        return self.matrix.shape[0].bit_length() - 1


def _check_width(n: int, *oracles: StateOracle) -> None:
    for o in oracles:
        if o.n_qubits != n:
            raise ValueError(
                f"oracle {o.label!r} acts on {o.n_qubits} qubits, expected {n}"
            )


def _controlled_term_gates(term: SigmaTerm, width: int, polarity: str) -> tuple[Gate, ...]:
    """Gates of the term's completion circuit on (a1, system), every gate
    picking up a control of the given polarity on a0."""
    block = embedded(build_ul_circuit(term), width, offset=1)
    return controlled(block, 0, polarity).gates


def _hadamard_test_circuit(
    u: StateOracle, v: StateOracle, term: SigmaTerm, imaginary: bool
) -> Circuit:
    n = term.n_qubits
    width = n + 2
    system = tuple(range(2, width))
    gates: list[Gate] = [SingleQubit("h", 0)]
    if imaginary:
        gates.append(SingleQubit("sdg", 0))
    gates.append(ControlledDense((0, CLOSED), system, v.matrix, v.label))
    gates.append(ControlledDense((0, OPEN), system, u.matrix, u.label))
    gates.extend(_controlled_term_gates(term, width, CLOSED))
    gates.append(SingleQubit("h", 0))
    return Circuit(width, tuple(gates), frozenset({0, 1}))


def _ancilla_distribution(circuit: Circuit) -> dict[str, float]:
    state = run(circuit, zero_state(circuit.n_qubits))
    return ancilla_probs(state, [0, 1])


def _interference_value(probs: dict[str, float]) -> float:
    return probs["00"] - probs["10"]


def expval_term(u: StateOracle, v: StateOracle, term: SigmaTerm) -> complex:
    """Exact <0| U^dag T V |0> for the unit-coefficient term T."""
    _check_width(term.n_qubits, u, v)
    re = _interference_value(_ancilla_distribution(_hadamard_test_circuit(u, v, term, False)))
    im = _interference_value(_ancilla_distribution(_hadamard_test_circuit(u, v, term, True)))
    return complex(re, im)


def _sandwich_circuit(
    u: StateOracle,
    v: StateOracle,
    m: StateOracle,
    ti: SigmaTerm,
    tj: SigmaTerm,
    imaginary: bool,
) -> Circuit:
    n = ti.n_qubits
    width = n + 2
    system = tuple(range(2, width))
    gates: list[Gate] = [SingleQubit("h", 0)]
    if imaginary:
        gates.append(SingleQubit("sdg", 0))
    gates.append(ControlledDense((0, CLOSED), system, v.matrix, v.label))
    gates.append(ControlledDense((0, OPEN), system, u.matrix, u.label))
    gates.extend(_controlled_term_gates(tj, width, CLOSED))
    # Observable fires on a0 = 1 and a1 = 0, i.e. on the branch holding
    # Tj |psi2> rather than its completion remainder.
    inner = ControlledDense((1, OPEN), system, m.matrix, m.label)
    gates.append(controlled(Circuit(width, (inner,)), 0, CLOSED).gates[0])
    gates.extend(_controlled_term_gates(ti, width, OPEN))
    gates.append(SingleQubit("h", 0))
    return Circuit(width, tuple(gates), frozenset({0, 1}))


def expval_sandwich(
    u: StateOracle,
    v: StateOracle,
    m: StateOracle,
    ti: SigmaTerm,
    tj: SigmaTerm,
) -> complex:
    """Exact <0| U^dag Ti^t M Tj V |0> for unit-coefficient terms."""
    if ti.n_qubits != tj.n_qubits:
        raise ValueError("terms act on different register widths")
    _check_width(ti.n_qubits, u, v, m)
    re = _interference_value(
        _ancilla_distribution(_sandwich_circuit(u, v, m, ti, tj, False))
    )
    im = _interference_value(
        _ancilla_distribution(_sandwich_circuit(u, v, m, ti, tj, True))
    )
    return complex(re, im)


def expval_full(u: StateOracle, v: StateOracle, d: Decomposition) -> complex:
    """<0| U^dag A V |0> by linearity over the decomposition of A."""
    _check_width(d.n_qubits, u, v)
    return sum(
        (t.coeff * expval_term(u, v, t) for t in d.terms),
        start=0j,
    )


def sample_expval(
    u: StateOracle,
    v: StateOracle,
    term: SigmaTerm,
    shots: int,
    seed: int,
) -> complex:
    """Finite-shot estimate of :func:`expval_term`.

    Draws ancilla outcomes from the exact distribution of each circuit
    with a seeded generator; the estimate is (count00 - count10) / shots
    per part and is reproducible for a fixed seed.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    _check_width(term.n_qubits, u, v)
    rng = np.random.default_rng(seed)
    parts = []
    for imaginary in (False, True):
        probs = _ancilla_distribution(_hadamard_test_circuit(u, v, term, imaginary))
        keys = sorted(probs)
        weights = np.clip([probs[k] for k in keys], 0.0, None)
        weights = weights / weights.sum()
        outcomes = rng.choice(len(keys), size=shots, p=weights)
        counts = np.bincount(outcomes, minlength=len(keys))
        count = dict(zip(keys, counts))
        parts.append((count["00"] - count["10"]) / shots)
    return complex(parts[0], parts[1])
