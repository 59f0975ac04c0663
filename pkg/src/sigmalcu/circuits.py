"""Gate-list circuit representation and synthesis of term circuits.

Two builders turn a sigma term into a block encoding of its 0/1 matrix T
on one extra ancilla qubit (the most significant wire):

* :func:`build_ul_circuit` uses unitary completion and always needs at most
  n + 1 single-qubit gates plus a single multi-controlled X, producing

      [[T, C], [C, T]]   with  C = completion(T) - T.

* :func:`build_dilation_circuit` realizes the (sign-free) unitary dilation

      [[T, I - T T^t], [I - T^t T, T^t]]

  with one X gate and 2s + 1 multi-controlled X gates, where s counts the
  ladder factors.  Both circuits agree when s = 0.

Multi-controlled X gates carry a polarity per control: a closed control
fires on |1>, an open control on |0>.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .sigma import SigmaFactor, SigmaTerm, completion

OPEN = "open"
CLOSED = "closed"

_SINGLE_QUBIT_KINDS = ("x", "h", "s", "sdg")

UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class SingleQubit:
    kind: str  # "x" | "h" | "s" | "sdg"
    target: int

    def __post_init__(self) -> None:
        if self.kind not in _SINGLE_QUBIT_KINDS:
            raise ValueError(f"unknown single-qubit gate {self.kind!r}")


@dataclass(frozen=True)
class MCX:
    """X on ``target`` conditioned on every control matching its polarity.

    An empty control list is a plain X; builders normalize that case to
    :class:`SingleQubit` at construction.
    """

    controls: tuple[tuple[int, str], ...]
    target: int

    def __post_init__(self) -> None:
        qubits = [q for q, _ in self.controls] + [self.target]
        if len(set(qubits)) != len(qubits):
            raise ValueError("repeated qubit in MCX gate")
        for _, pol in self.controls:
            if pol not in (OPEN, CLOSED):
                raise ValueError(f"unknown polarity {pol!r}")

    @property
    def arity(self) -> int:
        return len(self.controls)


def _check_unitary(matrix: np.ndarray, dim: int, label: str) -> None:
    if matrix.shape != (dim, dim):
        raise ValueError(f"gate {label!r}: expected {dim}x{dim} matrix")
    defect = np.abs(matrix @ matrix.conj().T - np.eye(dim)).max()
    if defect > UNITARY_TOL:
        raise ValueError(f"gate {label!r} is not unitary (defect {defect:.2e})")


@dataclass(frozen=True, eq=False)
class DenseUnitary:
    """Opaque unitary on an ordered qubit list; targets[0] is the most
    significant bit of the gate's local index."""

    targets: tuple[int, ...]
    matrix: np.ndarray
    label: str = "U"

    def __post_init__(self) -> None:
        if len(set(self.targets)) != len(self.targets) or not self.targets:
            raise ValueError("dense gate needs a nonempty list of distinct targets")
        _check_unitary(self.matrix, 1 << len(self.targets), self.label)


@dataclass(frozen=True, eq=False)
class ControlledDense:
    control: tuple[int, str]
    targets: tuple[int, ...]
    matrix: np.ndarray
    label: str = "U"

    def __post_init__(self) -> None:
        qubits = [self.control[0], *self.targets]
        if len(set(qubits)) != len(qubits) or not self.targets:
            raise ValueError("controlled dense gate has repeated or missing qubits")
        if self.control[1] not in (OPEN, CLOSED):
            raise ValueError(f"unknown polarity {self.control[1]!r}")
        _check_unitary(self.matrix, 1 << len(self.targets), self.label)


Gate = Union[SingleQubit, MCX, DenseUnitary, ControlledDense]


def gate_qubits(g: Gate) -> tuple[int, ...]:
    if isinstance(g, SingleQubit):
        return (g.target,)
    if isinstance(g, MCX):
        return tuple(q for q, _ in g.controls) + (g.target,)
    if isinstance(g, DenseUnitary):
        return g.targets
    if isinstance(g, ControlledDense):
        return (g.control[0], *g.targets)
    raise TypeError(f"unknown gate {g!r}")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()
    ancillas: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n_qubits < 0:
            raise ValueError("n_qubits must be >= 0")
        for g in self.gates:
            for q in gate_qubits(g):
                if not (0 <= q < self.n_qubits):
                    raise ValueError(
                        f"gate qubit {q} outside register of width {self.n_qubits}"
                    )
        for q in self.ancillas:
            if not (0 <= q < self.n_qubits):
                raise ValueError(f"ancilla index {q} out of range")


@dataclass(frozen=True)
class GateCount:
    single_qubit: int
    mcx: tuple[int, ...]  # control arities in gate order
    dense: int


def gate_count(c: Circuit) -> GateCount:
    single = 0
    arities = []
    dense = 0
    for g in c.gates:
        if isinstance(g, SingleQubit):
            single += 1
        elif isinstance(g, MCX):
            arities.append(g.arity)
        else:
            dense += 1
    return GateCount(single, tuple(arities), dense)


def _mcx_or_x(controls: tuple[tuple[int, str], ...], target: int) -> Gate:
    """MCX with zero controls collapses to a plain X."""
    if not controls:
        return SingleQubit("x", target)
    return MCX(controls, target)


def _term_controls(term: SigmaTerm, offset: int) -> tuple[tuple[int, str], ...]:
    """Control pattern selecting the nonzero rows of the term's matrix.

    Factors whose nonzero row bit is 1 (s-, s-s+) give closed controls,
    those with row bit 0 (s+, s+s-) open controls; identity factors need
    no control.
    """
    controls = []
    for p, f in enumerate(term.factors):
        if f in (SigmaFactor.SMINUS, SigmaFactor.SMSP):
            controls.append((offset + p, CLOSED))
        elif f in (SigmaFactor.SPLUS, SigmaFactor.SPSM):
            controls.append((offset + p, OPEN))
    return tuple(controls)


def build_ul_circuit(term: SigmaTerm) -> Circuit:
    """Completion circuit on n + 1 qubits; ancilla is qubit 0.

    X gates on the system qubits where the completion says X, an X on the
    ancilla, then one multi-controlled X onto the ancilla whose controls
    select the nonzero rows of the term.  The coefficient is ignored: the
    circuit encodes the unit-coefficient operator.
    """
    n = term.n_qubits
    gates: list[Gate] = []
    for p, tag in enumerate(completion(term)):
        if tag == "X":
            gates.append(SingleQubit("x", p + 1))
    gates.append(SingleQubit("x", 0))
    gates.append(_mcx_or_x(_term_controls(term, offset=1), 0))
    return Circuit(n + 1, tuple(gates), frozenset({0}))


def _pattern_swap_gates(
    active: tuple[int, ...],
    bits_a: dict[int, int],
    bits_b: dict[int, int],
) -> list[Gate]:
    """MCX sequence exchanging the two basis patterns given on ``active``.

    Qubits outside ``active`` are untouched, so the exchange applies
    simultaneously to every assignment of the inactive qubits.  Patterns
    differing in m bits take 2m - 1 gates: flip the first differing bit,
    recurse on the rest, and flip back.
    """
    diff = [q for q in active if bits_a[q] != bits_b[q]]
    if not diff:
        raise ValueError("patterns are identical")

    def controls_for(bits: dict[int, int], target: int) -> tuple[tuple[int, str], ...]:
        return tuple(
            (q, CLOSED if bits[q] else OPEN) for q in active if q != target
        )

    if len(diff) == 1:
        return [_mcx_or_x(controls_for(bits_a, diff[0]), diff[0])]
    pivot = diff[0]
    outer = _mcx_or_x(controls_for(bits_a, pivot), pivot)
    flipped = dict(bits_a)
    flipped[pivot] = 1 - flipped[pivot]
    inner = _pattern_swap_gates(active, flipped, bits_b)
    return [outer, *inner, outer]


def row_swap_circuit(n_qubits: int, row_a: int, row_b: int) -> Circuit:
    """Permutation circuit exchanging two basis rows of the full register.

    Rows differing in k + 1 bits take exactly 2k + 1 multi-controlled X
    gates; all other rows are fixed.
    """
    dim = 1 << n_qubits
    if not (0 <= row_a < dim and 0 <= row_b < dim):
        raise ValueError("row index out of range")
    if row_a == row_b:
        raise ValueError("rows must differ")
    active = tuple(range(n_qubits))
    bits_a = {q: (row_a >> (n_qubits - 1 - q)) & 1 for q in active}
    bits_b = {q: (row_b >> (n_qubits - 1 - q)) & 1 for q in active}
    return Circuit(n_qubits, tuple(_pattern_swap_gates(active, bits_a, bits_b)))


def build_dilation_circuit(term: SigmaTerm) -> Circuit:
    """Dilation circuit on n + 1 qubits; ancilla is qubit 0.

    An X on the ancilla followed by the row permutation exchanging the
    term's nonzero-row pattern (ancilla 0) with its nonzero-column pattern
    (ancilla 1).  Identity factors drop out of the controls, so every
    multi-controlled X has arity n - k.  With s ladder factors the
    permutation costs 2s + 1 gates; for s = 0 it degenerates to the single
    gate of the completion circuit.
    """
    n = term.n_qubits
    active = [0]
    bits_row = {0: 0}
    bits_col = {0: 1}
    for p, f in enumerate(term.factors):
        if f is SigmaFactor.IDENT:
            continue
        (row_bit, col_bit), = f.bit_pairs
        active.append(p + 1)
        bits_row[p + 1] = row_bit
        bits_col[p + 1] = col_bit
    gates: list[Gate] = [SingleQubit("x", 0)]
    gates.extend(_pattern_swap_gates(tuple(active), bits_row, bits_col))
    return Circuit(n + 1, tuple(gates), frozenset({0}))


def _fold_control_into_matrix(g: ControlledDense) -> DenseUnitary:
    """Equivalent dense gate on [control] + targets with a block-diagonal
    matrix; the control becomes the most significant local bit."""
    dim = g.matrix.shape[0]
    eye = np.eye(dim, dtype=complex)
    if g.control[1] == CLOSED:
        blocks = (eye, g.matrix)
    else:
        blocks = (g.matrix, eye)
    big = np.zeros((2 * dim, 2 * dim), dtype=complex)
    big[:dim, :dim] = blocks[0]
    big[dim:, dim:] = blocks[1]
    return DenseUnitary((g.control[0], *g.targets), big, g.label)


def _controlled_gate(g: Gate, control: int, polarity: str) -> Gate:
    if isinstance(g, SingleQubit):
        if g.kind == "x":
            return MCX(((control, polarity),), g.target)
        matrix = {
            "h": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
            "s": np.diag([1, 1j]).astype(complex),
            "sdg": np.diag([1, -1j]).astype(complex),
        }[g.kind]
        return ControlledDense((control, polarity), (g.target,), matrix, g.kind)
    if isinstance(g, MCX):
        return MCX(((control, polarity), *g.controls), g.target)
    if isinstance(g, DenseUnitary):
        return ControlledDense((control, polarity), g.targets, g.matrix, g.label)
    if isinstance(g, ControlledDense):
        folded = _fold_control_into_matrix(g)
        return ControlledDense((control, polarity), folded.targets, folded.matrix, folded.label)
    raise TypeError(f"unknown gate {g!r}")


def controlled(c: Circuit, control: int, polarity: str) -> Circuit:
    """Add ``control`` (with the given polarity) to every gate.

    The control qubit must already be a free wire of the circuit's
    register; the result implements the controlled version of the
    circuit's unitary.
    """
    if not (0 <= control < c.n_qubits):
        raise ValueError(f"control qubit {control} outside register")
    if polarity not in (OPEN, CLOSED):
        raise ValueError(f"unknown polarity {polarity!r}")
    for g in c.gates:
        if control in gate_qubits(g):
            raise ValueError(f"control qubit {control} already used by {g!r}")
    gates = tuple(_controlled_gate(g, control, polarity) for g in c.gates)
    return Circuit(c.n_qubits, gates, c.ancillas)


def embedded(c: Circuit, n_qubits: int, offset: int) -> Circuit:
    """Same circuit on a wider register with every qubit shifted by
    ``offset``."""
    if offset < 0 or c.n_qubits + offset > n_qubits:
        raise ValueError("embedded circuit does not fit the target register")

    def shift(g: Gate) -> Gate:
        if isinstance(g, SingleQubit):
            return SingleQubit(g.kind, g.target + offset)
        if isinstance(g, MCX):
            return MCX(tuple((q + offset, pol) for q, pol in g.controls), g.target + offset)
        if isinstance(g, DenseUnitary):
            return DenseUnitary(tuple(q + offset for q in g.targets), g.matrix, g.label)
        if isinstance(g, ControlledDense):
            return ControlledDense(
                (g.control[0] + offset, g.control[1]),
                tuple(q + offset for q in g.targets),
                g.matrix,
                g.label,
            )
        raise TypeError(f"unknown gate {g!r}")

    return Circuit(
        n_qubits,
        tuple(shift(g) for g in c.gates),
        frozenset(q + offset for q in c.ancillas),
    )


def _matrix_to_json(matrix: np.ndarray) -> list[list[float]]:
    flat = matrix.reshape(-1)
    return [[float(v.real), float(v.imag)] for v in flat]


def _matrix_from_json(pairs: list[list[float]], dim: int) -> np.ndarray:
    flat = np.array([complex(re, im) for re, im in pairs])
    if flat.size != dim * dim:
        raise ValueError(f"matrix payload has {flat.size} entries, expected {dim * dim}")
    return flat.reshape(dim, dim)


def circuit_to_json_dict(c: Circuit) -> dict:
    """JSON form of the gate list.

    Dense matrices are row-major lists of [re, im] pairs.  A controlled
    dense gate is exported as the equivalent dense gate on
    [control] + targets, so every file uses only the x/h/s/sdg, mcx, and
    dense kinds.
    """
    gates = []
    for g in c.gates:
        if isinstance(g, SingleQubit):
            gates.append({"kind": g.kind, "target": g.target})
        elif isinstance(g, MCX):
            gates.append(
                {
                    "kind": "mcx",
                    "controls": [{"q": q, "pol": pol} for q, pol in g.controls],
                    "target": g.target,
                }
            )
        else:
            if isinstance(g, ControlledDense):
                g = _fold_control_into_matrix(g)
            gates.append(
                {
                    "kind": "dense",
                    "targets": list(g.targets),
                    "label": g.label,
                    "matrix": _matrix_to_json(g.matrix),
                }
            )
    return {
        "n_qubits": c.n_qubits,
        "ancillas": sorted(c.ancillas),
        "gates": gates,
    }


def circuit_from_json_dict(data: dict) -> Circuit:
    gates: list[Gate] = []
    for item in data["gates"]:
        kind = item["kind"]
        if kind in _SINGLE_QUBIT_KINDS:
            gates.append(SingleQubit(kind, int(item["target"])))
        elif kind == "mcx":
            controls = tuple((int(c["q"]), c["pol"]) for c in item["controls"])
            gates.append(_mcx_or_x(controls, int(item["target"])))
        elif kind == "dense":
            targets = tuple(int(q) for q in item["targets"])
            matrix = _matrix_from_json(item["matrix"], 1 << len(targets))
            gates.append(DenseUnitary(targets, matrix, item.get("label", "U")))
        else:
            raise ValueError(f"unknown gate kind {kind!r}")
    return Circuit(
        int(data["n_qubits"]),
        tuple(gates),
        frozenset(int(q) for q in data.get("ancillas", [])),
    )


def save_circuit(c: Circuit, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(circuit_to_json_dict(c), fh, indent=1)
        fh.write("\n")


def load_circuit(path: str) -> Circuit:
    with open(path, "r", encoding="ascii") as fh:
        return circuit_from_json_dict(json.load(fh))


def to_qasm(c: Circuit) -> str:
    """QASM-like text.  Open controls are rendered as X-conjugated closed
    controls; multi-controlled X beyond two controls uses an mcx line.
    Dense gates have no gate-level decomposition here and appear as
    comments."""
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{c.n_qubits}];",
    ]
    for g in c.gates:
        if isinstance(g, SingleQubit):
            lines.append(f"{g.kind} q[{g.target}];")
        elif isinstance(g, MCX):
            open_controls = [q for q, pol in g.controls if pol == OPEN]
            for q in open_controls:
                lines.append(f"x q[{q}];")
            args = ",".join(f"q[{q}]" for q, _ in g.controls) + f",q[{g.target}]"
            name = {0: "x", 1: "cx", 2: "ccx"}.get(g.arity, "mcx")
            if g.arity == 0:
                lines.append(f"x q[{g.target}];")
            else:
                lines.append(f"{name} {args};")
            for q in open_controls:
                lines.append(f"x q[{q}];")
        else:
            if isinstance(g, ControlledDense):
                g = _fold_control_into_matrix(g)
            targets = ",".join(f"q[{q}]" for q in g.targets)
            lines.append(f"// dense gate {g.label} on {targets}")
    return "\n".join(lines) + "\n"
