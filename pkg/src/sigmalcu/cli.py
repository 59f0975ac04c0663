"""Command-line surface.

Subcommands mirror the library workflows and emit machine-readable
artifacts (Matrix Market, JSON, CSV).  Exit codes: 0 success, 1 validation
or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import blockenc, pauli, pde, sigma
from .circuits import (
    build_dilation_circuit,
    build_ul_circuit,
    gate_count,
    load_circuit,
    save_circuit,
    to_qasm,
)
from .expectation import StateOracle, expval_sandwich, expval_term, sample_expval
from .matrices import ZERO_TOL, load_matrix_market, save_matrix_market
from .sigma import SigmaTerm, term_matrix
from .simulate import circuit_to_matrix

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2

POISSON_GRID = (4, 5, 6, 7)  # n_x = 16, 32, 64, 128
HEAT_WAVE_GRID = ((2, 2), (2, 3), (3, 3), (3, 4))  # n_x(n_t) = 4(4), 4(8), 8(8), 8(16)


def load_oracle(path: str, label: str) -> StateOracle:
    with open(path, "r", encoding="ascii") as fh:
        data = json.load(fh)
    pairs = data["matrix"]
    dim = int(round(len(pairs) ** 0.5))
    matrix = np.array([complex(re, im) for re, im in pairs]).reshape(dim, dim)
    return StateOracle(matrix, data.get("label", label))


def save_oracle(oracle: StateOracle, path: str) -> None:
    flat = oracle.matrix.reshape(-1)
    payload = {
        "n_qubits": oracle.n_qubits,
        "label": oracle.label,
        "matrix": [[float(v.real), float(v.imag)] for v in flat],
    }
    with open(path, "w", encoding="ascii") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def _generate_system(args: argparse.Namespace) -> pde.PdeSystem:
    if args.family == "poisson":
        return pde.poisson_1d(args.s)
    if args.family == "heat":
        params = pde.HeatParams(
            s=args.s,
            t=args.t,
            alpha=args.alpha,
            length=args.length,
            T=args.final_time,
            q_flux=args.q_flux,
            k_cond=args.k_cond,
            robin_w1=args.w1,
            robin_w2=args.w2,
        )
        return pde.heat_1d(params)
    return pde.wave_1d(args.s, args.t, c=args.wave_speed, length=args.length, T=args.final_time)


def cmd_decompose(args: argparse.Namespace) -> int:
    matrix = load_matrix_market(args.infile, tol=args.tol)
    decomposition = sigma.decompose_numerical(matrix)
    if args.merge:
        decomposition = sigma.merge_terms(decomposition)
    sigma.save_decomposition(decomposition, args.out)
    print(f"terms: {len(decomposition)}  nnz: {matrix.nnz}")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    if args.family in ("heat", "wave") and args.t is None:
        raise ValueError(f"--t is required for the {args.family} family")
    system = _generate_system(args)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    save_matrix_market(system.matrix, str(outdir / "matrix.mtx"))
    sigma.save_decomposition(system.decomposition, str(outdir / "decomposition.json"))
    if system.rhs is not None:
        payload = {
            "length": int(system.rhs.size),
            "values": [[float(v.real), float(v.imag)] for v in system.rhs],
        }
        with open(outdir / "rhs.json", "w", encoding="ascii") as fh:
            json.dump(payload, fh)
            fh.write("\n")
    n_x = 1 << args.s
    n_t = "" if args.family == "poisson" else 1 << args.t
    pauli_terms = ""
    if args.pauli:
        pauli_terms = len(pauli.decompose_pauli(system.matrix))
    _append_counts_row(
        outdir / "counts.csv",
        [args.family, n_x, n_t, len(system.decomposition), pauli_terms, system.predicted_term_count],
    )
    print(
        f"{args.family}: sigma terms {len(system.decomposition)} "
        f"(predicted <= {system.predicted_term_count})"
    )
    return EXIT_OK


def _append_counts_row(path: Path, row: list) -> None:
    new_file = not path.exists()
    with open(path, "a", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        if new_file:
            writer.writerow(
                ["family", "n_x", "n_t", "sigma_terms", "pauli_terms", "predicted"]
            )
        writer.writerow(row)


def _parse_compare_range(family: str, text: str | None) -> list[tuple[int, int | None]]:
    """Grid points as (s, t).  Poisson ranges list n_x values; heat and wave
    ranges list n_x(n_t) pairs."""
    if text is None:
        if family == "poisson":
            return [(s, None) for s in POISSON_GRID]
        return [(s, t) for s, t in HEAT_WAVE_GRID]
    points = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if family == "poisson":
            n_x = int(chunk)
        else:
            if "(" not in chunk or not chunk.endswith(")"):
                raise ValueError(f"expected n_x(n_t) grid point, got {chunk!r}")
            n_x = int(chunk[: chunk.index("(")])
            n_t = int(chunk[chunk.index("(") + 1 : -1])
        s = n_x.bit_length() - 1
        if (1 << s) != n_x:
            raise ValueError(f"n_x = {n_x} is not a power of two")
        if family == "poisson":
            points.append((s, None))
        else:
            t = n_t.bit_length() - 1
            if (1 << t) != n_t:
                raise ValueError(f"n_t = {n_t} is not a power of two")
            points.append((s, t))
    return points


def cmd_compare(args: argparse.Namespace) -> int:
    rows = []
    for s, t in _parse_compare_range(args.family, args.range):
        if args.family == "poisson":
            system = pde.poisson_1d(s)
            n_t = ""
        elif args.family == "heat":
            system = pde.heat_1d(pde.HeatParams(s=s, t=t))
            n_t = 1 << t
        else:
            system = pde.wave_1d(s, t)
            n_t = 1 << t
        pauli_terms = len(pauli.decompose_pauli(system.matrix))
        rows.append([args.family, 1 << s, n_t, len(system.decomposition), pauli_terms])
    lines = [["family", "n_x", "n_t", "sigma_terms", "pauli_terms"]] + rows
    if args.out:
        with open(args.out, "w", newline="", encoding="ascii") as fh:
            csv.writer(fh).writerows(lines)
    else:
        for line in lines:
            print(",".join(str(x) for x in line))
    return EXIT_OK


def _verify_term(
    term: SigmaTerm, index: int, circuit_dir: Path | None, check_dilation: bool
) -> tuple[bool, str]:
    n = term.n_qubits
    if circuit_dir is not None:
        circuit = load_circuit(str(circuit_dir / f"term_{index:03d}.json"))
        if circuit.n_qubits != n + 1:
            return False, "circuit width mismatch"
    else:
        circuit = build_ul_circuit(term)
    unit = SigmaTerm(1.0, term.factors)
    dim = 1 << n
    block = term_matrix(unit).to_dense()
    comp = sigma.completion_matrix(unit) - block
    expected = np.block([[block, comp], [comp, block]])
    actual = circuit_to_matrix(circuit)
    if not np.array_equal(actual, expected):
        return False, "matrix does not match completion block structure"
    counts = gate_count(circuit)
    k = sum(1 for f in term.factors if f.value == "I")
    if circuit_dir is None:
        if counts.single_qubit > n + 1:
            return False, f"{counts.single_qubit} single-qubit gates exceeds n + 1"
        if len(counts.mcx) > 1 or (counts.mcx and counts.mcx[0] != n - k):
            return False, f"expected one multi-controlled X of arity {n - k}"
    if check_dilation:
        ok, msg = _verify_dilation(term, actual, block)
        if not ok:
            return False, msg
    note = " (identity circuit)" if all(f.value == "I" for f in term.factors) else ""
    return True, f"ok{note}"


def _verify_dilation(term: SigmaTerm, completion_matrix: np.ndarray, block: np.ndarray) -> tuple[bool, str]:
    circuit = build_dilation_circuit(term)
    s = sum(1 for f in term.factors if f.value in "PM")
    counts = gate_count(circuit)
    # The all-identity term normalizes its single zero-control gate to X.
    expected_mcx = 0 if all(f.value == "I" for f in term.factors) else 2 * s + 1
    if len(counts.mcx) != expected_mcx:
        return False, f"dilation used {len(counts.mcx)} multi-controlled X, expected {expected_mcx}"
    matrix = circuit_to_matrix(circuit)
    dim = block.shape[0]
    if s == 0:
        if not np.array_equal(matrix, completion_matrix):
            return False, "dilation and completion circuits disagree at s = 0"
    elif not np.array_equal(matrix[:dim, :dim], block):
        return False, "dilation top-left block is not the term matrix"
    return True, "ok"


def cmd_verify(args: argparse.Namespace) -> int:
    decomposition = sigma.load_decomposition(args.decomp)
    circuit_dir = Path(args.circuits) if args.circuits else None
    failures = 0
    print(f"{'term':>4}  {'factors':<12} {'result'}")
    for index, term in enumerate(decomposition.terms):
        ok, message = _verify_term(term, index, circuit_dir, args.dilation)
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        print(f"{index:>4}  {term.factor_string:<12} {status}: {message}")
    if failures:
        print(f"{failures} of {len(decomposition)} terms failed")
        return EXIT_VERIFY_FAILED
    print(f"all {len(decomposition)} terms verified")
    return EXIT_OK


def cmd_circuit(args: argparse.Namespace) -> int:
    term = SigmaTerm.from_string(1.0, args.term)
    circuit = build_ul_circuit(term)
    save_circuit(circuit, args.out)
    if args.qasm is not None:
        qasm_path = args.qasm or str(Path(args.out).with_suffix(".qasm"))
        with open(qasm_path, "w", encoding="ascii") as fh:
            fh.write(to_qasm(circuit))
    counts = gate_count(circuit)
    print(
        f"qubits: {circuit.n_qubits}  single-qubit gates: {counts.single_qubit}  "
        f"mcx arities: {list(counts.mcx)}"
    )
    return EXIT_OK


def cmd_expval(args: argparse.Namespace) -> int:
    decomposition = sigma.load_decomposition(args.decomp)
    u = load_oracle(args.u, "U")
    v = load_oracle(args.v, "V")
    if args.m is not None:
        if args.shots is not None:
            raise ValueError("shot sampling supports term expectations only")
        m = load_oracle(args.m, "M")
        per_term = []
        total = 0j
        for i, ti in enumerate(decomposition.terms):
            for j, tj in enumerate(decomposition.terms):
                value = expval_sandwich(u, v, m, ti, tj)
                total += ti.coeff.conjugate() * tj.coeff * value
                per_term.append({"i": i, "j": j, "re": value.real, "im": value.imag})
    else:
        per_term = []
        total = 0j
        for i, term in enumerate(decomposition.terms):
            if args.shots is not None:
                value = sample_expval(u, v, term, args.shots, args.seed + i)
            else:
                value = expval_term(u, v, term)
            total += term.coeff * value
            per_term.append(
                {"factors": term.factor_string, "re": value.real, "im": value.imag}
            )
    payload = {"re": total.real, "im": total.imag, "per_term": per_term}
    text = json.dumps(payload, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="ascii")
    print(text)
    return EXIT_OK


def cmd_block_encode(args: argparse.Namespace) -> int:
    decomposition = sigma.load_decomposition(args.decomp)
    encoding = blockenc.assemble(decomposition)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    save_circuit(encoding.overall, str(outdir / "block_encoding.json"))
    report = blockenc.verify_block_encoding(encoding)
    with open(outdir / "verification.json", "w", encoding="ascii") as fh:
        json.dump(report, fh, indent=1)
        fh.write("\n")
    resources = blockenc.resource_report(decomposition, args.epsilon)
    with open(outdir / "resources.json", "w", encoding="ascii") as fh:
        json.dump(resources, fh, indent=1)
        fh.write("\n")
    print(
        f"lambda: {report['lambda']:.6g}  frobenius_error: {report['frobenius_error']:.3e}  "
        f"qubits: {report['qubits']}"
    )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigmalcu",
        description="Sigma-basis decompositions, completion circuits, and block encodings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="sigma-decompose a Matrix Market file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--merge", action="store_true", help="merge projector pairs into identities")
    p.add_argument("--tol", type=float, default=ZERO_TOL, help="zero-prune tolerance")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("generate", help="emit a PDE system and its decomposition")
    p.add_argument("--family", choices=("poisson", "heat", "wave"), required=True)
    p.add_argument("--s", type=int, required=True, help="log2 of the spatial grid size")
    p.add_argument("--t", type=int, default=None, help="log2 of the number of time levels")
    p.add_argument("--alpha", type=float, default=1.0, help="thermal diffusivity")
    p.add_argument("--length", type=float, default=None, help="domain length (default n_x)")
    p.add_argument("--final-time", type=float, default=None, help="integration time (default n_t - 1)")
    p.add_argument("--q-flux", type=float, default=1.0, help="boundary heat flux")
    p.add_argument("--k-cond", type=float, default=1.0, help="thermal conductivity")
    p.add_argument("--w1", type=float, default=0.0, help="Robin weight on u")
    p.add_argument("--w2", type=float, default=1.0, help="Robin weight on du/dx")
    p.add_argument("--wave-speed", type=float, default=1.0)
    p.add_argument("--pauli", action="store_true", help="also record the Pauli term count")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("compare", help="sigma vs Pauli term counts over a grid")
    p.add_argument("--family", choices=("poisson", "heat", "wave"), required=True)
    p.add_argument(
        "--range",
        default=None,
        help="poisson: comma list of n_x; heat/wave: comma list of n_x(n_t)",
    )
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="check completion circuits of a decomposition")
    p.add_argument("--decomp", required=True)
    p.add_argument("--dilation", action="store_true", help="also cross-check dilation circuits")
    p.add_argument(
        "--circuits",
        default=None,
        help="directory of term_NNN.json circuits to verify instead of freshly built ones",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("circuit", help="build the completion circuit of one term")
    p.add_argument("--term", required=True, help="factor string over I, P, M, A, B")
    p.add_argument("--out", required=True)
    p.add_argument(
        "--qasm",
        nargs="?",
        const="",
        default=None,
        help="also write a QASM-like text file (default path: --out with .qasm)",
    )
    p.set_defaults(func=cmd_circuit)

    p = sub.add_parser("expval", help="Hadamard-test expectation of a decomposition")
    p.add_argument("--decomp", required=True)
    p.add_argument("--u", required=True, help="left state-preparation oracle (JSON)")
    p.add_argument("--v", required=True, help="right state-preparation oracle (JSON)")
    p.add_argument("--m", default=None, help="optional observable oracle (JSON)")
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_expval)

    p = sub.add_parser("block-encode", help="assemble and verify a PREP/SELECT encoding")
    p.add_argument("--decomp", required=True)
    p.add_argument("--outdir", required=True)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.set_defaults(func=cmd_block_encode)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
