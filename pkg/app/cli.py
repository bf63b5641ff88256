"""Command-line front end: build, simulate, rewrite and compare circuits.

Exit status: 0 on success, 1 on usage errors (bad flags, unreadable paths),
2 on domain errors (malformed circuits, no terminal QFT, bad input states).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn

from app.core.config import settings
from app.core.errors import CircuitFormatError, InputStateError, QftToolkitError
from app.schemas.circuit import Circuit
from app.services.circuit_service import deserialize, gate_counts, serialize
from app.services.qft_service import build_coherent_qft, build_semiclassical_qft, period_peaks, periodic_state
from app.services.report_rendering import (
    counts_histogram,
    counts_map,
    distribution_histogram,
    distribution_map,
    equivalence_table,
    gate_counts_line,
    rewrite_table,
)
from app.services.rewrite_service import INPUT_SETS, equivalence_report, rewrite_semiclassical, standard_inputs
from app.services.statevector import StateVector, run_exact, sample_counts

logger = logging.getLogger(__name__)

BUILDERS = {"coherent": build_coherent_qft, "semiclassical": build_semiclassical_qft}


class UsageError(Exception):
    """Bad command line; reported with exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _s_value(raw: str) -> int:
    value = int(raw)
    if not 0 <= value <= settings.max_s:
        raise argparse.ArgumentTypeError(f"s must be in 0..{settings.max_s}")
    return value


def _positive(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _non_negative(raw: str) -> int:
    value = int(raw)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semiqft", description=settings.app_name)
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build", help="write a Fourier-transform circuit file")
    build.add_argument("--kind", choices=sorted(BUILDERS), required=True)
    build.add_argument("--s", type=_s_value, required=True)
    build.add_argument("--out", type=Path, required=True)

    simulate = commands.add_parser("simulate", help="run a circuit file")
    simulate.add_argument("--in", dest="path", type=Path, required=True)
    mode = simulate.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--shots", type=_positive)
    source = simulate.add_mutually_exclusive_group()
    source.add_argument("--input-basis", type=int, default=None)
    source.add_argument("--input-amps", type=Path, default=None)
    simulate.add_argument("--seed", type=int, default=settings.default_seed)
    simulate.add_argument("--json", action="store_true")

    rewrite = commands.add_parser("rewrite", help="replace a terminal QFT with feedforward boxes")
    rewrite.add_argument("--in", dest="path", type=Path, required=True)
    rewrite.add_argument("--out", type=Path, required=True)
    rewrite.add_argument("--report", type=Path, default=None)
    rewrite.add_argument("--json", action="store_true")

    compare = commands.add_parser("compare", help="total-variation distance between two circuits")
    compare.add_argument("--a", type=Path, required=True)
    compare.add_argument("--b", type=Path, required=True)
    compare.add_argument("--inputs", default="default", help=f"{'|'.join(INPUT_SETS)}|file:PATH")
    compare.add_argument("--seed", type=int, default=settings.default_seed)
    compare.add_argument("--json", action="store_true")

    demo = commands.add_parser("demo-period", help="semiclassical QFT of a periodic state")
    demo.add_argument("--s", type=_s_value, required=True)
    demo.add_argument("--r", type=_positive, required=True)
    demo.add_argument("--offset", type=_non_negative, default=0)
    demo.add_argument("--json", action="store_true")
    return parser


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _load_circuit(path: Path) -> Circuit:
    try:
        text = _read_text(path)
    except UnicodeDecodeError as exc:
        raise CircuitFormatError("$", f"not valid UTF-8 at byte {exc.start}") from exc
    return deserialize(text)


def _load_amplitude_file(path: Path) -> list[StateVector] | StateVector:
    try:
        text = _read_text(path)
    except UnicodeDecodeError as exc:
        raise InputStateError(f"{path}: not valid UTF-8 at byte {exc.start}") from exc
    return _load_amplitudes(text, str(path))


def _load_amplitudes(text: str, source: str) -> list[StateVector] | StateVector:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputStateError(f"{source}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(payload, list) or not payload:
        raise InputStateError(f"{source}: expected a non-empty JSON array")
    try:
        if isinstance(payload[0], list) and payload[0] and isinstance(payload[0][0], list):
            return [StateVector.from_amplitudes(entry) for entry in payload]
        return StateVector.from_amplitudes(payload)
    except (TypeError, ValueError, IndexError) as exc:
        raise InputStateError(f"{source}: amplitudes must be [re, im] pairs") from exc


def _emit(text: str) -> None:
    sys.stdout.write(text.rstrip("\n") + "\n")


def _emit_json(payload: Any) -> None:
    _emit(json.dumps(payload, indent=2, sort_keys=True))


def _cmd_build(args: argparse.Namespace) -> None:
    circuit = BUILDERS[args.kind](args.s)
    _write_text(args.out, serialize(circuit) + "\n")
    _emit(f"wrote {args.out}: {len(circuit.instructions)} instructions ({gate_counts_line(gate_counts(circuit))})")


def _simulation_input(args: argparse.Namespace, circuit: Circuit) -> StateVector:
    if args.input_amps is not None:
        state = _load_amplitude_file(args.input_amps)
        if isinstance(state, list):
            raise InputStateError(f"{args.input_amps}: expected a single state")
        return state
    return StateVector.basis(circuit.n_qubits, args.input_basis or 0)


def _cmd_simulate(args: argparse.Namespace) -> None:
    circuit = _load_circuit(args.path)
    state = _simulation_input(args, circuit)
    if args.exact:
        distribution = run_exact(circuit, state)
        if args.json:
            _emit_json(distribution_map(distribution))
        else:
            _emit(distribution_histogram(distribution))
        return
    counts = sample_counts(circuit, state, args.shots, args.seed)
    if args.json:
        _emit_json(counts_map(counts))
    else:
        _emit(f"{args.shots} shots, seed {args.seed}\n{counts_histogram(counts, circuit.n_cbits)}")


def _cmd_rewrite(args: argparse.Namespace) -> None:
    circuit = _load_circuit(args.path)
    rewritten, report = rewrite_semiclassical(circuit)
    _write_text(args.out, serialize(rewritten) + "\n")
    if args.report is not None:
        _write_text(args.report, report.model_dump_json(indent=2) + "\n")
    if args.json:
        _emit(report.model_dump_json(indent=2))
    else:
        _emit(f"wrote {args.out}\n{rewrite_table(report)}")


def _compare_inputs(source: str, n_qubits: int, seed: int) -> tuple[list[StateVector], list[str]]:
    if source.startswith("file:"):
        path = Path(source[len("file:") :])
        states = _load_amplitude_file(path)
        states = states if isinstance(states, list) else [states]
        return states, [f"{path.name}[{index}]" for index in range(len(states))]
    if source not in INPUT_SETS:
        raise UsageError(f"--inputs must be one of {', '.join(INPUT_SETS)} or file:PATH")
    states = standard_inputs(source, n_qubits, seed)
    basis_labels = [f"|{a}>" for a in range(1 << n_qubits)]
    random_labels = [f"random[{index}]" for index in range(settings.random_inputs)]
    labels = {
        "basis": basis_labels,
        "random": random_labels,
        "fourier": [f"F^-1|{c}>" for c in range(1 << n_qubits)],
        "default": basis_labels + random_labels,
    }[source]
    return states, labels


def _cmd_compare(args: argparse.Namespace) -> None:
    circuit_a = _load_circuit(args.a)
    circuit_b = _load_circuit(args.b)
    states, labels = _compare_inputs(args.inputs, circuit_a.n_qubits, args.seed)
    report = equivalence_report(circuit_a, circuit_b, states)
    if args.json:
        _emit_json({**report.model_dump(), "inputs": labels})
    else:
        _emit(equivalence_table(report, labels))


def _cmd_demo_period(args: argparse.Namespace) -> None:
    q = 1 << (args.s + 1)
    if args.r > q:
        raise UsageError(f"--r must be in 1..{q} for s={args.s}")
    if args.offset >= args.r:
        raise UsageError(f"--offset must be in 0..{args.r - 1}")
    circuit = build_semiclassical_qft(args.s)
    distribution = run_exact(circuit, periodic_state(args.s, args.r, args.offset))
    peaks = period_peaks(args.s, args.r)
    if args.json:
        _emit_json({"distribution": distribution_map(distribution), "peaks": peaks})
        return
    exact = "exact" if q % args.r == 0 else "rounded, r does not divide q"
    _emit(f"q={q} r={args.r} offset={args.offset}; peaks at multiples of q/r ({exact})\n{distribution_histogram(distribution, peaks)}")


COMMANDS = {
    "build": _cmd_build,
    "simulate": _cmd_simulate,
    "rewrite": _cmd_rewrite,
    "compare": _cmd_compare,
    "demo-period": _cmd_demo_period,
}


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=settings.log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except QftToolkitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
