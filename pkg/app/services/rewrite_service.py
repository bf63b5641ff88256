"""Compiler pass replacing a terminal coherent QFT with measurement-plus-feedforward boxes."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.core.config import settings
from app.core.errors import InputStateError, PatternMismatchError, RegisterMismatchError
from app.schemas.circuit import Circuit, ControlledPhase, GateCounts, Measure, OneBitSplit
from app.services.circuit_service import ensure_valid, gate_counts
from app.services.qft_service import fourier_basis_state, semiclassical_boxes
from app.services.statevector import StateVector, run_exact

logger = logging.getLogger(__name__)

INPUT_SETS: tuple[str, ...] = ("basis", "random", "fourier", "default")


class QftMatch(BaseModel):
    """Instructions ``[start, end)`` form the coherent pattern on ``wires`` (top wire first)."""

    start: int
    end: int
    wires: tuple[int, ...]
    cbits: tuple[int, ...]

    model_config = ConfigDict(frozen=True)

    @property
    def n_wires(self) -> int:
        return len(self.wires)


class QftMismatch(BaseModel):
    """No terminal QFT; ``reason`` describes the first structural mismatch found."""

    reason: str
    index: int | None = None
    wire: int | None = None
    m: int | None = None

    model_config = ConfigDict(frozen=True)


class RewriteReport(BaseModel):
    matched: bool
    two_bit_gates_removed: int
    classically_controlled_gates_added: int
    measurements: int
    before: GateCounts
    after: GateCounts

    model_config = ConfigDict(frozen=True)


class EquivalenceReport(BaseModel):
    max_tv: float
    worst_input: int
    distances: list[float]

    model_config = ConfigDict(frozen=True)


def detect_terminal_qft(circuit: Circuit) -> QftMatch | QftMismatch:
    """Find a coherent QFT on the trailing-measured wires, any wire permutation.

    Roles come from the order of each wire's last zero-phase split. Controlled
    phases may appear in any order that keeps, on every wire, the ladder from
    earlier roles before the split and the ladder to later roles after it.
    """
    ensure_valid(circuit)
    instructions = circuit.instructions
    end = len(instructions)

    measure_start = end
    while measure_start > 0 and isinstance(instructions[measure_start - 1], Measure):
        measure_start -= 1
    if measure_start == end:
        return QftMismatch(reason="circuit does not end with measurements")
    cbit_of = {instruction.qubit: instruction.cbit for instruction in instructions[measure_start:]}

    touching: dict[int, list[int]] = {wire: [] for wire in cbit_of}
    for index in range(measure_start):
        for qubit in instructions[index].qubits:
            if qubit in touching:
                touching[qubit].append(index)

    pivots: dict[int, int] = {}
    for wire in sorted(cbit_of):
        pivot = next(
            (
                index
                for index in reversed(touching[wire])
                if isinstance(instructions[index], OneBitSplit) and instructions[index].phase.is_zero()
            ),
            None,
        )
        if pivot is None:
            return QftMismatch(reason=f"measured wire {wire} has no zero-phase OneBitSplit", wire=wire)
        pivots[wire] = pivot

    order = sorted(cbit_of, key=pivots.__getitem__)
    role = {wire: k for k, wire in enumerate(order)}
    pattern: set[int] = set()

    for wire in order:
        k = role[wire]
        expected = {order[j]: j - k + 1 for j in range(k + 1, len(order))}
        seen: dict[int, int] = {}
        for index in touching[wire]:
            if index <= pivots[wire]:
                continue
            instruction = instructions[index]
            if not isinstance(instruction, ControlledPhase):
                return QftMismatch(
                    reason=f"instruction {index} ({instruction.kind}) acts on wire {wire} after its split",
                    index=index,
                    wire=wire,
                )
            partner = instruction.partner_of(wire)
            if partner not in expected:
                return QftMismatch(
                    reason=f"instruction {index}: ControlledPhase({wire}, {partner}) is not on the ladder below wire {wire}",
                    index=index,
                    wire=wire,
                )
            if instruction.m != expected[partner]:
                return QftMismatch(
                    reason=f"instruction {index}: ControlledPhase({wire}, {partner}) has m={instruction.m}, expected m={expected[partner]}",
                    index=index,
                    wire=wire,
                    m=instruction.m,
                )
            if partner in seen:
                return QftMismatch(
                    reason=f"instruction {index} repeats ControlledPhase({wire}, {partner}) from instruction {seen[partner]}",
                    index=index,
                    wire=wire,
                )
            seen[partner] = index
        for partner, m in expected.items():
            if partner not in seen:
                return QftMismatch(
                    reason=f"missing ControlledPhase on wire {wire} with wire {partner} (m={m})",
                    wire=wire,
                    m=m,
                )
        pattern.add(pivots[wire])
        pattern.update(seen.values())

    start = min(pattern)
    for index in range(start, measure_start):
        if index not in pattern:
            return QftMismatch(
                reason=f"instruction {index} ({instructions[index].kind}) interleaves with the QFT block",
                index=index,
            )

    logger.debug("Terminal QFT on wires %s spanning %d..%d", order, start, end)
    return QftMatch(start=start, end=end, wires=tuple(order), cbits=tuple(cbit_of[wire] for wire in order))


def rewrite_semiclassical(circuit: Circuit) -> tuple[Circuit, RewriteReport]:
    """Replace the terminal QFT span with feedforward boxes; the prefix is kept verbatim."""
    match = detect_terminal_qft(circuit)
    if isinstance(match, QftMismatch):
        raise PatternMismatchError(match.reason)

    replacement = tuple(semiclassical_boxes(match.wires, match.cbits))
    rewritten = circuit.replace_span(match.start, match.end, replacement)
    before = gate_counts(circuit)
    after = gate_counts(rewritten)
    report = RewriteReport(
        matched=True,
        two_bit_gates_removed=before.two_bit - after.two_bit,
        classically_controlled_gates_added=after.classically_controlled - before.classically_controlled,
        measurements=after.measurements,
        before=before,
        after=after,
    )
    logger.info(
        "Rewrote %d-wire QFT: removed %d two-bit gates, added %d classically controlled gates",
        match.n_wires,
        report.two_bit_gates_removed,
        report.classically_controlled_gates_added,
    )
    return rewritten, report


def equivalence_report(circuit_a: Circuit, circuit_b: Circuit, inputs: Sequence[StateVector]) -> EquivalenceReport:
    """Total-variation distance between the exact readout distributions, per input."""
    if (circuit_a.n_qubits, circuit_a.n_cbits) != (circuit_b.n_qubits, circuit_b.n_cbits):
        raise RegisterMismatchError(
            f"registers differ: {circuit_a.n_qubits}q/{circuit_a.n_cbits}c vs {circuit_b.n_qubits}q/{circuit_b.n_cbits}c"
        )
    if not inputs:
        raise InputStateError("equivalence check needs at least one input state")

    distances = [run_exact(circuit_a, state).total_variation(run_exact(circuit_b, state)) for state in inputs]
    worst = int(np.argmax(distances))
    logger.info("Compared %d inputs: max TV %.3g at input %d", len(inputs), distances[worst], worst)
    return EquivalenceReport(max_tv=distances[worst], worst_input=worst, distances=distances)


def standard_inputs(kind: str, n_qubits: int, seed: int, count: int | None = None) -> list[StateVector]:
    """Named input sets: basis states, seeded random states, Fourier basis states, or basis + random."""
    count = settings.random_inputs if count is None else count
    if kind == "basis":
        return [StateVector.basis(n_qubits, a) for a in range(1 << n_qubits)]
    if kind == "random":
        rng = np.random.default_rng(seed)
        return [StateVector.random(n_qubits, rng) for _ in range(count)]
    if kind == "fourier":
        if n_qubits < 1:
            raise InputStateError("Fourier basis inputs need at least one qubit")
        return [fourier_basis_state(c, n_qubits - 1) for c in range(1 << n_qubits)]
    if kind == "default":
        return standard_inputs("basis", n_qubits, seed) + standard_inputs("random", n_qubits, seed, count)
    raise InputStateError(f"unknown input set {kind!r}; choose one of {', '.join(INPUT_SETS)}")
