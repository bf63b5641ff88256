"""Validation, gate accounting and the JSON file format for circuits."""

from __future__ import annotations

import logging

from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import CircuitFormatError, CircuitValidationError
from app.schemas.circuit import (
    Circuit,
    ClassicallyControlledSplit,
    ControlledPhase,
    GateCounts,
    Measure,
    OneBitSplit,
    Violation,
)

logger = logging.getLogger(__name__)


def validate(circuit: Circuit) -> list[Violation]:
    """Return every well-formedness violation of ``circuit``; empty when valid."""
    violations: list[Violation] = []
    measured_at: dict[int, int] = {}
    written_at: dict[int, int] = {}

    def report(index: int | None, code: str, message: str) -> None:
        violations.append(Violation(index=index, code=code, message=message))

    if circuit.n_qubits > settings.max_qubits:
        report(None, "register-too-large", f"{circuit.n_qubits} qubits exceed the {settings.max_qubits}-qubit guard")

    for index, instruction in enumerate(circuit.instructions):
        for qubit in instruction.qubits:
            if qubit >= circuit.n_qubits:
                report(index, "qubit-out-of-range", f"qubit {qubit} outside register of {circuit.n_qubits}")

        if isinstance(instruction, ClassicallyControlledSplit):
            for cbit in instruction.cbits:
                if cbit >= circuit.n_cbits:
                    report(index, "cbit-out-of-range", f"classical bit {cbit} outside register of {circuit.n_cbits}")
                elif cbit not in written_at:
                    report(index, "feedforward-before-measure", f"classical bit {cbit} is read before any measurement writes it")

        for qubit in instruction.qubits:
            if qubit not in measured_at:
                continue
            if isinstance(instruction, Measure):
                report(index, "measure-twice", f"qubit {qubit} already measured at instruction {measured_at[qubit]}")
            else:
                report(index, "quantum-after-measure", f"qubit {qubit} used after its measurement at instruction {measured_at[qubit]}")

        if isinstance(instruction, Measure):
            if instruction.cbit >= circuit.n_cbits:
                report(index, "cbit-out-of-range", f"classical bit {instruction.cbit} outside register of {circuit.n_cbits}")
            elif instruction.cbit in written_at:
                report(index, "cbit-reassigned", f"classical bit {instruction.cbit} already written at instruction {written_at[instruction.cbit]}")
            else:
                written_at[instruction.cbit] = index
            measured_at.setdefault(instruction.qubit, index)

    return violations


def ensure_valid(circuit: Circuit) -> None:
    """Raise ``CircuitValidationError`` when ``circuit`` has violations."""
    violations = validate(circuit)
    if violations:
        raise CircuitValidationError(violations)


def gate_counts(circuit: Circuit) -> GateCounts:
    """Tally instructions by kind."""
    tally = {"one_bit": 0, "two_bit": 0, "measurements": 0, "classically_controlled": 0}
    for instruction in circuit.instructions:
        if isinstance(instruction, OneBitSplit):
            tally["one_bit"] += 1
        elif isinstance(instruction, ControlledPhase):
            tally["two_bit"] += 1
        elif isinstance(instruction, Measure):
            tally["measurements"] += 1
        elif isinstance(instruction, ClassicallyControlledSplit):
            tally["classically_controlled"] += 1
    return GateCounts(**tally)


def serialize(circuit: Circuit) -> str:
    """Encode ``circuit`` in the JSON file format; phases stay integer pairs."""
    return circuit.model_dump_json(by_alias=True, indent=2)


def deserialize(text: str | bytes) -> Circuit:
    """Decode circuit JSON, raising ``CircuitFormatError`` with position and reason."""
    try:
        circuit = Circuit.model_validate_json(text)
    except ValidationError as exc:
        error = exc.errors()[0]
        position = ".".join(str(part) for part in error["loc"]) or "$"
        raise CircuitFormatError(position, error["msg"]) from exc

    violations = validate(circuit)
    if violations:
        first = violations[0]
        position = "n_qubits" if first.index is None else f"instructions.{first.index}"
        raise CircuitFormatError(position, first.message)

    logger.debug("Decoded circuit: %d qubits, %d instructions", circuit.n_qubits, len(circuit.instructions))
    return circuit
