"""Terminal-QFT detection, the semiclassical rewrite and the equivalence analyzer."""

import numpy as np
import pytest

from app.core.errors import InputStateError, PatternMismatchError, RegisterMismatchError
from app.schemas.circuit import (
    Circuit,
    ClassicallyControlledSplit,
    ControlledPhase,
    Measure,
    OneBitSplit,
)
from app.schemas.phase import DyadicPhase
from app.services.qft_service import build_coherent_qft, build_semiclassical_qft, coherent_qft_block, fourier_basis_state
from app.services.rewrite_service import (
    QftMatch,
    QftMismatch,
    detect_terminal_qft,
    equivalence_report,
    rewrite_semiclassical,
    standard_inputs,
)
from app.services.statevector import StateVector


def _build_circuit(n_qubits: int, instructions, n_cbits: int | None = None) -> Circuit:
    return Circuit(
        n_qubits=n_qubits,
        n_cbits=n_qubits if n_cbits is None else n_cbits,
        instructions=tuple(instructions),
    )


def _build_prefixed_qft(s: int) -> Circuit:
    """Entangling prefix with nonzero-phase splits, followed by the coherent transform."""
    n = s + 1
    prefix = [OneBitSplit(target=wire, phase=DyadicPhase.of(2 * wire + 1, 3)) for wire in range(n)]
    prefix += [ControlledPhase(qubit_a=wire, qubit_b=wire + 1, m=wire + 2) for wire in range(n - 1)]
    return build_coherent_qft(s).replace_span(0, 0, tuple(prefix))


def _without(circuit: Circuit, index: int) -> Circuit:
    return circuit.replace_span(index, index + 1, ())


def _mismatch(circuit: Circuit) -> QftMismatch:
    result = detect_terminal_qft(circuit)
    assert isinstance(result, QftMismatch)
    return result


def test_detects_built_coherent_qft() -> None:
    match = detect_terminal_qft(build_coherent_qft(3))

    assert isinstance(match, QftMatch)
    assert (match.start, match.end) == (0, 14)
    assert match.wires == (3, 2, 1, 0)
    assert match.cbits == (0, 1, 2, 3)
    assert match.n_wires == 4


def test_missing_controlled_phase_is_named() -> None:
    # Instruction 2 is ControlledPhase(3, 1, m=3).
    mismatch = _mismatch(_without(build_coherent_qft(3), 2))

    assert mismatch.reason == "missing ControlledPhase on wire 3 with wire 1 (m=3)"
    assert (mismatch.wire, mismatch.m) == (3, 3)


def test_wrong_ladder_label_is_reported() -> None:
    circuit = build_coherent_qft(3).replace_span(1, 2, (ControlledPhase(qubit_a=3, qubit_b=2, m=3),))
    mismatch = _mismatch(circuit)

    assert "has m=3, expected m=2" in mismatch.reason
    assert mismatch.index == 1


def test_prefix_gates_stay_outside_the_match() -> None:
    circuit = _build_prefixed_qft(3)
    match = detect_terminal_qft(circuit)

    assert isinstance(match, QftMatch)
    assert (match.start, match.end) == (7, 21)
    assert match.wires == (3, 2, 1, 0)


def test_detects_permuted_wires() -> None:
    wires = [1, 3, 0, 2]
    instructions = coherent_qft_block(wires) + [Measure(qubit=wire, cbit=k) for k, wire in enumerate(wires)]
    match = detect_terminal_qft(_build_circuit(4, instructions))

    assert isinstance(match, QftMatch)
    assert match.wires == tuple(wires)
    assert match.cbits == (0, 1, 2, 3)


def test_detects_commuted_diagonal_gates_and_swapped_operands() -> None:
    instructions = [
        OneBitSplit(target=2),
        ControlledPhase(qubit_a=1, qubit_b=2, m=2),
        OneBitSplit(target=1),
        ControlledPhase(qubit_a=0, qubit_b=2, m=3),
        ControlledPhase(qubit_a=1, qubit_b=0, m=2),
        OneBitSplit(target=0),
    ] + [Measure(qubit=2 - k, cbit=k) for k in range(3)]

    match = detect_terminal_qft(_build_circuit(3, instructions))
    assert isinstance(match, QftMatch)
    assert match.wires == (2, 1, 0)


def test_structural_mismatches() -> None:
    no_measure = _build_circuit(2, build_coherent_qft(1).instructions[:3])
    assert _mismatch(no_measure).reason == "circuit does not end with measurements"

    phased_only = _build_circuit(1, [OneBitSplit(target=0, phase=DyadicPhase.of(1, 2)), Measure(qubit=0, cbit=0)])
    assert _mismatch(phased_only).reason == "measured wire 0 has no zero-phase OneBitSplit"

    extra_split = build_coherent_qft(3).replace_span(4, 4, (OneBitSplit(target=3, phase=DyadicPhase.of(1, 2)),))
    mismatch = _mismatch(extra_split)
    assert mismatch.reason == "instruction 4 (split) acts on wire 3 after its split"

    coherent = build_coherent_qft(3)
    interleaved = Circuit(
        n_qubits=5,
        n_cbits=4,
        instructions=coherent.instructions[:5] + (OneBitSplit(target=4),) + coherent.instructions[5:],
    )
    mismatch = _mismatch(interleaved)
    assert mismatch.reason == "instruction 5 (split) interleaves with the QFT block"
    assert mismatch.index == 5


def test_rewrite_of_coherent_qft_is_the_semiclassical_circuit() -> None:
    rewritten, report = rewrite_semiclassical(build_coherent_qft(3))

    assert rewritten.instructions == build_semiclassical_qft(3).instructions
    assert (rewritten.n_qubits, rewritten.n_cbits) == (4, 4)
    assert report.matched
    assert report.two_bit_gates_removed == 6
    assert report.classically_controlled_gates_added == 4
    assert report.measurements == 4
    assert report.before.two_bit == 6
    assert report.after.two_bit == 0


def test_single_wire_rewrite_adds_one_box() -> None:
    rewritten, report = rewrite_semiclassical(build_coherent_qft(0))

    assert report.two_bit_gates_removed == 0
    assert report.classically_controlled_gates_added == 1
    state = StateVector.from_amplitudes([[0.6, 0.0], [0.0, 0.8]])
    assert equivalence_report(build_coherent_qft(0), rewritten, [state]).max_tv < 1e-15


def test_gate_elimination_count_law() -> None:
    for s in range(9):
        rewritten, report = rewrite_semiclassical(build_coherent_qft(s))
        assert report.two_bit_gates_removed == s * (s + 1) // 2
        assert report.classically_controlled_gates_added == s + 1
        assert report.after.two_bit == 0


def test_detection_on_rewritten_circuit_finds_nothing() -> None:
    for s in range(5):
        rewritten, _ = rewrite_semiclassical(build_coherent_qft(s))
        assert isinstance(detect_terminal_qft(rewritten), QftMismatch)
        with pytest.raises(PatternMismatchError, match="no terminal QFT"):
            rewrite_semiclassical(rewritten)


def test_rewrite_keeps_prefix_verbatim() -> None:
    circuit = _build_prefixed_qft(3)
    rewritten, _ = rewrite_semiclassical(circuit)

    assert rewritten.instructions[:7] == circuit.instructions[:7]
    assert rewritten.instructions[7:] == build_semiclassical_qft(3).instructions


def test_rewrite_without_match_raises_with_diagnostic() -> None:
    with pytest.raises(PatternMismatchError) as excinfo:
        rewrite_semiclassical(_without(build_coherent_qft(3), 2))

    assert excinfo.value.diagnostic == "missing ControlledPhase on wire 3 with wire 1 (m=3)"


def test_rewrite_is_sound_on_random_inputs() -> None:
    for s in range(6):
        circuit = _build_prefixed_qft(s)
        rewritten, _ = rewrite_semiclassical(circuit)
        inputs = standard_inputs("random", s + 1, seed=s, count=50)
        assert equivalence_report(circuit, rewritten, inputs).max_tv < 1e-10


def test_permuted_rewrite_is_sound() -> None:
    wires = [1, 3, 0, 2]
    circuit = _build_circuit(4, coherent_qft_block(wires) + [Measure(qubit=wire, cbit=k) for k, wire in enumerate(wires)])
    rewritten, report = rewrite_semiclassical(circuit)

    assert report.two_bit_gates_removed == 6
    equivalence = equivalence_report(circuit, rewritten, standard_inputs("default", 4, seed=3))
    assert equivalence.max_tv < 1e-10


def test_identical_circuits_have_zero_distance() -> None:
    circuit = build_coherent_qft(3)
    report = equivalence_report(circuit, circuit, standard_inputs("default", 4, seed=0))

    assert report.max_tv == 0.0
    assert len(report.distances) == 16 + 20


def test_both_transforms_agree_on_basis_inputs() -> None:
    report = equivalence_report(build_coherent_qft(3), build_semiclassical_qft(3), standard_inputs("basis", 4, seed=0))
    assert report.max_tv < 1e-12


def _corrupt(
    circuit: Circuit,
    index: int,
    constant_delta: DyadicPhase | None = None,
    term: int | None = None,
    coeff: DyadicPhase | None = None,
) -> Circuit:
    box = circuit.instructions[index]
    assert isinstance(box, ClassicallyControlledSplit)
    if constant_delta is not None:
        box = box.model_copy(update={"constant": box.constant + constant_delta})
    if term is not None:
        terms = list(box.terms)
        terms[term] = terms[term].model_copy(update={"coeff": coeff})
        box = box.model_copy(update={"terms": tuple(terms)})
    return circuit.replace_span(index, index + 1, (box,))


def test_corrupted_box_is_caught_by_fourier_inputs_only() -> None:
    """Basis inputs give uniform readouts whatever the box phases; Fourier inputs do not."""
    semiclassical = build_semiclassical_qft(3)
    coherent = build_coherent_qft(3)
    # Box 1 sits at instruction 2; its single term reads c_0 with coefficient 1/4.
    corrupted = _corrupt(semiclassical, 2, term=0, coeff=DyadicPhase.of(1, 1))

    fourier = equivalence_report(corrupted, coherent, [fourier_basis_state(1, 3)])
    assert fourier.max_tv == pytest.approx(0.5, abs=1e-12)

    basis = equivalence_report(corrupted, coherent, [StateVector.basis(4, 1)])
    assert basis.max_tv < 1e-12


def test_every_single_box_corruption_is_detected() -> None:
    semiclassical = build_semiclassical_qft(3)
    inputs = standard_inputs("fourier", 4, seed=0)
    deltas = [DyadicPhase.of(1, 5), DyadicPhase.of(31, 5), DyadicPhase.of(1, 3), DyadicPhase.of(1, 1)]
    box_indices = [index for index, instruction in enumerate(semiclassical.instructions) if isinstance(instruction, ClassicallyControlledSplit)]

    for index in box_indices:
        box = semiclassical.instructions[index]
        for delta in deltas:
            mutated = _corrupt(semiclassical, index, constant_delta=delta)
            assert equivalence_report(mutated, semiclassical, inputs).max_tv > 1e-4
            for term_index, term in enumerate(box.terms):
                mutated = _corrupt(semiclassical, index, term=term_index, coeff=term.coeff + delta)
                assert equivalence_report(mutated, semiclassical, inputs).max_tv > 1e-4


def test_equivalence_report_guards() -> None:
    with pytest.raises(RegisterMismatchError):
        equivalence_report(build_coherent_qft(2), build_coherent_qft(3), [StateVector.basis(3, 0)])
    with pytest.raises(InputStateError):
        equivalence_report(build_coherent_qft(2), build_semiclassical_qft(2), [])


def test_standard_inputs() -> None:
    assert len(standard_inputs("basis", 3, seed=0)) == 8
    assert len(standard_inputs("random", 3, seed=0, count=5)) == 5
    assert len(standard_inputs("default", 3, seed=0)) == 8 + 20
    assert len(standard_inputs("fourier", 3, seed=0)) == 8

    first = standard_inputs("random", 3, seed=9, count=2)
    second = standard_inputs("random", 3, seed=9, count=2)
    assert all(a.allclose(b, atol=0.0) for a, b in zip(first, second))
    assert all(np.isclose(state.norm(), 1.0) for state in first)

    with pytest.raises(InputStateError):
        standard_inputs("gaussian", 3, seed=0)
