"""Fourier-transform circuits, the reference transform, and test input states."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings
from app.core.errors import InputStateError
from app.schemas.circuit import (
    Circuit,
    ClassicallyControlledSplit,
    ControlledPhase,
    Instruction,
    Measure,
    OneBitSplit,
    PhaseTerm,
)
from app.schemas.phase import DyadicPhase, phase_add, phase_halve_plus
from app.services.statevector import StateVector

logger = logging.getLogger(__name__)


class QftLayout(BaseModel):
    """Wire convention for an ``(s+1)``-bit transform.

    Qubit ``j`` carries input bit ``a_j``; readout bit ``c_k`` is measured on
    qubit ``s - k`` (no swap gates, the bit reversal lives in the readout map).
    """

    s: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)

    @property
    def n_bits(self) -> int:
        return self.s + 1

    @property
    def q(self) -> int:
        return 1 << (self.s + 1)

    def wire_for_readout(self, k: int) -> int:
        return self.s - k

    @property
    def wires(self) -> list[int]:
        """Qubits in processing order (top wire first)."""
        return [self.wire_for_readout(k) for k in range(self.n_bits)]


def coherent_qft_block(wires: Sequence[int]) -> list[Instruction]:
    """Split-plus-ladder gates for ``wires`` listed top wire first, without measurements."""
    instructions: list[Instruction] = []
    for role, wire in enumerate(wires):
        instructions.append(OneBitSplit(target=wire))
        for distance, partner in enumerate(wires[role + 1 :], start=1):
            instructions.append(ControlledPhase(qubit_a=wire, qubit_b=partner, m=distance + 1))
    return instructions


def semiclassical_boxes(wires: Sequence[int], cbits: Sequence[int]) -> list[Instruction]:
    """Measure-and-feedforward boxes: box ``k`` splits ``wires[k]`` and measures into ``cbits[k]``.

    The phase handed from box to box is unrolled: box ``k`` receives
    ``Σ_{j<k} c_j / 2**(k+1-j)``, which is what iterating ``phase_halve_plus``
    from zero produces.
    """
    if len(wires) != len(cbits):
        raise ValueError("every wire needs exactly one classical bit")
    instructions: list[Instruction] = []
    for k, (wire, cbit) in enumerate(zip(wires, cbits)):
        terms = tuple(PhaseTerm(cbit=cbits[j], coeff=DyadicPhase.of(1, k + 1 - j)) for j in range(k))
        instructions.append(ClassicallyControlledSplit(target=wire, terms=terms))
        instructions.append(Measure(qubit=wire, cbit=cbit))
    return instructions


def _check_size(s: int) -> None:
    if s + 2 >= settings.max_qubits:
        logger.warning("s=%d needs %d qubits, close to the %d-qubit guard", s, s + 1, settings.max_qubits)


def build_coherent_qft(s: int) -> Circuit:
    """Coherent transform on ``s+1`` qubits followed by the bit-reversed readout."""
    _check_size(s)
    layout = QftLayout(s=s)
    instructions = coherent_qft_block(layout.wires)
    instructions.extend(Measure(qubit=layout.wire_for_readout(k), cbit=k) for k in range(layout.n_bits))
    logger.info("Built coherent QFT: s=%d, %d instructions", s, len(instructions))
    return Circuit(n_qubits=layout.n_bits, n_cbits=layout.n_bits, instructions=tuple(instructions))


def build_semiclassical_qft(s: int) -> Circuit:
    """Measurement-plus-feedforward transform; contains no two-qubit gates."""
    _check_size(s)
    layout = QftLayout(s=s)
    instructions = semiclassical_boxes(layout.wires, list(range(layout.n_bits)))
    logger.info("Built semiclassical QFT: s=%d, %d boxes", s, layout.n_bits)
    return Circuit(n_qubits=layout.n_bits, n_cbits=layout.n_bits, instructions=tuple(instructions))


def box_phases(readout_bits: Sequence[int]) -> list[DyadicPhase]:
    """Phase received by each box when earlier boxes read ``readout_bits``.

    Entry ``k`` depends on ``c_0..c_{k-1}``; the list has ``len(readout_bits) + 1`` entries.
    """
    phases = [DyadicPhase.zero()]
    for bit in readout_bits:
        phases.append(phase_halve_plus(phases[-1], bit))
    return phases


def _dft_matrix(q: int, sign: int = 1) -> np.ndarray:
    indices = np.arange(q)
    exponents = np.outer(indices, indices) % q
    return np.exp(sign * 2j * np.pi * exponents / q) / np.sqrt(q)


def dft_oracle(state: StateVector) -> StateVector:
    """Apply ``F|a> = q**-0.5 Σ_c exp(2πi·ac/q)|c>`` straight from the definition."""
    return StateVector(_dft_matrix(state.amplitudes.size) @ state.amplitudes)


def oracle_distribution(state: StateVector) -> np.ndarray:
    """``|<c|F|ψ>|**2`` indexed by readout integer ``c``."""
    return dft_oracle(state).probabilities()


def product_form_phases(a: int, s: int) -> list[DyadicPhase]:
    """``φ_j = Σ_{k=0}^{s-j} a_k 2**(j+k-s-1)`` for ``j = 0..s``."""
    layout = QftLayout(s=s)
    if not 0 <= a < layout.q:
        raise InputStateError(f"a={a} outside 0..{layout.q - 1}")
    phases: list[DyadicPhase] = []
    for j in range(layout.n_bits):
        phi = DyadicPhase.zero()
        for k in range(s - j + 1):
            if (a >> k) & 1:
                phi = phase_add(phi, DyadicPhase.of(1, s + 1 - j - k))
        phases.append(phi)
    return phases


def product_form_state(a: int, s: int) -> StateVector:
    """Tensor product of ``|p(φ_j)>`` over qubits ``j``; equals ``F|a>``."""
    amplitudes = np.ones(1, dtype=np.complex128)
    for phi in reversed(product_form_phases(a, s)):
        factor = np.array([1.0, phi.to_complex()], dtype=np.complex128) / np.sqrt(2)
        amplitudes = np.kron(amplitudes, factor)
    return StateVector(amplitudes)


def fourier_basis_state(c: int, s: int) -> StateVector:
    """``F⁻¹|c>``: the input whose ideal readout is exactly ``c``."""
    layout = QftLayout(s=s)
    if not 0 <= c < layout.q:
        raise InputStateError(f"c={c} outside 0..{layout.q - 1}")
    return StateVector(_dft_matrix(layout.q, sign=-1)[:, c])


def periodic_state(s: int, r: int, offset: int = 0) -> StateVector:
    """Equal superposition of ``|offset>, |offset+r>, ...`` below ``q``."""
    layout = QftLayout(s=s)
    if not 1 <= r <= layout.q:
        raise InputStateError(f"period r={r} outside 1..{layout.q}")
    if not 0 <= offset < r:
        raise InputStateError(f"offset={offset} outside 0..{r - 1}")
    support = np.arange(offset, layout.q, r)
    amplitudes = np.zeros(layout.q, dtype=np.complex128)
    amplitudes[support] = 1 / np.sqrt(support.size)
    return StateVector(amplitudes)


def period_peaks(s: int, r: int) -> list[int]:
    """Readouts where a period-``r`` input concentrates: ``k·q/r`` (rounded when ``r ∤ q``)."""
    q = QftLayout(s=s).q
    if not 1 <= r <= q:
        raise InputStateError(f"period r={r} outside 1..{q}")
    return sorted({round(k * q / r) % q for k in range(r)})


def accumulated_phase(circuit: Circuit, wire: int, a: int) -> DyadicPhase:
    """Phase of the ``|p(φ)>`` state ``wire`` carries just before its measurement, for input ``|a>``.

    Traverses the gate list symbolically: the wire's split turns ``|a_w>`` into
    ``|p(a_w/2)>``; each later controlled phase adds ``a_partner·2**-m`` while the
    partner is still a computational-basis control.
    """
    bits = {qubit: (a >> qubit) & 1 for qubit in range(circuit.n_qubits)}
    split_wires: set[int] = set()
    phase: DyadicPhase | None = None

    for index, instruction in enumerate(circuit.instructions):
        if isinstance(instruction, Measure) and instruction.qubit == wire:
            break
        if isinstance(instruction, (OneBitSplit, ClassicallyControlledSplit)):
            if instruction.target == wire:
                if phase is not None:
                    raise ValueError(f"wire {wire} is split twice (instruction {index})")
                phase = DyadicPhase.of(bits[wire], 1)
            split_wires.add(instruction.target)
        elif isinstance(instruction, ControlledPhase) and wire in instruction.qubits and phase is not None:
            partner = instruction.partner_of(wire)
            if partner in split_wires:
                raise ValueError(f"instruction {index}: partner {partner} is no longer a basis-state control")
            if bits[partner]:
                phase = phase_add(phase, instruction.phase)

    if phase is None:
        raise ValueError(f"wire {wire} is never split")
    return phase
