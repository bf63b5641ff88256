"""Dense statevector simulation with mid-circuit measurement and classical feedforward.

Basis index ``b`` stores qubit ``j`` in bit ``j`` of ``b`` (little-endian), so the
basis state ``|a>`` is the amplitude vector with a single 1 at index ``a``.

Two execution modes share one core (``_advance``):

- ``run_trajectory`` follows a single measurement history drawn from a seeded
  generator, as one physical run would.
- ``run_exact`` enumerates both outcomes at every measurement and accumulates
  path probabilities per readout integer.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from math import sqrt

import numpy as np

from app.core.config import settings
from app.core.errors import InputStateError, SimulationError
from app.schemas.circuit import (
    Circuit,
    ClassicallyControlledSplit,
    ControlledPhase,
    Measure,
    OneBitSplit,
)
from app.schemas.phase import DyadicPhase
from app.services.circuit_service import ensure_valid

logger = logging.getLogger(__name__)

_SQRT_HALF = 1 / sqrt(2)


@dataclass(frozen=True, eq=False)
class StateVector:
    """``2**n_qubits`` complex amplitudes; the array is read-only."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amplitudes = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        size = amplitudes.size
        if size == 0 or size & (size - 1):
            raise InputStateError(f"state length {size} is not a power of two")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @classmethod
    def basis(cls, n_qubits: int, a: int) -> StateVector:
        """The computational basis state ``|a>`` on ``n_qubits`` qubits."""
        if not 0 <= a < (1 << n_qubits):
            raise InputStateError(f"basis index {a} outside 0..{(1 << n_qubits) - 1}")
        amplitudes = np.zeros(1 << n_qubits, dtype=np.complex128)
        amplitudes[a] = 1.0
        return cls(amplitudes)

    @classmethod
    def from_amplitudes(cls, values: Iterable[complex | Sequence[float]]) -> StateVector:
        """Build a state from complex numbers or ``[re, im]`` pairs; must be normalized."""
        parsed = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v) for v in values]
        state = cls(np.asarray(parsed, dtype=np.complex128))
        norm_sq = state.norm() ** 2
        if abs(norm_sq - 1.0) > settings.norm_tolerance:
            raise InputStateError(f"amplitudes are not normalized (norm² = {norm_sq:.15g})")
        return state

    @classmethod
    def random(cls, n_qubits: int, rng: np.random.Generator) -> StateVector:
        """Haar-like random state from normalized complex Gaussians."""
        raw = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
        return cls(raw / np.linalg.norm(raw))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def allclose(self, other: StateVector, atol: float = 1e-12) -> bool:
        return self.amplitudes.shape == other.amplitudes.shape and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0.0, atol=atol)
        )


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Probability of every readout integer ``c = Σ c_j 2**j``."""

    n_cbits: int
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        probabilities = np.array(self.probabilities, dtype=np.float64).reshape(-1)
        if probabilities.size != 1 << self.n_cbits:
            raise ValueError(f"expected {1 << self.n_cbits} probabilities, got {probabilities.size}")
        probabilities.setflags(write=False)
        object.__setattr__(self, "probabilities", probabilities)

    def __getitem__(self, c: int) -> float:
        return float(self.probabilities[c])

    def total_variation(self, other: OutcomeDistribution) -> float:
        return total_variation(self, other)

    def support(self, threshold: float = 1e-12) -> list[int]:
        return [int(c) for c in np.flatnonzero(self.probabilities > threshold)]

    def as_dict(self, threshold: float = 0.0) -> dict[int, float]:
        """Readout integer -> probability for entries above ``threshold``."""
        return {int(c): float(p) for c, p in enumerate(self.probabilities) if p > threshold}


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One run: classical bits (unwritten bits read 0), collapsed state, path probability."""

    readout: tuple[int, ...]
    final_state: StateVector
    probability_of_path: float = field(default=1.0)

    @property
    def readout_integer(self) -> int:
        return sum(bit << index for index, bit in enumerate(self.readout))


def total_variation(p: OutcomeDistribution, q: OutcomeDistribution) -> float:
    """Return ``½ Σ_c |p(c) − q(c)|``."""
    if p.n_cbits != q.n_cbits:
        raise ValueError(f"distributions over {p.n_cbits} and {q.n_cbits} classical bits")
    return 0.5 * float(np.abs(p.probabilities - q.probabilities).sum())


def _check_qubit(qubit: int, n_qubits: int) -> None:
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit {qubit} outside register of {n_qubits}")


@lru_cache(maxsize=256)
def _bit_mask(n_qubits: int, qubit: int) -> np.ndarray:
    mask = ((np.arange(1 << n_qubits) >> qubit) & 1).astype(bool)
    mask.setflags(write=False)
    return mask


def apply_one_bit_split(state: StateVector, target: int, phi: DyadicPhase) -> StateVector:
    """|0> -> (|0>+|1>)/√2, |1> -> e^{2πiφ}(|0>−|1>)/√2 on ``target``."""
    _check_qubit(target, state.n_qubits)
    view = state.amplitudes.reshape(-1, 2, 1 << target)
    low = view[:, 0, :]
    high = view[:, 1, :] * phi.to_complex()
    out = np.empty_like(view)
    out[:, 0, :] = (low + high) * _SQRT_HALF
    out[:, 1, :] = (low - high) * _SQRT_HALF
    return StateVector(out.reshape(-1))


def apply_controlled_phase(state: StateVector, qubit_a: int, qubit_b: int, m: int) -> StateVector:
    """Multiply every amplitude with both qubits set by ``exp(2πi / 2**m)``."""
    _check_qubit(qubit_a, state.n_qubits)
    _check_qubit(qubit_b, state.n_qubits)
    if qubit_a == qubit_b:
        raise ValueError("controlled phase operands must be distinct qubits")
    if m < 1:
        raise ValueError("m must be ≥ 1")
    both = _bit_mask(state.n_qubits, qubit_a) & _bit_mask(state.n_qubits, qubit_b)
    out = state.amplitudes.copy()
    out[both] *= DyadicPhase.inverse_power_of_two(m).to_complex()
    return StateVector(out)


def _probability_of_one(state: StateVector, target: int) -> float:
    p1 = float(np.sum(np.abs(state.amplitudes[_bit_mask(state.n_qubits, target)]) ** 2))
    if p1 < -settings.norm_tolerance or p1 > 1 + settings.norm_tolerance:
        raise SimulationError(f"p(1) = {p1!r} on qubit {target}; input state is not normalized")
    return min(max(p1, 0.0), 1.0)


def _collapse(state: StateVector, target: int, outcome: int) -> tuple[StateVector, float]:
    keep = _bit_mask(state.n_qubits, target)
    if not outcome:
        keep = ~keep
    out = np.where(keep, state.amplitudes, 0.0)
    branch_probability = float(np.sum(np.abs(out) ** 2))
    if branch_probability == 0.0:
        raise SimulationError(f"outcome {outcome} on qubit {target} is impossible")
    return StateVector(out / sqrt(branch_probability)), branch_probability


def measure(state: StateVector, target: int, u: float) -> tuple[int, StateVector, float]:
    """Measure ``target``: outcome 1 iff ``u < p(1)``; returns (bit, collapsed state, branch probability)."""
    _check_qubit(target, state.n_qubits)
    if not 0.0 <= u < 1.0:
        raise ValueError(f"random draw must lie in [0, 1), got {u!r}")
    outcome = 1 if u < _probability_of_one(state, target) else 0
    collapsed, branch_probability = _collapse(state, target, outcome)
    if branch_probability < settings.prune_threshold:
        raise SimulationError(f"outcome {outcome} on qubit {target} has probability {branch_probability:.3g}")
    return outcome, collapsed, branch_probability


def _check_input(circuit: Circuit, state: StateVector) -> None:
    ensure_valid(circuit)
    if state.n_qubits != circuit.n_qubits:
        raise InputStateError(f"input has {state.n_qubits} qubits, circuit expects {circuit.n_qubits}")
    norm_sq = state.norm() ** 2
    if abs(norm_sq - 1.0) > settings.norm_tolerance:
        raise InputStateError(f"input state is not normalized (norm² = {norm_sq:.15g})")


def _advance(circuit: Circuit, start: int, state: StateVector, cbits: dict[int, int]) -> tuple[StateVector, int]:
    """Apply unitary instructions from ``start`` up to the next Measure (or the end)."""
    instructions = circuit.instructions
    index = start
    while index < len(instructions):
        instruction = instructions[index]
        if isinstance(instruction, Measure):
            break
        if isinstance(instruction, OneBitSplit):
            state = apply_one_bit_split(state, instruction.target, instruction.phase)
        elif isinstance(instruction, ControlledPhase):
            state = apply_controlled_phase(state, instruction.qubit_a, instruction.qubit_b, instruction.m)
        elif isinstance(instruction, ClassicallyControlledSplit):
            phase = instruction.evaluate(cbits)
            logger.debug("Instruction %d: feedforward phase %s on qubit %d", index, phase, instruction.target)
            state = apply_one_bit_split(state, instruction.target, phase)
        index += 1
    return state, index


def _readout(n_cbits: int, cbits: dict[int, int]) -> tuple[int, ...]:
    return tuple(cbits.get(index, 0) for index in range(n_cbits))


def _run_with_rng(circuit: Circuit, state: StateVector, rng: np.random.Generator) -> Trajectory:
    cbits: dict[int, int] = {}
    path_probability = 1.0
    index = 0
    while True:
        state, index = _advance(circuit, index, state, cbits)
        if index == len(circuit.instructions):
            break
        instruction = circuit.instructions[index]
        outcome, state, branch_probability = measure(state, instruction.qubit, float(rng.random()))
        cbits[instruction.cbit] = outcome
        path_probability *= branch_probability
        index += 1
    return Trajectory(readout=_readout(circuit.n_cbits, cbits), final_state=state, probability_of_path=path_probability)


def run_trajectory(circuit: Circuit, initial: StateVector, seed: int) -> Trajectory:
    """Execute ``circuit`` once, drawing measurement outcomes from ``default_rng(seed)``."""
    _check_input(circuit, initial)
    return _run_with_rng(circuit, initial, np.random.default_rng(seed))


def sample_counts(circuit: Circuit, initial: StateVector, shots: int, seed: int) -> np.ndarray:
    """Run ``shots`` trajectories from one seeded generator; counts per readout integer."""
    if shots < 1:
        raise InputStateError("shots must be positive")
    _check_input(circuit, initial)
    rng = np.random.default_rng(seed)
    counts = np.zeros(1 << circuit.n_cbits, dtype=np.int64)
    for _ in range(shots):
        counts[_run_with_rng(circuit, initial, rng).readout_integer] += 1
    logger.info("Sampled %d trajectories over %d instructions", shots, len(circuit.instructions))
    return counts


def run_exact(circuit: Circuit, initial: StateVector) -> OutcomeDistribution:
    """Exact readout distribution by enumerating both branches of every measurement."""
    _check_input(circuit, initial)
    probabilities = np.zeros(1 << circuit.n_cbits, dtype=np.float64)
    pruned = 0.0
    leaves = 0

    # Depth-first with the outcome-0 branch first, so accumulation order is fixed.
    stack: list[tuple[int, StateVector, dict[int, int], float]] = [(0, initial, {}, 1.0)]
    while stack:
        start, state, cbits, path_probability = stack.pop()
        state, index = _advance(circuit, start, state, cbits)
        if index == len(circuit.instructions):
            readout = _readout(circuit.n_cbits, cbits)
            probabilities[sum(bit << j for j, bit in enumerate(readout))] += path_probability
            leaves += 1
            continue

        instruction = circuit.instructions[index]
        ones = _bit_mask(state.n_qubits, instruction.qubit)
        weights = np.abs(state.amplitudes) ** 2
        branches = []
        for outcome, p_branch in ((0, float(weights[~ones].sum())), (1, float(weights[ones].sum()))):
            if p_branch < settings.prune_threshold:
                pruned += path_probability * p_branch
                logger.debug("Instruction %d: pruned outcome %d (p = %.3g)", index, outcome, p_branch)
                continue
            collapsed, branch_probability = _collapse(state, instruction.qubit, outcome)
            branches.append((index + 1, collapsed, {**cbits, instruction.cbit: outcome}, path_probability * branch_probability))
        stack.extend(reversed(branches))

    if pruned > 1e-12:
        logger.warning("Pruned %.3g probability mass below the branch threshold", pruned)
    logger.debug("Exact run: %d leaves, total probability %.17g", leaves, probabilities.sum())
    return OutcomeDistribution(n_cbits=circuit.n_cbits, probabilities=probabilities)
