"""Circuit intermediate representation shared by builders, simulator and rewrite pass."""

from __future__ import annotations

from collections.abc import Mapping
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.schemas.phase import MAX_LOG2_DENOMINATOR, DyadicPhase, phase_add

_IR_CONFIG = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)


class OneBitSplit(BaseModel):
    """Phase shift on |1> followed by the Hadamard-like split; phase 0 is the plain split."""

    kind: Literal["split"] = "split"
    target: int = Field(ge=0, strict=True)
    phase: DyadicPhase = Field(default_factory=DyadicPhase.zero)

    model_config = _IR_CONFIG

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


class ControlledPhase(BaseModel):
    """Diagonal two-bit gate multiplying |11> by exp(2πi / 2**m); operands are unordered."""

    kind: Literal["cphase"] = "cphase"
    qubit_a: int = Field(ge=0, strict=True)
    qubit_b: int = Field(ge=0, strict=True)
    m: int = Field(le=MAX_LOG2_DENOMINATOR, strict=True)

    model_config = _IR_CONFIG

    @field_validator("m")
    @classmethod
    def _m_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("m must be ≥ 1")
        return value

    @model_validator(mode="after")
    def _distinct_operands(self) -> ControlledPhase:
        if self.qubit_a == self.qubit_b:
            raise ValueError("controlled phase operands must be distinct qubits")
        return self

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit_a, self.qubit_b)

    @property
    def phase(self) -> DyadicPhase:
        return DyadicPhase.inverse_power_of_two(self.m)

    def partner_of(self, qubit: int) -> int:
        return self.qubit_b if qubit == self.qubit_a else self.qubit_a


class Measure(BaseModel):
    """Computational-basis measurement of one qubit into one classical bit."""

    kind: Literal["measure"] = "measure"
    qubit: int = Field(ge=0, strict=True)
    cbit: int = Field(ge=0, strict=True)

    model_config = _IR_CONFIG

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)


class PhaseTerm(BaseModel):
    cbit: int = Field(ge=0, strict=True)
    coeff: DyadicPhase

    model_config = _IR_CONFIG


class ClassicallyControlledSplit(BaseModel):
    """OneBitSplit whose phase is ``constant + Σ bit·coeff`` over already-measured bits."""

    kind: Literal["ccsplit"] = "ccsplit"
    target: int = Field(ge=0, strict=True)
    constant: DyadicPhase = Field(default_factory=DyadicPhase.zero, alias="const")
    terms: tuple[PhaseTerm, ...] = ()

    model_config = _IR_CONFIG

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    @property
    def cbits(self) -> tuple[int, ...]:
        return tuple(term.cbit for term in self.terms)

    def evaluate(self, cbits: Mapping[int, int]) -> DyadicPhase:
        """Evaluate the phase-expression against written classical bits."""
        phase = self.constant
        for term in self.terms:
            if term.cbit not in cbits:
                raise ValueError(f"classical bit {term.cbit} has not been written")
            if cbits[term.cbit]:
                phase = phase_add(phase, term.coeff)
        return phase


Instruction = Annotated[
    Union[OneBitSplit, ControlledPhase, Measure, ClassicallyControlledSplit],
    Field(discriminator="kind"),
]


class Circuit(BaseModel):
    """Ordered instruction list over ``n_qubits`` qubits and ``n_cbits`` classical bits."""

    n_qubits: int = Field(ge=0, strict=True)
    n_cbits: int = Field(ge=0, strict=True)
    instructions: tuple[Instruction, ...] = ()

    model_config = _IR_CONFIG

    def replace_span(self, start: int, end: int, replacement: tuple[Instruction, ...]) -> Circuit:
        """Return a copy with ``instructions[start:end]`` swapped for ``replacement``."""
        instructions = self.instructions[:start] + tuple(replacement) + self.instructions[end:]
        return self.model_copy(update={"instructions": instructions})


class Violation(BaseModel):
    """One well-formedness problem; ``index`` is ``None`` for circuit-level problems."""

    index: int | None
    code: str
    message: str

    model_config = ConfigDict(frozen=True)


class GateCounts(BaseModel):
    one_bit: int = 0
    two_bit: int = 0
    measurements: int = 0
    classically_controlled: int = 0

    model_config = ConfigDict(frozen=True)

    @property
    def total(self) -> int:
        return self.one_bit + self.two_bit + self.measurements + self.classically_controlled
