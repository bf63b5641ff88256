"""Exact dyadic phases measured in turns."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

# e^{2πi·j/4} for j = 0..3, kept exact so Hadamard-like gates stay real.
_QUARTER_TURNS: tuple[complex, ...] = (1 + 0j, 1j, -1 + 0j, -1j)

# Finer phases than 2**-1074 turns are indistinguishable from 0 in double precision.
MAX_LOG2_DENOMINATOR = 1074


def _canonical(numerator: int, log2_denominator: int) -> tuple[int, int]:
    numerator %= 1 << log2_denominator
    if numerator == 0:
        return 0, 0
    trailing_zeros = (numerator & -numerator).bit_length() - 1
    shift = min(trailing_zeros, log2_denominator)
    return numerator >> shift, log2_denominator - shift


class DyadicPhase(BaseModel):
    """Phase ``numerator / 2**log2_denominator`` turns, reduced modulo 1.

    The physical angle is ``2π`` times the value. Instances are always canonical:
    the numerator is odd (or the phase is the zero ``0/2**0``) and lies below the
    denominator. Any integer numerator is accepted and reduced on construction.
    """

    numerator: int = Field(default=0, alias="num", strict=True)
    log2_denominator: int = Field(default=0, alias="log2den", ge=0, le=MAX_LOG2_DENOMINATOR, strict=True)

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    @model_validator(mode="before")
    @classmethod
    def _reduce(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        num_key = "num" if "num" in data else "numerator"
        den_key = "log2den" if "log2den" in data else "log2_denominator"
        numerator = data.get(num_key, 0)
        log2_denominator = data.get(den_key, 0)
        if not _is_int(numerator) or not _is_int(log2_denominator) or not 0 <= log2_denominator <= MAX_LOG2_DENOMINATOR:
            return data
        reduced_num, reduced_den = _canonical(numerator, log2_denominator)
        return {**data, num_key: reduced_num, den_key: reduced_den}

    @classmethod
    def of(cls, numerator: int, log2_denominator: int = 0) -> DyadicPhase:
        """Build the canonical phase ``numerator / 2**log2_denominator`` mod 1."""
        return cls(numerator=numerator, log2_denominator=log2_denominator)

    @classmethod
    def zero(cls) -> DyadicPhase:
        return cls(numerator=0, log2_denominator=0)

    @classmethod
    def inverse_power_of_two(cls, m: int) -> DyadicPhase:
        """The phase ``2**-m`` carried by a controlled-phase gate labelled ``m``."""
        if m < 0:
            raise ValueError("m must be non-negative")
        return cls.of(1, m)

    @classmethod
    def from_fraction(cls, value: Fraction) -> DyadicPhase:
        denominator = value.denominator
        if denominator & (denominator - 1):
            raise ValueError(f"{value} is not dyadic")
        return cls.of(value.numerator, denominator.bit_length() - 1)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.log2_denominator)

    def turns(self) -> float:
        return self.numerator / (1 << self.log2_denominator)

    def to_complex(self) -> complex:
        """Return ``exp(2πi·phase)``; quarter turns are exact."""
        if self.log2_denominator <= 2:
            return _QUARTER_TURNS[self.numerator << (2 - self.log2_denominator)]
        return cmath.exp(2j * math.pi * self.turns())

    def is_zero(self) -> bool:
        return self.numerator == 0

    def __add__(self, other: DyadicPhase) -> DyadicPhase:
        return phase_add(self, other)

    def __str__(self) -> str:
        if self.numerator == 0:
            return "0"
        return f"{self.numerator}/{1 << self.log2_denominator}"


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def phase_add(a: DyadicPhase, b: DyadicPhase) -> DyadicPhase:
    """Return ``(a + b) mod 1`` exactly."""
    log2_denominator = max(a.log2_denominator, b.log2_denominator)
    numerator = (a.numerator << (log2_denominator - a.log2_denominator)) + (
        b.numerator << (log2_denominator - b.log2_denominator)
    )
    return DyadicPhase.of(numerator, log2_denominator)


def phase_halve_plus(phi: DyadicPhase, c: int) -> DyadicPhase:
    """Return ``(phi / 2 + c / 4) mod 1``, the phase handed to the next box."""
    if c not in (0, 1):
        raise ValueError(f"c must be a bit, got {c!r}")
    log2_denominator = max(phi.log2_denominator + 1, 2)
    numerator = (phi.numerator << (log2_denominator - phi.log2_denominator - 1)) + (
        c << (log2_denominator - 2)
    )
    return DyadicPhase.of(numerator, log2_denominator)
