"""Request and response bodies for the HTTP API."""

from typing import Literal

from pydantic import BaseModel, Field, model_validator

from app.core.config import settings
from app.schemas.circuit import Circuit, GateCounts


class BuildRequest(BaseModel):
    kind: Literal["coherent", "semiclassical"]
    s: int = Field(ge=0, le=settings.max_s)


class BuildResponse(BaseModel):
    circuit: Circuit
    counts: GateCounts


class SimulateRequest(BaseModel):
    circuit: Circuit
    input_basis: int | None = Field(default=None, ge=0)
    input_amps: list[tuple[float, float]] | None = None
    exact: bool = True
    shots: int | None = Field(default=None, ge=1)
    seed: int = settings.default_seed

    @model_validator(mode="after")
    def _one_input_one_mode(self) -> "SimulateRequest":
        if self.input_basis is not None and self.input_amps is not None:
            raise ValueError("give input_basis or input_amps, not both")
        if not self.exact and self.shots is None:
            raise ValueError("sampled mode needs shots")
        return self


class SimulateResponse(BaseModel):
    distribution: dict[str, float] | None = None
    counts: dict[str, int] | None = None


class RewriteRequest(BaseModel):
    circuit: Circuit


class CompareRequest(BaseModel):
    a: Circuit
    b: Circuit
    inputs: Literal["basis", "random", "fourier", "default"] = "default"
    seed: int = settings.default_seed


class PeriodResponse(BaseModel):
    q: int
    distribution: dict[str, float]
    peaks: list[int]
