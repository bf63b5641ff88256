"""Circuit build, simulation, rewrite and comparison endpoints."""

from fastapi import APIRouter, Query

from app.core.config import settings
from app.schemas.api import (
    BuildRequest,
    BuildResponse,
    CompareRequest,
    PeriodResponse,
    RewriteRequest,
    SimulateRequest,
    SimulateResponse,
)
from app.services.circuit_service import ensure_valid, gate_counts
from app.services.qft_service import build_coherent_qft, build_semiclassical_qft, period_peaks, periodic_state
from app.services.report_rendering import counts_map, distribution_map
from app.services.rewrite_service import EquivalenceReport, RewriteReport, equivalence_report, rewrite_semiclassical, standard_inputs
from app.services.statevector import StateVector, run_exact, sample_counts

router: APIRouter = APIRouter()


class RewriteResponse(BuildResponse):
    report: RewriteReport


@router.post("/circuits/build", response_model=BuildResponse)
def build_circuit(payload: BuildRequest) -> BuildResponse:
    builder = build_coherent_qft if payload.kind == "coherent" else build_semiclassical_qft
    circuit = builder(payload.s)
    return BuildResponse(circuit=circuit, counts=gate_counts(circuit))


@router.post("/circuits/simulate", response_model=SimulateResponse)
def simulate_circuit(payload: SimulateRequest) -> SimulateResponse:
    ensure_valid(payload.circuit)
    if payload.input_amps is not None:
        state = StateVector.from_amplitudes(payload.input_amps)
    else:
        state = StateVector.basis(payload.circuit.n_qubits, payload.input_basis or 0)

    if payload.exact:
        return SimulateResponse(distribution=distribution_map(run_exact(payload.circuit, state)))
    counts = sample_counts(payload.circuit, state, payload.shots or 1, payload.seed)
    return SimulateResponse(counts=counts_map(counts))


@router.post("/circuits/rewrite", response_model=RewriteResponse)
def rewrite_circuit(payload: RewriteRequest) -> RewriteResponse:
    rewritten, report = rewrite_semiclassical(payload.circuit)
    return RewriteResponse(circuit=rewritten, counts=gate_counts(rewritten), report=report)


@router.post("/circuits/compare", response_model=EquivalenceReport)
def compare_circuits(payload: CompareRequest) -> EquivalenceReport:
    ensure_valid(payload.a)
    ensure_valid(payload.b)
    states = standard_inputs(payload.inputs, payload.a.n_qubits, payload.seed)
    return equivalence_report(payload.a, payload.b, states)


@router.get("/demo/period", response_model=PeriodResponse)
def demo_period(
    s: int = Query(ge=0, le=settings.max_s),
    r: int = Query(ge=1),
    offset: int = Query(default=0, ge=0),
) -> PeriodResponse:
    distribution = run_exact(build_semiclassical_qft(s), periodic_state(s, r, offset))
    return PeriodResponse(q=1 << (s + 1), distribution=distribution_map(distribution), peaks=period_peaks(s, r))
