"""Aligned text tables, histograms and JSON maps for distributions and reports."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from typing import Any

import numpy as np

from app.schemas.circuit import GateCounts
from app.services.rewrite_service import EquivalenceReport, RewriteReport
from app.services.statevector import OutcomeDistribution

BAR_WIDTH = 40
DISPLAY_THRESHOLD = 1e-15


def _table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    rows = [list(row) for row in rows]
    widths = [max(len(str(cell)) for cell in column) for column in zip(header, *rows)] if rows else [len(h) for h in header]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * width for width in widths))
    for row in rows:
        lines.append("  ".join(cell.rjust(width) for cell, width in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _bar(fraction: float) -> str:
    return "#" * int(round(fraction * BAR_WIDTH))


def _bits(c: int, n_cbits: int) -> str:
    return format(c, f"0{n_cbits}b") if n_cbits else "-"


def distribution_histogram(distribution: OutcomeDistribution, peaks: Iterable[int] = ()) -> str:
    """Probability per readout ``c`` (bits printed c_{n-1}..c_0), marking expected peaks."""
    peak_set = set(peaks)
    rows = []
    for c, probability in enumerate(distribution.probabilities):
        if probability <= DISPLAY_THRESHOLD and c not in peak_set:
            continue
        marker = "<- peak" if c in peak_set else ""
        rows.append([str(c), _bits(c, distribution.n_cbits), f"{probability:.12f}", _bar(probability), marker])
    return _table(["c", "bits", "probability", "histogram", ""], rows)


def counts_histogram(counts: np.ndarray, n_cbits: int) -> str:
    """Counts per readout ``c`` in sampled mode."""
    shots = int(counts.sum())
    rows = [
        [str(c), _bits(c, n_cbits), str(int(count)), _bar(count / shots)]
        for c, count in enumerate(counts)
        if count
    ]
    return _table(["c", "bits", "count", "histogram"], rows)


def distribution_map(distribution: OutcomeDistribution) -> dict[str, float]:
    return {str(c): p for c, p in distribution.as_dict(DISPLAY_THRESHOLD).items()}


def counts_map(counts: np.ndarray) -> dict[str, int]:
    return {str(c): int(count) for c, count in enumerate(counts) if count}


def gate_counts_line(counts: GateCounts) -> str:
    return (
        f"one_bit={counts.one_bit} two_bit={counts.two_bit} "
        f"measurements={counts.measurements} classically_controlled={counts.classically_controlled}"
    )


def rewrite_table(report: RewriteReport) -> str:
    fields: list[tuple[str, Any, Any]] = [
        ("one_bit", report.before.one_bit, report.after.one_bit),
        ("two_bit", report.before.two_bit, report.after.two_bit),
        ("classically_controlled", report.before.classically_controlled, report.after.classically_controlled),
        ("measurements", report.before.measurements, report.after.measurements),
    ]
    table = _table(["gate kind", "before", "after"], [[name, str(b), str(a)] for name, b, a in fields])
    return (
        f"{table}\n"
        f"two-bit gates removed: {report.two_bit_gates_removed}\n"
        f"classically controlled gates added: {report.classically_controlled_gates_added}"
    )


def equivalence_table(report: EquivalenceReport, labels: Sequence[str]) -> str:
    rows = [[str(index), label, f"{distance:.3e}"] for index, (label, distance) in enumerate(zip(labels, report.distances))]
    table = _table(["#", "input", "TV distance"], rows)
    return f"{table}\nmax TV {report.max_tv:.3e} at input {report.worst_input} ({labels[report.worst_input]})"
