"""Command-line front end tests."""

import json
from pathlib import Path

import pytest

from app.cli import main
from app.schemas.circuit import ControlledPhase
from app.services.circuit_service import deserialize, serialize
from app.services.qft_service import build_coherent_qft


def _build(tmp_path: Path, kind: str, s: int) -> Path:
    out = tmp_path / f"{kind}-{s}.json"
    assert main(["build", "--kind", kind, "--s", str(s), "--out", str(out)]) == 0
    return out


def test_build_writes_circuit_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    out = _build(tmp_path, "coherent", 3)

    circuit = deserialize(out.read_text(encoding="utf-8"))
    assert len(circuit.instructions) == 14
    assert "14 instructions" in capsys.readouterr().out


def test_compare_fig_circuits_on_basis_inputs(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    coherent = _build(tmp_path, "coherent", 3)
    semiclassical = _build(tmp_path, "semiclassical", 3)
    capsys.readouterr()

    status = main(["compare", "--a", str(coherent), "--b", str(semiclassical), "--inputs", "basis", "--json"])
    payload = json.loads(capsys.readouterr().out)

    assert status == 0
    assert len(payload["distances"]) == 16
    assert payload["max_tv"] < 1e-12
    assert payload["inputs"][5] == "|5>"


def test_compare_text_table_lists_every_input(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    coherent = _build(tmp_path, "coherent", 1)
    semiclassical = _build(tmp_path, "semiclassical", 1)
    capsys.readouterr()

    assert main(["compare", "--a", str(coherent), "--b", str(semiclassical), "--inputs", "fourier"]) == 0
    out = capsys.readouterr().out
    assert "F^-1|3>" in out
    assert "max TV" in out


def test_compare_reads_input_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    coherent = _build(tmp_path, "coherent", 0)
    semiclassical = _build(tmp_path, "semiclassical", 0)
    inputs = tmp_path / "inputs.json"
    inputs.write_text(json.dumps([[[1.0, 0.0], [0.0, 0.0]], [[0.6, 0.0], [0.0, 0.8]]]), encoding="utf-8")
    capsys.readouterr()

    assert main(["compare", "--a", str(coherent), "--b", str(semiclassical), "--inputs", f"file:{inputs}", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["inputs"] == ["inputs.json[0]", "inputs.json[1]"]


def test_rewrite_writes_circuit_and_report(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    coherent = _build(tmp_path, "coherent", 3)
    out = tmp_path / "rewritten.json"
    report_path = tmp_path / "report.json"
    capsys.readouterr()

    status = main(["rewrite", "--in", str(coherent), "--out", str(out), "--report", str(report_path)])

    assert status == 0
    assert "two-bit gates removed: 6" in capsys.readouterr().out
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["classically_controlled_gates_added"] == 4
    assert deserialize(out.read_text(encoding="utf-8")).n_qubits == 4


def test_rewrite_without_terminal_qft_exits_2(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    broken = build_coherent_qft(3)
    broken = broken.replace_span(1, 2, (ControlledPhase(qubit_a=3, qubit_b=2, m=5),))
    source = tmp_path / "not-a-qft.json"
    source.write_text(serialize(broken), encoding="utf-8")

    status = main(["rewrite", "--in", str(source), "--out", str(tmp_path / "out.json")])
    captured = capsys.readouterr()

    assert status == 2
    assert captured.err.startswith("error: no terminal QFT:")
    assert "expected m=2" in captured.err
    assert not (tmp_path / "out.json").exists()


def test_simulate_exact_json(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    circuit = _build(tmp_path, "semiclassical", 1)
    capsys.readouterr()

    assert main(["simulate", "--in", str(circuit), "--exact", "--input-basis", "2", "--json"]) == 0
    distribution = json.loads(capsys.readouterr().out)
    assert sorted(distribution) == ["0", "1", "2", "3"]
    assert all(p == pytest.approx(0.25) for p in distribution.values())


def test_simulate_input_amplitudes_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    circuit = _build(tmp_path, "semiclassical", 0)
    amps = tmp_path / "amps.json"
    amps.write_text(json.dumps([[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]), encoding="utf-8")
    capsys.readouterr()

    assert main(["simulate", "--in", str(circuit), "--exact", "--input-amps", str(amps), "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"0": pytest.approx(1.0)}


def test_sampled_output_is_reproducible(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    circuit = _build(tmp_path, "semiclassical", 2)
    capsys.readouterr()
    argv = ["simulate", "--in", str(circuit), "--shots", "200", "--seed", "7"]

    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out

    assert first == second
    assert first.startswith("200 shots, seed 7")


def test_demo_period_json(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["demo-period", "--s", "3", "--r", "4", "--offset", "1", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)

    assert payload["peaks"] == [0, 4, 8, 12]
    assert sorted(payload["distribution"], key=int) == ["0", "4", "8", "12"]


def test_demo_period_text_marks_peaks(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["demo-period", "--s", "2", "--r", "2"]) == 0
    out = capsys.readouterr().out

    assert "q=8 r=2" in out
    assert out.count("<- peak") == 2


def test_usage_errors_exit_1(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["build", "--kind", "coherent", "--s", "15", "--out", str(tmp_path / "x.json")]) == 1
    assert main(["simulate", "--in", str(tmp_path / "missing.json"), "--exact"]) == 1
    assert main(["frobnicate"]) == 1
    assert main([]) == 1

    err = capsys.readouterr().err
    assert "cannot read" in err
    assert "Traceback" not in err


def test_malformed_circuit_file_exits_2(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    source = tmp_path / "bad.json"
    source.write_text('{"n_qubits": 1, "n_cbits": 1, "instructions": [{"kind": "measure", "qubit": 0}]}', encoding="utf-8")

    assert main(["simulate", "--in", str(source), "--exact"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: instructions.0")


def test_undecodable_files_exit_2(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    source = tmp_path / "binary.json"
    source.write_bytes(b'{"n_qubits": 1, "n_cbits": 0, "instructions": []}\xff\xfe')

    assert main(["simulate", "--in", str(source), "--exact"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: $: not valid UTF-8 at byte 49")
    assert "Traceback" not in err

    circuit = _build(tmp_path, "semiclassical", 0)
    amps = tmp_path / "amps.json"
    amps.write_bytes(b"[[1.0, 0.0], [0.0, 0.0]]\xff")
    capsys.readouterr()

    assert main(["simulate", "--in", str(circuit), "--exact", "--input-amps", str(amps)]) == 2
    assert "not valid UTF-8" in capsys.readouterr().err
    assert main(["compare", "--a", str(circuit), "--b", str(circuit), "--inputs", f"file:{amps}"]) == 2


def test_oversized_register_in_file_exits_2(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    source = tmp_path / "huge.json"
    source.write_text('{"n_qubits": 64, "n_cbits": 1, "instructions": []}', encoding="utf-8")

    assert main(["simulate", "--in", str(source), "--exact"]) == 2
    assert capsys.readouterr().err.startswith("error: n_qubits: 64 qubits exceed")


def test_demo_period_ranges_are_usage_errors(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["demo-period", "--s", "3", "--r", "4", "--offset", "-1"]) == 1
    assert main(["demo-period", "--s", "3", "--r", "4", "--offset", "4"]) == 1
    assert main(["demo-period", "--s", "2", "--r", "9"]) == 1

    err = capsys.readouterr().err
    assert "--offset must be in 0..3" in err
    assert "--r must be in 1..8" in err
