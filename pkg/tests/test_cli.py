import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohdistill.cli import main
from cohdistill.fileio import (
    FileFormatError,
    channel_document,
    dumps,
    parse_channel_file,
    parse_pure_states_file,
    parse_state_file,
    pure_states_document,
    state_document,
)
from cohdistill.states import maximally_coherent, random_density, validate_density

S2 = 1 / np.sqrt(2)


def write_state(path, m):
    path.write_text(dumps(state_document(np.asarray(m, dtype=complex))))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 6))
def test_state_round_trip_bit_exact(seed, d):
    m = random_density(d, d, seed).mat
    text = dumps(state_document(m))
    back = parse_state_file(text)
    assert back.tobytes() == m.tobytes()
    assert dumps(state_document(back)) == text


def test_channel_and_pure_round_trip():
    ks = [np.array([[1, 0], [0, 0]], dtype=complex), np.array([[0, 1j], [0, 0]])]
    back = parse_channel_file(dumps(channel_document(ks)))
    assert all(np.array_equal(a, b) for a, b in zip(ks, back))
    vs = [np.array([S2, S2]), np.array([S2, -S2])]
    assert all(np.array_equal(a, b) for a, b in zip(vs, parse_pure_states_file(dumps(pure_states_document(vs)))))


@pytest.mark.parametrize("text", [
    "{not json",
    '{"dim": 2}',
    '{"dim": 1, "matrix": [[1]]}',
    '{"dim": 1, "matrix": [[["1", 0]]]}',
    '{"kraus": []}',
])
def test_malformed_files_rejected(text):
    parser = parse_channel_file if "kraus" in text else parse_state_file
    with pytest.raises(FileFormatError):
        parser(text)


def test_analyze_exit_codes(tmp_path, capsys, mixed_qubit):
    a = write_state(tmp_path / "a.json", validate_density(np.outer([0.6, 0.8], [0.6, 0.8])).mat)
    code, rep = run(capsys, "analyze", a)
    assert code == 0 and rep["verdicts"]["sio"] and rep["kind"] == "analysis"
    assert rep["tolerance"] == {"rel_eps": 1e-9, "abs_floor": 1e-12}
    assert rep["input_digest"]["state"].startswith("sha256:")
    b = write_state(tmp_path / "b.json", mixed_qubit)
    code, rep = run(capsys, "analyze", b)
    assert code == 1 and not rep["verdicts"]["sio"]
    assert rep["distillable_coherence_bits"] == pytest.approx(0.188722, abs=1e-6)
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    code, rep = run(capsys, "analyze", str(bad))
    assert code == 2 and rep["kind"] == "error"
    notrace = write_state(tmp_path / "c.json", [[1, 0], [0, 0.5]])
    code, rep = run(capsys, "analyze", notrace)
    assert code == 2 and rep["error"] == "TraceNotOne"
    code, rep = run(capsys, "analyze", str(tmp_path / "missing.json"))
    assert code == 2


def test_analyze_reports_one_based_blocks(tmp_path, capsys):
    m = np.zeros((3, 3), dtype=complex)
    m[np.ix_([0, 2], [0, 2])] = 0.25
    m[1, 1] = 0.5
    code, rep = run(capsys, "analyze", write_state(tmp_path / "s.json", m))
    assert [b["indices"] for b in rep["blocks"]] == [[1, 3], [2]]
    assert rep["permutation"] == [1, 3, 2]
    assert rep["rank_one_pairs"] == [[1, 3]]


def test_witness_and_apply_round_trip(tmp_path, capsys):
    s = write_state(tmp_path / "phi3.json", maximally_coherent(3).projector())
    ch = tmp_path / "k.json"
    code, rep = run(capsys, "witness", s, "--output", str(ch))
    assert code == 0 and rep["probability"] == pytest.approx(2 / 3, abs=1e-10)
    assert rep["unscaled_probability"] == pytest.approx(1 / 3, abs=1e-10)
    assert all(rep["checks"].values())
    code, app = run(capsys, "apply", str(ch), s)
    assert code == 0
    assert abs(app["probability"] - rep["probability"]) <= 1e-10
    assert app["pure_coherent"] and app["channel"]["incoherent"] == [True]


def test_witness_on_block_state(tmp_path, capsys):
    m = np.zeros((3, 3), dtype=complex)
    m[:2, :2] = 0.25
    m[2, 2] = 0.5
    code, rep = run(capsys, "witness", write_state(tmp_path / "b.json", m))
    assert code == 0 and rep["source_block"] == [1, 2]


def test_witness_not_distillable_writes_nothing(tmp_path, capsys, mixed_qubit):
    ch = tmp_path / "k.json"
    code, rep = run(capsys, "witness", write_state(tmp_path / "m.json", mixed_qubit), "--output", str(ch))
    assert code == 1 and not rep["distillable"] and not ch.exists()


def test_apply_examples(tmp_path, capsys):
    rho = random_density(3, 2, 1).mat
    s = write_state(tmp_path / "s.json", rho)
    ident = tmp_path / "id.json"
    ident.write_text(dumps(channel_document([np.eye(3)])))
    code, rep = run(capsys, "apply", str(ident), s)
    assert code == 0 and rep["probability"] == pytest.approx(1)
    assert np.allclose(parse_state_file(dumps({"dim": 3, "matrix": rep["output_state"]})), rho)

    e12 = tmp_path / "e12.json"
    e12.write_text(dumps(channel_document([np.array([[0, 1], [0, 0]])])))
    code, rep = run(capsys, "apply", str(e12), write_state(tmp_path / "d.json", np.diag([1, 0])))
    assert code == 3 and rep["zero_probability"]
    code, _ = run(capsys, "apply", str(e12), s)
    assert code == 2
    big = tmp_path / "big.json"
    big.write_text(dumps(channel_document([2 * np.eye(3)])))
    code, rep = run(capsys, "apply", str(big), s)
    assert code == 2 and rep["error"] == "SubnormalizationViolated"


def test_distinguish(tmp_path, capsys):
    pm = tmp_path / "pm.json"
    pm.write_text(dumps(pure_states_document([np.array([S2, S2]), np.array([S2, -S2])])))
    code, rep = run(capsys, "distinguish", str(pm), "--mode", "io")
    assert code == 0 and rep["protocol"]["verified"]
    code, rep = run(capsys, "distinguish", str(pm), "--mode", "sio")
    assert code == 1 and rep["protocol"] is None
    pair = tmp_path / "pair.json"
    pair.write_text(dumps(pure_states_document([np.array([S2, S2, 0]), np.array([0, 0, 1.0])])))
    code, rep = run(capsys, "distinguish", str(pair), "--mode", "sio")
    assert code == 0 and rep["protocol"]["strictly_incoherent"]
    bad = tmp_path / "bad.json"
    bad.write_text(dumps(pure_states_document([np.array([S2, S2]), np.array([1.0, 0])])))
    code, rep = run(capsys, "distinguish", str(bad))
    assert code == 2 and rep["error"] == "NotOrthogonal" and rep["pair"] == [1, 2]


def test_random_command(tmp_path, capsys):
    out = tmp_path / "p.json"
    code, rep = run(capsys, "random", "pure", "--dim", "3", "--seed", "7", "--output", str(out))
    assert code == 0 and rep["analysis"]["verdicts"]["sio"]
    assert np.linalg.matrix_rank(parse_state_file(out.read_text())) == 1
    code, rep = run(capsys, "random", "mixed", "--dim", "3", "--rank", "3", "--seed", "7")
    assert rep["analysis"]["blocks"][0]["rank"] == 3 and not rep["analysis"]["verdicts"]["sio"]
    code, rep = run(capsys, "random", "block", "--dims", "2,1", "--ranks", "2,1", "--seed", "7")
    assert len(rep["analysis"]["blocks"]) == 2 and not rep["analysis"]["verdicts"]["sio"]
    code, rep = run(capsys, "random", "mixed", "--dim", "2", "--rank", "5")
    assert code == 2
    code, _ = run(capsys, "random", "block", "--dims", "2,x", "--ranks", "1,1")
    assert code == 2


def test_falsify_command(tmp_path, capsys, mixed_qubit):
    code, rep = run(capsys, "falsify", write_state(tmp_path / "m.json", mixed_qubit), "--trials", "2000")
    assert code == 1 and not rep["found"]
    code, rep = run(capsys, "falsify", write_state(tmp_path / "p.json", maximally_coherent(3).projector()), "--trials", "100", "--seed", "4")
    assert code == 0 and rep["found"] and rep["probability"] > 0


def test_quiet_and_report_file(tmp_path, capsys):
    s = write_state(tmp_path / "s.json", np.eye(2) / 2)
    out = tmp_path / "r.json"
    code = main(["analyze", s, "--quiet", "--output", str(out)])
    assert code == 1 and capsys.readouterr().out == ""
    assert json.loads(out.read_text())["kind"] == "analysis"


def test_tolerance_flag_changes_verdict(tmp_path, capsys):
    m = np.array([[0.5, 1e-7], [1e-7, 0.5]])
    s = write_state(tmp_path / "s.json", m)
    _, loose = run(capsys, "analyze", s, "--tol", "1e-5")
    _, tight = run(capsys, "analyze", s)
    assert len(loose["blocks"]) == 2 and len(tight["blocks"]) == 1
    assert loose["tolerance"]["rel_eps"] == 1e-5


def test_module_entry_point(tmp_path):
    s = write_state(tmp_path / "s.json", maximally_coherent(2).projector())
    proc = subprocess.run([sys.executable, "-m", "cohdistill", "analyze", s], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdicts"]["sio"]
