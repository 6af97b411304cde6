from __future__ import annotations

import json
import subprocess
import sys

import pytest

from codekit.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def rs5(tmp_path, capsys):
    path = tmp_path / "rs5.json"
    code, out, _ = run(capsys, "build", "rs", "--q", 5, "--k", 1, "--l", 2, "-o", path)
    assert code == 0 and "[[4,1" in out
    return path


def test_build_rs_and_verify(rs5, capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "ccz", "--in", rs5)
    assert code == 0 and "PASS" in out
    cert = json.loads((tmp_path / "rs5.json.ccz.cert.json").read_text())
    assert cert["passed"] and cert["kind"] == "ccz"
    code, out, _ = run(capsys, "verify", "u", "--in", rs5, "--cert-out", tmp_path / "u.json")
    assert code == 0 and (tmp_path / "u.json").exists()


def test_distance_and_info(rs5, capsys):
    code, out, _ = run(capsys, "distance", "--in", rs5)
    assert code == 0 and out.strip() == "exact 2"
    code, out, _ = run(capsys, "info", "--in", rs5)
    assert code == 0 and "kind: TransversalTriple" in out and "provenance:" in out


def test_constraint_violation_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, "build", "rs", "--q", 4, "--k", 1, "--l", 2, "-o", tmp_path / "x.json")
    assert code == 2 and "3(ℓ−1) < n violated" in err
    assert not (tmp_path / "x.json").exists()


def test_bad_arguments_exit_2(capsys):
    assert main(["build", "rs", "--q", "5"]) == 2
    assert main(["frobnicate"]) == 2


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "ccz", "--in", tmp_path / "nope.json")
    assert code == 2 and err.startswith("error:")


def test_transversal_u_requires_same_code(capsys, tmp_path):
    from codekit.serialize import save

    from instances import tiny_instance

    t = tiny_instance(3)
    assert not t.same_code
    save(tmp_path / "t.json", t)
    code, _, err = run(capsys, "verify", "u", "--in", tmp_path / "t.json")
    assert code == 2 and "same_code required" in err
    code, out, _ = run(capsys, "distance", "--in", tmp_path / "t.json")
    assert code == 0 and "code 3:" in out


def test_classical_to_transversal(capsys, tmp_path):
    c = tmp_path / "c.json"
    assert run(capsys, "build", "classical-rs", "--q", 7, "--k", 3, "-o", c)[0] == 0
    code, _, err = run(capsys, "build", "transversal", "--classical", c, "--a-set", "5,6", "-o", tmp_path / "t.json")
    assert code == 2 and "k < d' violated" in err
    assert run(capsys, "build", "classical-rs", "--q", 5, "--k", 2, "-o", c)[0] == 0
    code, out, _ = run(capsys, "build", "transversal", "--classical", c, "--a-set", "4", "-o", tmp_path / "t.json")
    assert code == 0 and "[[4,1" in out


def test_mf_corrupted_dec_fails(capsys, tmp_path):
    path = tmp_path / "mf.json"
    assert run(capsys, "build", "mf", "rm", "--q", 2, "--k", 2, "-o", path)[0] == 0
    assert run(capsys, "verify", "mf", "--in", path)[0] == 0
    doc = json.loads(path.read_text())
    dec = doc["payload"]["dec"]
    col = next(j for j in range(len(dec[0])) if any(row[j] for row in dec))
    for row in dec:
        row[col] = 0
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "mf", "--in", path)
    assert code == 1 and "FAIL" in out


def test_mf_quantum_and_diamond(capsys, tmp_path):
    mf, base, out = tmp_path / "mf.json", tmp_path / "base.json", tmp_path / "d.json"
    assert run(capsys, "build", "mf", "rs", "--q", 5, "--k", 2, "--lift", "-o", mf)[0] == 0
    assert run(capsys, "build", "rs", "--q", "5^2", "--k", 2, "--l", 8, "-o", base)[0] == 0
    code, text, _ = run(capsys, "build", "diamond", "--mf", mf, "--triple", base, "--audit", "-o", out)
    assert code == 0 and "proof-chain audit PASS" in text and "[[115,2" in text
    code, text, _ = run(capsys, "info", "--in", out)
    assert "gamma" in text and "base: [[23,2,≥7]]_25" in text
    code, _, err = run(capsys, "build", "diamond", "--mf", mf, "--triple", base, "--r", 2, "-o", out)
    assert code == 2 and "violated" in err


def test_mf_quantum_constraint(capsys, tmp_path):
    code, _, err = run(capsys, "build", "mf", "quantum", "--q", 8, "--k", 2, "--r", 5, "--l", 7, "-o", tmp_path / "q.json")
    assert code == 2 and "m(ℓ−1) < n violated" in err


def test_small_pipeline(capsys, tmp_path):
    out = tmp_path / "p.json"
    code, text, _ = run(capsys, "build", "pipeline", "--schedule", "b1", "--base-q", 2, "--depth", 2, "-o", out)
    assert code == 0 and "[[1792,1" in text
    code, text, _ = run(capsys, "info", "--in", out)
    assert "kind: PipelineOutput" in text
    code, _, err = run(capsys, "build", "pipeline", "--schedule", "custom", "-o", out)
    assert code == 2


def test_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "codekit.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "codekit" in proc.stdout
