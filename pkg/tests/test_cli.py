import json
import subprocess
import sys

import pytest

from l1fourier.cli import ConfigError, parse_grid, run


def test_parse_grid():
    assert parse_grid("2:16:x2") == [2, 4, 8, 16]
    assert parse_grid("1:7:+3") == [1, 4, 7]
    assert parse_grid("3,5,9") == [3, 5, 9]
    assert parse_grid("0:1:+0.25", float) == [0, 0.25, 0.5, 0.75, 1.0]
    for bad in ("", "2:16:x1", "2:16:*2", "a,b", "1:2"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_check_mvbv_json(tmp_path):
    out = tmp_path / "r.json"
    assert run(["check-mvbv", "--family", "inv_n", "--lambda", "2", "--m", "2:4096:x2",
                "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["verdict"] == "bounded-evidence"
    assert data["config"]["lambda"] == 2.0
    assert data["report"]["m_values"][:3] == [2, 4, 8]


def test_expectation_mismatch_exits_one(tmp_path):
    argv = ["check-mvbv", "--family", "lacunary_spike", "--m", "2:1024:x2",
            "--expect", "bounded-evidence", "--out", str(tmp_path / "x.json")]
    assert run(argv) == 1


def test_kernels_csv(tmp_path, capsys):
    assert run(["kernels", "--k", "2:64:x2", "--check-lower-bound"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,norm_D,norm_E,log_k,ratio_to_log"
    assert len(lines) == 7


def test_converge_finite(tmp_path):
    csv_path = tmp_path / "c.csv"
    assert run(["converge", "--family", "finite", "--coeffs", "1,0.5", "--n", "1:8:x2",
                "--csv", str(csv_path)]) == 0
    rows = csv_path.read_text().splitlines()[1:]
    assert all(float(r.split(",")[1]) <= 1e-10 for r in rows)


@pytest.mark.parametrize("argv", [
    ["converge", "--family", "nope"],
    ["check-mvbv", "--lambda", "1.5"],
    ["converge", "--mu", "3"],
    ["converge", "--n", "1:8:y2"],
    ["converge", "--family", "inv_pow", "--param", "alpha"],
    ["rate", "--psi", "smoothness:1", "--family", "inv_n", "--n", "4:8:x2"],
    ["modulus", "--t", "0:5:+1"],
    ["--config", "/nonexistent.toml"],
    [],
    ["bogus"],
])
def test_config_errors_exit_two(argv, capsys):
    assert run(argv) == 2
    assert "error" in capsys.readouterr().err


def test_toml_config(tmp_path):
    cfg = tmp_path / "exp.toml"
    cfg.write_text('command = "converge"\nfamily = "inv_pow"\nparams = { alpha = 2.0 }\n'
                   '[converge]\nn = "8:32:x2"\n')
    assert run(["--config", str(cfg), "--out-dir", str(tmp_path / "o")]) == 0
    data = json.loads((tmp_path / "o" / "converge.json").read_text())
    assert data["config"]["family"] == {"family_id": "inv_pow", "params": {"alpha": 2.0}}
    assert data["config"]["grid"] == "8:32:x2"
    assert (tmp_path / "o" / "converge.csv").read_text().startswith("n,err,")
    # command-line flags override the file
    assert run(["--config", str(cfg), "--n", "8:16:x2", "--out-dir", str(tmp_path / "p")]) == 0
    data = json.loads((tmp_path / "p" / "converge.json").read_text())
    assert data["config"]["grid"] == "8:16:x2"


def test_module_entry_is_deterministic(tmp_path):
    outs = []
    d = tmp_path / "o"
    for _ in range(2):
        subprocess.run([sys.executable, "-m", "l1fourier", "modulus", "--family", "inv_pow",
                        "--param", "alpha=2", "--order", "32", "--out-dir", str(d)], check=True)
        outs.append(((d / "modulus.csv").read_bytes(), (d / "modulus.json").read_bytes()))
    assert outs[0] == outs[1]
