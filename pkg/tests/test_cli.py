"""CLI runner: exit codes, output files, and header reproducibility."""

import json

from amgmlab.cli import EXIT_OK, EXIT_USAGE, main


def run(argv):
    return main(argv)


def test_verify_ok_and_csv_output(tmp_path):
    out = tmp_path / "verify.csv"
    code = run(["verify", "--trials", "20", "--seed", "3",
                "--out", str(out)])
    assert code == EXIT_OK
    text = out.read_text()
    assert text.startswith("# config: ")
    header, body = text.split("\n", 1)
    cfg = json.loads(header[len("# config: "):])
    assert cfg["command"] == "verify" and cfg["seed"] == 3
    assert body.splitlines()[0].startswith("check,")


def test_header_reproducibility(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["verify", "--trials", "15", "--seed", "9", "--out", str(a)]) == EXIT_OK
    # Re-running from the emitted header's settings reproduces the bytes.
    header = a.read_text().splitlines()[0]
    cfg = json.loads(header[len("# config: "):])
    assert run(["verify", "--trials", str(cfg["trials"]),
                "--seed", str(cfg["seed"]),
                "--epsilon", str(cfg["epsilon"]), "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_json_format(tmp_path):
    out = tmp_path / "verify.json"
    assert run(["verify", "--trials", "5", "--format", "json",
                "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert "config" in doc and "reports" in doc
    assert all("rel_gap" in r for r in doc["reports"])


def test_amgm_ok(tmp_path):
    out = tmp_path / "amgm.csv"
    code = run(["amgm", "--m", "3", "--n", "4", "--d", "2",
                "--trials", "10", "--out", str(out)])
    assert code == EXIT_OK
    assert out.exists()


def test_amgm_m_exceeding_n_is_usage_error():
    assert run(["amgm", "--m", "5", "--n", "4", "--trials", "1"]) == EXIT_USAGE


def test_bad_norm_is_usage_error():
    assert run(["verify", "--trials", "1", "--norm", "schatten:0.5"]) == EXIT_USAGE
    assert run(["verify", "--trials", "1", "--norm", "bogus"]) == EXIT_USAGE


def test_unknown_command_is_usage_error():
    assert run(["frobnicate"]) == EXIT_USAGE


def test_search_ok_and_no_false_violation(tmp_path):
    out = tmp_path / "search.json"
    code = run(["search", "--m", "4", "--n", "4", "--d", "2", "--trials",
                "30", "--seed", "2", "--out", str(out)])
    assert code == EXIT_OK  # exit 3 is reserved for certified violations
    doc = json.loads(out.read_text())
    assert doc["violation_found"] is False
    assert doc["trials"] == 30


def test_search_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["search", "--m", "4", "--n", "4", "--d", "2", "--trials", "20",
            "--seed", "8"]
    assert run(argv + ["--out", str(a)]) == EXIT_OK
    assert run(argv + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_search_m_above_n_is_usage_error():
    assert run(["search", "--m", "5", "--n", "4", "--trials", "1"]) == EXIT_USAGE


def test_kaczmarz_outputs(tmp_path):
    out = tmp_path / "bench"
    code = run(["kaczmarz", "--rows", "8", "--cols", "3", "--trials", "3",
                "--steps", "30", "--out", str(out)])
    assert code == EXIT_OK
    csv_text = (tmp_path / "bench.csv").read_text()
    assert csv_text.startswith("# config: ")
    assert csv_text.splitlines()[1] == "mode,trial,step,error,max_row_residual"
    doc = json.loads((tmp_path / "bench.json").read_text())
    assert set(doc["summary"]["modes"]) == {"wr", "wor", "cyclic"}


def test_wedge_ok(tmp_path):
    out = tmp_path / "wedge.json"
    code = run(["wedge", "--d-max", "5", "--k-max", "3", "--trials", "20",
                "--out", str(out)])
    assert code == EXIT_OK
    doc = json.loads(out.read_text())
    assert len(doc["results"]) == 20


def test_wedge_guard_is_usage_error():
    assert run(["wedge", "--d-max", "20", "--k-max", "10", "--trials", "1"]) \
        == EXIT_USAGE


def test_config_file_supplies_defaults(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"trials": 7, "seed": 21}))
    out = tmp_path / "out.csv"
    assert run(["verify", "--config", str(cfg_path), "--out", str(out)]) == EXIT_OK
    header = out.read_text().splitlines()[0]
    cfg = json.loads(header[len("# config: "):])
    assert cfg["trials"] == 7 and cfg["seed"] == 21


def test_config_file_flag_override(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"trials": 7, "seed": 21}))
    out = tmp_path / "out.csv"
    assert run(["verify", "--config", str(cfg_path), "--seed", "4",
                "--out", str(out)]) == EXIT_OK
    header = json.loads(out.read_text().splitlines()[0][len("# config: "):])
    assert header["seed"] == 4 and header["trials"] == 7


def test_missing_config_file_is_usage_error():
    assert run(["verify", "--config", "/nonexistent.json"]) == EXIT_USAGE
