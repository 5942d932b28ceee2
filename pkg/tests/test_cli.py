import json
import subprocess
import sys
from pathlib import Path

import pytest

from gplab.cli import main
from gplab.config import load_config, parse_config
from gplab.errors import ConfigError

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(args, out: Path):
    code = main(list(args) + ["--out", str(out)])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


def test_growth_command(tmp_path):
    out = tmp_path / "r.json"
    code, report = run_cli(["growth", "--config", str(FIXTURES / "hecke_q1_edgeless3.json")], out)
    assert code == 0
    g = report["results"]["growth"]
    assert g["spheres"][:4] == [1, 3, 6, 12]
    assert g["oracle_match"] and g["region"] == "OutsideClosure"
    assert abs(g["critical_t"] - 0.5) < 1e-9


def test_growth_csv(tmp_path):
    out = tmp_path / "r.json"
    csv = tmp_path / "g.csv"
    code, _ = run_cli(
        ["growth", "--config", str(FIXTURES / "hecke_q1_edgeless3.json"), "--csv", str(csv)], out
    )
    assert code == 0
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "depth,sphere_count,series_coefficient"
    assert lines[1] == "0,1,1" and lines[2] == "1,3,3"


def test_simplicity_established_exit_zero(tmp_path):
    out = tmp_path / "r.json"
    code, report = run_cli(["simplicity", "--config", str(FIXTURES / "m2_trace_edgeless3.json")], out)
    assert code == 0
    v = report["results"]["verdicts"][0]
    assert v["result"] == "Established"
    assert any("state-central" in c for c in v["citations"])


def test_simplicity_hypotheses_fail_strict_flag(tmp_path):
    out = tmp_path / "r.json"
    cfg = str(FIXTURES / "hecke_inside_edgeless3.json")
    code, report = run_cli(["simplicity", "--config", cfg], out)
    assert code == 0
    assert report["results"]["verdicts"][0]["result"] == "HypothesesFail"
    code, _ = run_cli(["simplicity", "--config", cfg, "--strict"], out)
    assert code == 1


def test_check_identities_fault_fixture_exits_one(tmp_path):
    out = tmp_path / "r.json"
    code, report = run_cli(["check-identities", "--config", str(FIXTURES / "fault_rewrite.json")], out)
    assert code == 1
    assert not report["results"]["identities"]["passed"]


def test_trace_and_nuclearity(tmp_path):
    out = tmp_path / "r.json"
    code, report = run_cli(["trace", "--config", str(FIXTURES / "m2_trace_edgeless3.json")], out)
    assert code == 0
    assert report["results"]["verdicts"][0]["result"] == "Established"
    code, report = run_cli(["nuclearity", "--config", str(FIXTURES / "hecke_q1_edgeless3.json")], out)
    assert code == 0
    assert report["results"]["verdicts"][0]["result"] == "Established"


def test_tensor_split_command(tmp_path):
    out = tmp_path / "r.json"
    code, report = run_cli(["tensor-split", "--config", str(FIXTURES / "join_path3_hecke.json")], out)
    assert code == 0
    ts = report["results"]["tensor_split"]
    assert ts["passed"] and ts["max_deviation"] <= 1e-12
    # not a join: config error
    code = main(["tensor-split", "--config", str(FIXTURES / "hecke_q1_edgeless3.json"), "--out", str(out)])
    assert code == 2


def test_topofree_command(tmp_path):
    out = tmp_path / "r.json"
    code, report = run_cli(["witness-topofree", "--config", str(FIXTURES / "hecke_q1_edgeless3.json")], out)
    assert code == 0
    t = report["results"]["topofree"]
    assert t["conclusive"] and len(t["checks"]) == 4


def test_join_decomposition_recursion_in_simplicity(tmp_path):
    out = tmp_path / "r.json"
    code, report = run_cli(["simplicity", "--config", str(FIXTURES / "join_path3_hecke.json")], out)
    assert code == 0
    v = report["results"]["verdicts"][0]
    assert "factors" in v and len(v["factors"]) == 2


def test_config_error_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["growth", "--config", str(bad)]) == 2
    assert main(["growth", "--config", str(tmp_path / "missing.json")]) == 2
    cfg = json.loads((FIXTURES / "hecke_q1_edgeless3.json").read_text())
    cfg["vertices"]["a"] = {"blocks": [2], "density": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]]}
    nf = tmp_path / "nonfaithful.json"
    nf.write_text(json.dumps(cfg))
    assert main(["growth", "--config", str(nf)]) == 2


def test_resource_cap_exit_code(tmp_path):
    cfg = json.loads((FIXTURES / "hecke_q1_edgeless3.json").read_text())
    cfg["truncation"] = 13  # beyond the ball depth cap
    f = tmp_path / "deep.json"
    f.write_text(json.dumps(cfg))
    assert main(["check-identities", "--config", str(f)]) == 3


def test_config_validation_messages():
    with pytest.raises(ConfigError, match="graph.vertices"):
        parse_config({"schema_version": 1, "graph": {"vertices": []}})
    with pytest.raises(ConfigError, match="schema_version"):
        parse_config({})
    with pytest.raises(ConfigError, match=r"edges\[0\]"):
        parse_config({"schema_version": 1, "graph": {"vertices": ["a"], "edges": [["a", "b"]]}, "vertices": {}})


def test_config_round_trip():
    cfg = load_config(str(FIXTURES / "m2_trace_edgeless3.json"))
    again = parse_config(cfg.echo)
    assert again.system.graph == cfg.system.graph
    assert again.truncation == cfg.truncation and again.seed == cfg.seed
    assert set(again.unitary_witnesses) == set(cfg.unitary_witnesses)
    for v in cfg.unitary_witnesses:
        assert (again.unitary_witnesses[v] - cfg.unitary_witnesses[v]).is_zero()
    assert again.sha256() == cfg.sha256()


def test_report_determinism(tmp_path):
    o1, o2 = tmp_path / "a.json", tmp_path / "b.json"
    cfg = str(FIXTURES / "m2_trace_edgeless3.json")
    assert main(["report-all", "--config", cfg, "--out", str(o1)]) == 0
    assert main(["report-all", "--config", cfg, "--out", str(o2)]) == 0
    a, b = json.loads(o1.read_text()), json.loads(o2.read_text())
    for r in (a, b):
        r.pop("timing")
        r["results"]["identities"].pop("elapsed_seconds")
    assert a == b


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "gplab.cli", "growth", "--config", str(FIXTURES / "hecke_q1_edgeless3.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    blob = json.loads(proc.stdout)
    assert blob["command"] == "growth"
