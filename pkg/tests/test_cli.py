import json

import jsonschema
import pytest

from qaffine.cli import SCHEMA_PATH, main
from qaffine.replay import bundled_corpus

SCHEMA = json.loads(SCHEMA_PATH.read_text())


def run(argv, capsys):
    code = main(argv + ["--json", "-"])
    data = json.loads(capsys.readouterr().out)
    jsonschema.validate(data, SCHEMA)
    return code, data


def test_suite_a2(capsys):
    code, data = run(["suite", "--type", "A2^1"], capsys)
    assert code == 0 and data["status"] == "ok"
    statuses = {g["status"] for g in data["goals"]}
    assert statuses == {"certified"}
    fams = {g["family"] for g in data["goals"]}
    assert {"identity", "replay"} <= fams
    assert data["discrepancies"]


def test_suite_strict_fails_on_discrepancy(capsys):
    code, data = run(["map", "--type", "A2^1", "--strict"], capsys)
    assert code == 1 and data["status"] == "fail"


def test_epsilon_e8(capsys):
    code, data = run(["epsilon", "--type", "E8^1"], capsys)
    assert code == 0
    assert len(data["discrepancies"]) == 1
    rec = data["discrepancies"][0]
    assert rec["paper_value"] == "-16" and rec["computed_value"] == "-28" and rec["citation"]


def test_identities_count_and_seed(capsys):
    code, data = run(["identities", "--seed", "3"], capsys)
    assert code == 0
    total = sum(int(g["detail"].split("/")[1].split()[0]) for g in data["goals"])
    assert total == 500
    _, again = run(["identities", "--seed", "3"], capsys)
    assert [g["detail"] for g in again["goals"]] == [g["detail"] for g in data["goals"]]


def test_cartan_and_relations(capsys):
    code, data = run(["cartan", "--type", "C2^1"], capsys)
    assert code == 0 and data["details"]
    code, data = run(["relations", "--type", "A1^1", "--window", "1"], capsys)
    assert code == 0 and data["details"]["relations"]["counts"]


def test_reduce_expression(capsys):
    code, data = run(["reduce", "--type", "A2^1", "[E1, F2]"], capsys)
    assert code == 0 and data["goals"][0]["status"] == "certified"
    assert data["details"]["reduce"]["trace_sound"]


def test_reduce_nonzero_is_inconclusive(capsys):
    code, data = run(["reduce", "--type", "A2^1", "E1*F1"], capsys)
    assert code == 0 and data["goals"][0]["status"] == "inconclusive"
    assert main(["reduce", "--type", "A2^1", "--strict", "E1*F1"]) == 1


@pytest.mark.parametrize("argv", [
    ["map"],                                  # missing --type
    ["map", "--type", "Q7^1"],
    ["reduce", "--type", "A2^1", "[E1,"],
    ["frobnicate"],
    ["replay", "--file", "/nonexistent.json"],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_replay_tampered_file_exits_1(tmp_path, capsys):
    d = next(x for x in bundled_corpus() if x.name == "a3_case1").to_json()
    d["steps"][0]["result"] = "0"
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d))
    code, data = run(["replay", "--file", str(p)], capsys)
    assert code == 1 and data["goals"][0]["status"] == "failed"


def test_replay_writes_certificates(tmp_path, capsys):
    code, data = run(["replay", "--all", "--type", "C2^1", "--certificates", str(tmp_path)],
                     capsys)
    assert code == 0
    cert = json.loads((tmp_path / "c2_e0f0.cert.json").read_text())
    assert cert["status"] == "certified" and cert["instances"]


def test_json_file_output(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["epsilon", "--type", "A3^2", "--json", str(out)]) == 0
    jsonschema.validate(json.loads(out.read_text()), SCHEMA)
    assert "epsilon" in capsys.readouterr().out


def test_twisted_map_reports_folding(capsys):
    code, data = run(["map", "--type", "A3^2"], capsys)
    fold = {g["name"]: g["status"] for g in data["goals"] if g["family"] == "folding"}
    assert fold["fold:a"] == fold["fold:b"] == "certified"
    assert code == 1
