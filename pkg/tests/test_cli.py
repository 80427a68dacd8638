import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from congruence import cli
from congruence import serialize as ser

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("UPDATE_GOLDEN") == "1"

IDENTITY_JOB = {
    "x": {"N": 4, "sym": [[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]]},
    "target": {"l": 1, "sym": [[[3]]]},
}


def call(argv, payload, monkeypatch, capsys):
    text = payload if isinstance(payload, str) else json.dumps(payload)
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    code = cli.main(argv + ["-"])
    return code, capsys.readouterr().out


def test_witness_identity_instance(monkeypatch, capsys):
    code, out = call(["witness", "--seed", "1"], IDENTITY_JOB, monkeypatch, capsys)
    assert code == 0
    assert json.loads(out)["report"]["passed"] is True


def test_rank_of_empty_tuple(monkeypatch, capsys):
    code, out = call(["rank"], {"matrices": []}, monkeypatch, capsys)
    assert code == 0 and json.loads(out)["value"] == "infinity"


def test_gen_witness_verify_roundtrip(monkeypatch, capsys):
    code, gen = call(["gen", "--seed", "3"], {"kind": "witness", "p": 1, "q": 1, "n": 1}, monkeypatch, capsys)
    assert code == 0
    code, wit = call(["witness", "--seed", "3"], json.loads(gen), monkeypatch, capsys)
    assert code == 0
    code, ver = call(["verify"], json.loads(wit), monkeypatch, capsys)
    assert code == 0 and json.loads(ver)["report"]["passed"] is True

    tampered = json.loads(wit)
    tampered["curve"]["det"]["k"] += 1
    code, ver = call(["verify"], tampered, monkeypatch, capsys)
    assert code == 1 and json.loads(ver)["report"]["passed"] is False


def test_exit_code_malformed(monkeypatch, capsys):
    code, out = call(["rank"], "{not json", monkeypatch, capsys)
    assert code == 2 and json.loads(out)["error"]["reason"] == "malformed_input"
    code, _ = call(["rank"], {"matrices": [[[1, 2], [3]]]}, monkeypatch, capsys)
    assert code == 2
    code, out = call(["witness"], IDENTITY_JOB, monkeypatch, capsys)
    assert code == 2 and "seed" in json.loads(out)["error"]["message"]


def test_exit_code_precondition(monkeypatch, capsys):
    job = {"x": {"N": 4, "sym": [[[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]]}, "target": {"l": 1, "sym": [[[0]]]}}
    code, out = call(["witness", "--seed", "0"], job, monkeypatch, capsys)
    assert code == 3 and json.loads(out)["error"]["reason"] == "rank_precondition"


def test_exit_code_not_found(monkeypatch, capsys):
    M = [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
    job = {"matrices": [M], "kinds": ["skew"], "l": 2}
    code, out = call(["normal-form", "--seed", "0", "--retries", "1"], job, monkeypatch, capsys)
    assert code == 1 and json.loads(out)["error"]["reason"] == "not_found"


def test_normal_form_single_matrix(monkeypatch, capsys):
    code, out = call(["normal-form"], {"matrix": [[0, 1], [1, 0]]}, monkeypatch, capsys)
    res = json.loads(out)
    assert code == 0 and res["rank"] == 2
    assert res["transformed"] == ser.matrix_to_json(ser.matrix_from_json(ser.config_from_json(res["field"]), [[1, 0], [0, 1]]))


def test_batch_with_jobs_matches_serial(monkeypatch, capsys):
    batch = [{"kind": "witness", "p": 1}, {"kind": "phi"}, {"kind": "planted", "s": 2}]
    code1, serial = call(["gen", "--seed", "9"], batch, monkeypatch, capsys)
    code2, parallel = call(["gen", "--seed", "9", "--jobs", "2"], batch, monkeypatch, capsys)
    assert code1 == code2 == 0 and serial == parallel
    assert len(json.loads(serial)) == 3


def test_batch_exit_code_is_worst(monkeypatch, capsys):
    code, out = call(["rank"], [{"matrices": []}, {"matrices": "nope"}], monkeypatch, capsys)
    assert code == 2 and json.loads(out)[0]["value"] == "infinity"


def test_experiment_csv(monkeypatch, capsys):
    code, out = call(["experiment", "--seed", "1"], {"p": 1, "q": 0, "n": 0, "l": 1, "instances": 2}, monkeypatch, capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "rank,seed,success"
    ranks = sorted({int(line.split(",")[0]) for line in lines[1:]})
    assert ranks == [2, 3]


def test_out_flag(tmp_path, monkeypatch, capsys):
    target = tmp_path / "rank.json"
    code, out = call(["rank", "--out", str(target)], {"matrices": []}, monkeypatch, capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["value"] == "infinity"


GOLDEN_CASES = {
    "rank_identity": (["rank"], {"matrices": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]}),
    "normal_form_skew": (["normal-form"], {"matrix": [[0, 2, 1], [-2, 0, 3], [-1, -3, 0]]}),
    "gen_witness": (["gen", "--seed", "11"], {"kind": "witness", "p": 1, "q": 1, "n": 1}),
    "witness_identity": (["witness", "--seed", "1"], IDENTITY_JOB),
    "experiment": (["experiment", "--seed", "2"], {"p": 1, "q": 0, "n": 0, "l": 1, "instances": 3}),
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name, monkeypatch, capsys):
    argv, payload = GOLDEN_CASES[name]
    _, out = call(argv, payload, monkeypatch, capsys)
    _, again = call(argv, payload, monkeypatch, capsys)
    assert out == again
    path = GOLDEN / f"{name}.out"
    if UPDATE:
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "congruence", "rank", "-"],
        input=json.dumps({"matrices": [[[1, 0], [0, 0]]]}),
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 1
