import json

import pytest
from click.testing import CliRunner

from fibcoal.cli import main


@pytest.fixture
def run():
    runner = CliRunner(mix_stderr=False) if "mix_stderr" in CliRunner.__init__.__code__.co_varnames else CliRunner()
    return lambda *args: runner.invoke(main, list(args))


@pytest.fixture
def kripke(models_dir):
    return str(models_dir / "kripke.yaml")


def test_check_holds(run, kripke):
    r = run("check", "--model", kripke, "--formula", "!box(F)")
    assert r.exit_code == 0, r.output


def test_check_fails(run, kripke):
    r = run("check", "--model", kripke, "--formula", "box(box(!box(F)))")
    assert r.exit_code == 1


def test_check_at_state(run, kripke):
    assert run("check", "--model", kripke, "--formula", "box(F)", "--state", "s3").exit_code == 0
    assert run("check", "--model", kripke, "--formula", "box(F)", "--state", "nowhere").exit_code == 4


def test_check_error_codes(run, kripke, tmp_path):
    assert run("check", "--model", kripke, "--formula", "box((T").exit_code == 2
    assert run("check", "--model", kripke, "--formula", "<deq[0.5]>(T)").exit_code == 3
    bad = tmp_path / "bad.yaml"
    bad.write_text("kind: kripke\ntransitions: [1, 2\n")
    assert run("check", "--model", str(bad), "--formula", "T").exit_code == 2


def test_check_budget(run, models_dir):
    r = run("check", "--model", str(models_dir / "teleport.yaml"),
            "--formula", str(models_dir / "teleport.fml"), "--max-carrier", "2")
    assert r.exit_code == 4


def test_check_teleport_file(run, models_dir):
    r = run("check", "--model", str(models_dir / "teleport.yaml"), "--formula", str(models_dir / "teleport.fml"))
    assert r.exit_code == 0, r.output
    assert "outcome4" in r.output


def test_json_is_reproducible(run, kripke):
    a = run("check", "--model", kripke, "--formula", "!box(F)", "--json").output
    b = run("check", "--model", kripke, "--formula", "!box(F)", "--json").output
    assert a == b
    json.loads(a)


def test_demo_teleport_single(run):
    r = run("demo-teleport", "--state", "+", "--json")
    assert r.exit_code == 0
    doc = json.loads(r.output)
    assert doc["ok"] and len(doc["inputs"]) == 1
    assert all(abs(p - 0.25) < 1e-9 for p in doc["inputs"][0]["probabilities"].values())


def test_demo_teleport_bad_state(run):
    assert run("demo-teleport", "--state", "ket('00')").exit_code == 2


def test_demo_swap(run):
    r = run("demo-swap", "--json")
    assert r.exit_code == 0
    doc = json.loads(r.output)
    assert doc["corrected"]["ok"] and not doc["uncorrected"]["ok"]


def test_selftest(run):
    r = run("selftest", "separation")
    assert r.exit_code == 0 and "0 checks" not in r.output
    assert run("selftest", "nonsense").exit_code == 2
