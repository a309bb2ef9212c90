import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from gradtt.cli import main

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(autouse=True)
def _in_root(monkeypatch):
    monkeypatch.chdir(ROOT)
    monkeypatch.delenv("GTT_FUEL", raising=False)


def gtt(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("golden, argv", [
    ("extract_idzero.json", ["extract", "demos/id.gtt", "idzero"]),
    ("extract_idzero_strict.json", ["extract", "demos/id.gtt", "idzero", "--strict"]),
    ("extract_moded_second.json", ["extract", "demos/moded.gtt", "second"]),
    ("usage_plus.json", ["usage", "demos/plus.gtt", "plus"]),
    ("run_plus23.json", ["run", "demos/plus.gtt", "plus23"]),
    ("check_errors.json", ["check", "demos/errors.gtt"]),
])
def test_json_output_matches_golden_file(capsys, golden, argv):
    _, out, _ = gtt(capsys, *argv, "--emit", "json")
    assert json.loads(out) == json.loads((GOLDEN / golden).read_text(encoding="utf-8"))


def test_check_identity(capsys):
    code, out, _ = gtt(capsys, "check", "demos/id.gtt", "--modality", "erasure")
    assert code == 0
    assert out.splitlines() == ["id : ok", "idzero : ok"]


def test_check_reports_errors_with_positions(capsys):
    code, out, _ = gtt(capsys, "check", "demos/errors.gtt")
    assert code == 1
    lines = out.splitlines()
    assert lines[0].startswith("demos/errors.gtt:5:21: mismatch in notnat:")
    assert lines[1].startswith("demos/errors.gtt:9:3: var-over-use in twice:")
    assert lines[2] == "fine : ok"


def test_check_selected_definitions(capsys):
    code, out, _ = gtt(capsys, "check", "demos/errors.gtt", "fine")
    assert (code, out) == (0, "fine : ok\n")


def test_check_in_parallel_gives_the_same_report(capsys):
    _, serial, _ = gtt(capsys, "check", "demos/errors.gtt", "--emit", "json")
    code, parallel, _ = gtt(capsys, "check", "demos/errors.gtt", "--emit", "json", "--jobs", "2")
    assert code == 1
    assert json.loads(serial) == json.loads(parallel)


@pytest.mark.parametrize("flags, expected", [
    ([], "[k↦1, n↦1]"),
    (["--nr", "bad"], "[k↦w, n↦w]"),
    (["--modality", "erasure"], "[k↦w, n↦w]"),
])
def test_usage_of_plus(capsys, flags, expected):
    code, out, _ = gtt(capsys, "usage", "demos/plus.gtt", "plus", *flags)
    assert (code, out.strip()) == (0, expected)


def test_usage_in_zero_mode(capsys):
    code, out, _ = gtt(capsys, "usage", "demos/plus.gtt", "plus", "--mode", "moded", "--at", "0M")
    assert (code, out.strip()) == (0, "[k↦0, n↦0]")


def test_extract_text(capsys):
    assert gtt(capsys, "extract", "demos/id.gtt", "idzero")[1].strip() == "((\\. #0) zero)"
    assert gtt(capsys, "extract", "demos/id.gtt", "idzero", "--strict")[1].strip() == "(((\\. (\\. #0)) !) zero)"


def test_eval(capsys):
    assert gtt(capsys, "eval", "demos/plus.gtt", "plus23")[:2] == (0, "5\n")
    code, out, _ = gtt(capsys, "eval", "demos/counterexample.gtt", "stuck")
    assert code == 1 and out.startswith("stuck:")


def test_run_agrees(capsys):
    code, out, _ = gtt(capsys, "run", "demos/plus.gtt", "plus23")
    assert (code, out.strip()) == (0, "source=5 target(cbn)=5 target(cbv)=5 AGREE")


def test_run_with_too_little_fuel_never_agrees(capsys, monkeypatch):
    monkeypatch.setenv("GTT_FUEL", "10")
    code, out, _ = gtt(capsys, "run", "demos/plus.gtt", "plus23")
    assert code == 1
    assert "AGREE" not in out.replace("DISAGREE", "")
    assert "timeout" in out


def test_fuel_flag_overrides_environment(capsys, monkeypatch):
    monkeypatch.setenv("GTT_FUEL", "10")
    code, out, _ = gtt(capsys, "run", "demos/plus.gtt", "plus23", "--fuel", "100000")
    assert code == 0 and out.strip().endswith(" AGREE")


def test_bad_fuel_environment_is_a_config_error(capsys, monkeypatch):
    monkeypatch.setenv("GTT_FUEL", "lots")
    code, _, err = gtt(capsys, "run", "demos/plus.gtt", "plus23")
    assert code == 2 and "GTT_FUEL" in err


def test_erased_matches_flag(capsys):
    assert gtt(capsys, "check", "demos/counterexample.gtt")[0] == 0
    code, out, _ = gtt(capsys, "check", "demos/counterexample.gtt", "--no-erased-matches")
    assert code == 1 and "restriction" in out


def test_information_flow(capsys):
    code, out, _ = gtt(capsys, "check", "demos/flow.gtt")
    assert code == 1
    assert out.splitlines()[0] == "pub : ok"
    assert "leak" in out.splitlines()[1]


def test_laws(capsys):
    code, out, _ = gtt(capsys, "laws", "linear", "trivial")
    assert code == 0
    assert "well-behaved zero: yes" in out and "well-behaved zero: no" in out
    code, out, _ = gtt(capsys, "laws", "--emit", "json")
    data = json.loads(out)
    assert data["ok"] and len(data["instances"]) == 6


def test_laws_report_division(capsys):
    code, out, _ = gtt(capsys, "laws", "information-flow", "affine", "--emit", "json")
    # division facts are reported but do not decide the exit status
    assert code == 0
    flow, affine = json.loads(out)["instances"]
    assert flow["division_by"] == ["H", "L", "M"] and all(r["ok"] for r in flow["division_laws"])
    failing = {r["law"]: r["witness"] for r in affine["division_laws"] if not r["ok"]}
    assert failing == {"p/0 = 1": ["0"], "p/p = 1": ["0"], "1/p = 1": ["0"]}


def test_lattice_file(capsys, tmp_path):
    spec = tmp_path / "two.lat"
    spec.write_text("elem Lo Hi\nbot Lo\ntop Hi\ncover Lo Hi\n")
    code, out, _ = gtt(capsys, "laws", "--modality", "lattice", "--lattice", str(spec))
    assert code == 0 and "PASS" in out


def test_suite_subset(capsys):
    code, out, _ = gtt(capsys, "suite", "counterexample", "examples")
    assert code == 0
    assert "counterexample: 6 passed, 0 failed" in out


def test_suite_json(capsys):
    code, out, _ = gtt(capsys, "suite", "soundness", "--scale", "0.02", "--emit", "json", "--modality", "linear")
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["reports"][0]["suite"] == "soundness"


@pytest.mark.parametrize("argv", [
    ["check", "demos/nope.gtt"],
    ["check", "demos/id.gtt", "--modality", "quantum"],
    ["check", "demos/id.gtt", "missing"],
    ["usage", "demos/plus.gtt", "plus", "--nr", "bad", "--modality", "erasure"],
    ["laws", "--modality", "lattice"],
    ["suite", "nonsense"],
    ["check", "demos/id.gtt", "--jobs", "0"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    assert gtt(capsys, *argv)[0] == 2


def test_parse_error_exits_1(capsys, tmp_path):
    bad = tmp_path / "bad.gtt"
    bad.write_text("def x : Nat := (zero\n")
    code, out, _ = gtt(capsys, "check", str(bad))
    assert code == 1 and f"{bad}:2:1:" in out


def test_console_script_entry_point():
    env = {**os.environ, "PYTHONPATH": str(ROOT / "src")}
    r = subprocess.run([sys.executable, "-m", "gradtt.cli", "check", "demos/id.gtt"], cwd=ROOT,
                       capture_output=True, text=True, env=env)
    assert r.returncode == 0 and "idzero : ok" in r.stdout
