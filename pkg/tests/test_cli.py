import csv
import subprocess
import sys
from importlib import resources

import pytest

from lotrsim import cli, harness
from lotrsim.state import EngineError

DATA = resources.files("lotrsim.data")


def run(*argv):
    return cli.main(list(argv))


def test_validate_bundled(capsys):
    assert run("validate", "--scenario", str(DATA / "hard.txt")) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_broken(tmp_path, capsys):
    text = (DATA / "medium.txt").read_text().replace("heroes=eowyn,iron_thane,loremaster", "heroes=eowyn,iron_thane")
    path = tmp_path / "broken.txt"
    path.write_text(text)
    assert run("validate", "--scenario", str(path)) == 1
    assert "HeroCountViolation" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ("simulate", "--difficulty", "nightmare"),
    ("simulate", "--planning", "7"),
    ("simulate", "--trials", "0"),
    ("simulate", "--seed", "-1"),
    ("simulate", "--bogus"),
    ("frobnicate",),
    (),
    ("validate", "--scenario", "/nonexistent/file.txt"),
])
def test_bad_configuration_exits_1(argv, capsys):
    assert run(*argv) == 1


def test_difficulty_contradicting_file(capsys):
    assert run("simulate", "--scenario", str(DATA / "hard.txt"), "--difficulty", "easy", "--trials", "1") == 1
    assert "contradicts" in capsys.readouterr().err


def test_simulate_writes_csv(tmp_path, capsys):
    out = tmp_path / "res" / "sim.csv"
    code = run("simulate", "--difficulty", "easy", "--planning", "2", "--questing", "1", "--defense", "2",
               "--trials", "6", "--seed", "5", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1
    assert (rows[0]["label"], rows[0]["difficulty"], rows[0]["trials"]) == ("2-1-2", "Easy", "6")
    assert "2-1-2" in capsys.readouterr().out


def test_simulate_csv_to_stdout(capsys):
    assert run("simulate", "--trials", "3", "--planning", "1", "--questing", "1", "--defense", "1") == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("label,planning,questing,defense")
    assert "±" in captured.err


def test_preset_runs(tmp_path, capsys):
    out = tmp_path / "final.csv"
    assert run("final-comp", "--trials", "1", "--budget", "2", "--out", str(out)) == 0
    labels = [r["label"] for r in csv.DictReader(out.open())]
    assert labels == ["1-1-1", "2-2-2", "3-3-3", "4-4-4", "3-2-2", "4-2-2", "4-2-4"]


def test_scenario_dir(tmp_path, capsys):
    for name in ("easy.txt", "medium.txt", "hard.txt"):
        (tmp_path / name).write_text((DATA / name).read_text())
    assert run("final-comp", "--trials", "1", "--budget", "1", "--scenario-dir", str(tmp_path)) == 0


def test_internal_error_exits_2(monkeypatch, capsys):
    def boom(config):
        raise harness.TrialError(7, EngineError("zone leak"))

    monkeypatch.setattr(cli, "run_experiment", boom)
    assert run("simulate", "--trials", "1") == 2
    assert "invariant" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lotrsim", "validate", "--scenario", str(DATA / "easy.txt")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
