"""
Tests for the command-line surface and its exit codes
"""
import json

import pytest

from app.api import commands
from app.core.exceptions import TheoremViolationError
from app.main import run


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def output(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.fixture
def g2_system(tmp_path):
    return write_json(tmp_path / "g2.json", {"rootsystem": "G2", "axes": [[2, 1], [1, 0], [3, 2], [0, 1]]})


@pytest.fixture
def a2_system(tmp_path):
    return write_json(tmp_path / "a2.json", {"rootsystem": "A2", "axes": [[1, 0], [1, 0], [0, 1], [0, 1]]})


def test_roots(capsys):
    assert run(["roots", "G2"]) == 0
    data = output(capsys)
    assert len(data["roots"]) == 12
    assert data["cartan"] == [[2, -1], [-3, 2]]
    assert data["dominant_short"] == [[2, 1]]


def test_roots_to_file(tmp_path):
    out = tmp_path / "roots.json"
    assert run(["roots", "B2+A1", "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert [c["family"] for c in data["components"]] == ["A", "B"]


def test_validate(capsys, g2_system):
    assert run(["validate", g2_system]) == 0
    data = output(capsys)
    assert data["valid"] is True
    assert data["branching"] == "G2:ns=2,nl=2"
    assert len(data["hash"]) == 16


def test_unwritable_output_path(tmp_path):
    out = tmp_path / "missing" / "roots.json"
    assert run(["roots", "G2", "--out", str(out)]) == 1
    assert not out.exists()


def test_validate_rejects_bad_product(tmp_path):
    path = write_json(tmp_path / "bad.json", {"rootsystem": "A2", "axes": [[1, 0], [0, 1]]})
    assert run(["validate", path]) == 1


def test_validate_rejects_non_root(tmp_path):
    path = write_json(tmp_path / "bad.json", {"rootsystem": "A2", "axes": [[2, 0], [2, 0]]})
    assert run(["validate", path]) == 1


def test_move(capsys, g2_system):
    assert run(["move", g2_system, "--moves", "2,-3,-3,2"]) == 0
    data = output(capsys)
    assert data["system"]["axes"] == [[2, 1], [2, 1], [3, 2], [3, 2]]
    assert len(data["log"]["moves"]) == 4


def test_move_operations(capsys, a2_system):
    assert run(["move", a2_system, "--op", "rotate-left"]) == 0
    assert output(capsys)["system"]["axes"] == [[1, 0], [0, 1], [0, 1], [1, 0]]

    assert run(["move", a2_system, "--op", "conjugate-pair", "--at", "1", "--word", "3"]) == 0
    assert output(capsys)["system"]["axes"] == [[1, 1], [1, 1], [0, 1], [0, 1]]

    assert run(["move", a2_system, "--op", "move-pair", "--at", "1"]) == 1


def test_normal_form_then_replay(capsys, tmp_path, g2_system):
    normal = tmp_path / "normal.json"
    assert run(["normal-form", g2_system, "--out", str(normal)]) == 0
    result = json.loads(normal.read_text(encoding="utf-8"))
    assert result["system"]["axes"] == [[1, 0], [1, 0], [0, 1], [0, 1]]

    assert run(["move", g2_system, "--replay", str(normal)]) == 0
    assert output(capsys)["system"] == result["system"]


def test_replay_on_wrong_source(tmp_path, g2_system, a2_system):
    normal = tmp_path / "normal.json"
    assert run(["normal-form", g2_system, "--out", str(normal)]) == 0
    assert run(["move", a2_system, "--replay", str(normal)]) == 1


def test_normal_form_not_generating(tmp_path):
    path = write_json(tmp_path / "sub.json", {"rootsystem": "A2", "axes": [[1, 0]] * 4})
    assert run(["normal-form", path]) == 1


def test_nielsen_reduce(capsys):
    assert run(["nielsen-reduce", "--spec", "A2", "--axes", "[[1, 1], [0, 1]]"]) == 0
    data = output(capsys)
    assert data["trace"] == [[2, 1]]
    assert data["heights"] == [3, 2]
    assert data["subsystem"] == "A2"


def test_orbit(capsys, a2_system):
    assert run(["orbit", a2_system]) == 0
    data = output(capsys)
    assert data["size"] == 24
    hashes = [m["hash"] for m in data["members"]]
    assert hashes == sorted(hashes)


def test_verify(capsys):
    assert run(["verify", "--spec", "A2", "--branching", "n=4"]) == 0
    data = output(capsys)
    assert data["orbit_count"] == 1
    assert data["total_systems"] == 24
    assert data["nielsen_class_count"] == 4


def test_verify_output_independent_of_jobs(capsys):
    argv = ["verify", "--spec", "A2", "--branching", "n=4"]
    assert run(argv + ["--jobs", "1"]) == 0
    serial = capsys.readouterr().out
    assert run(argv + ["--jobs", "8"]) == 0
    assert capsys.readouterr().out == serial
    assert json.loads(serial)["total_systems"] == 24


def test_verify_cap_exceeded():
    assert run(["verify", "--spec", "A2", "--branching", "n=6", "--enumeration-cap", "10"]) == 2


def test_theorem_violation_exit_code(monkeypatch):
    def broken(*args, **kwargs):
        raise TheoremViolationError("two braid orbits", details=[12, 12])

    monkeypatch.setattr(commands, "verify_irreducibility", broken)
    assert run(["verify", "--spec", "A2", "--branching", "n=4"]) == 3


def test_matrix(capsys, tmp_path):
    manifest = tmp_path / "manifest.jsonl"
    manifest.write_text(
        "# small cells\n"
        '{"spec": "A2", "branching": "n=4"}\n'
        "\n"
        '{"spec": "A1+A1", "branching": "n=2;n=2"}\n',
        encoding="utf-8",
    )
    assert run(["matrix", "--manifest", str(manifest)]) == 0
    lines = capsys.readouterr().out.splitlines()
    reports = [json.loads(line) for line in lines]
    assert [r["spec"] for r in reports] == ["A2", "A1+A1"]
    assert [r["total_systems"] for r in reports] == [24, 6]


@pytest.mark.parametrize("argv", [
    ["roots", "Q3"],
    ["roots", "G3"],
    ["verify", "--spec", "A2"],
    ["verify", "--spec", "A2", "--branching", "ns=2,nl=2"],
    ["frobnicate"],
    ["validate", "/nonexistent/system.json"],
])
def test_invalid_input_exit_code(argv):
    assert run(argv) == 1


def test_version(capsys):
    assert run(["--version"]) == 0
