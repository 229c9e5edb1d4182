import json
from pathlib import Path
from typing import Any, Dict, List

import pytest
from metastability import runner as runner_module
from metastability.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main
from metastability.numerics import Caps
from metastability.oracle import Outcome
from metastability.protocol import Scenario


@pytest.fixture(autouse=True)
def _env(clean_env: None) -> None:
    pass


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def test_gen_is_deterministic(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    first = str(tmp_path / "a.json")
    second = str(tmp_path / "b.json")
    for path in (first, second):
        assert main(["gen", "--seed", "3", "--count", "6", "-o", path]) == EXIT_OK
    assert _read(first) == _read(second)
    assert main(["gen", "--seed", "3", "--count", "6"]) == EXIT_OK
    assert capsys.readouterr().out == _read(first)


def test_gen_one_theorem(capsys: pytest.CaptureFixture[str]) -> None:
    args = ["gen", "--count", "4", "--theorem", "lipschitz", "--profile", "easy"]
    assert main(args) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert {item["theorem"] for item in data["scenarios"]} == {"lipschitz"}


def test_verify(
    tmp_path: Path, smoke_file: str, capsys: pytest.CaptureFixture[str]
) -> None:
    output = str(tmp_path / "report.json")
    assert main(["verify", smoke_file, "-o", output, "--jobs", "2"]) == EXIT_OK
    report = json.loads(_read(output))
    assert report["summary"]["sound"] == 3
    assert report["summary"]["total"] == 3
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "3 scenarios: 3 sound" in captured.err

    csv_path = str(tmp_path / "plot.csv")
    assert main(["plot-data", output, "-o", csv_path]) == EXIT_OK
    assert _read(csv_path).splitlines() == [
        "id,epsilon,bound,least_n,ratio",
        "smoke-ishikawa-identity,1/2,288,0,0/1",
        "smoke-km-identity,1/2,336,0,0/1",
        "smoke-lipschitz-tent,1/2,0,0,0/0 exact",
    ]


def test_verify_reports_failures(
    monkeypatch: pytest.MonkeyPatch,
    smoke_file: str,
    capsys: pytest.CaptureFixture[str],
) -> None:
    def verify(scenario: Scenario, caps: Caps) -> Outcome:
        raise ZeroDivisionError("division by zero")

    monkeypatch.setattr(runner_module, "verify_scenario", verify)
    assert main(["verify", smoke_file]) == EXIT_FAILED
    report = json.loads(capsys.readouterr().out)
    assert report["summary"]["failed"] == 3
    assert report["entries"][0]["reason"] == "ZeroDivisionError: division by zero"


def test_verify_timings(smoke_file: str, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", smoke_file, "--timings"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert all("wall_time" in entry for entry in report["entries"])


def test_bound(
    tmp_path: Path, smoke_file: str, capsys: pytest.CaptureFixture[str]
) -> None:
    output = str(tmp_path / "bounds.json")
    args = ["bound", smoke_file, "--id", "smoke-km-identity", "-o", output]
    assert main(args) == EXIT_OK
    out = capsys.readouterr().out
    assert "smoke-km-identity (km, epsilon = 1/2)" in out
    assert "  bound: 336" in out
    assert "ishikawa" not in out
    (result,) = json.loads(_read(output))
    assert result["bound"] == "336"
    assert len(result["trace"]["u"]) == 289


def test_bound_cap(smoke_file: str, capsys: pytest.CaptureFixture[str]) -> None:
    args = ["bound", smoke_file, "--id", "smoke-km-identity", "--cap-bits", "4"]
    assert main(args) == EXIT_OK
    assert "bound too large to compute" in capsys.readouterr().out


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "missing.json"],
        ["bound", "missing.json"],
        ["plot-data", "missing.json"],
        ["gen", "--count", "-1"],
    ],
)
def test_input_errors(args: List[str]) -> None:
    assert main(args) == EXIT_INPUT


def test_malformed_files(tmp_path: Path) -> None:
    path = str(tmp_path / "broken.json")
    with open(path, "w", encoding="utf-8") as f:
        f.write('{"version": 1, "scenarios": [')
    assert main(["verify", path]) == EXIT_INPUT
    assert main(["plot-data", path]) == EXIT_INPUT
    with open(path, "w", encoding="utf-8") as f:
        f.write('{"version": 1, "scenarios": [{"id": "x"}]}')
    assert main(["bound", path]) == EXIT_INPUT


def test_bad_environment(monkeypatch: pytest.MonkeyPatch, smoke_file: str) -> None:
    monkeypatch.setenv("METASTABILITY_SEARCH", "many")
    assert main(["verify", smoke_file]) == EXIT_INPUT
    assert main(["gen", "--count", "1"]) == EXIT_INPUT


def test_bad_arguments() -> None:
    with pytest.raises(SystemExit) as info:
        main(["verify", "x.json", "--jobs", "0"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main([])


def _fmcp_file(tmp_path: Path, **changes: Any) -> str:
    item: Dict[str, Any] = {
        "id": "fmcp-identity",
        "theorem": "fmcp",
        "f": [[0, 1, 0, 1], [1, 1, 1, 1]],
        "t": {"kind": "harmonic"},
        "x0": "1/3",
        "epsilon": "1/2",
        "g": {"kind": "constant", "c": 1},
    }
    item.update(changes)
    path = str(tmp_path / "fmcp.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"version": 1, "scenarios": [item]}, f)
    return path


def test_verify_string_caps(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    path = _fmcp_file(tmp_path, caps={"horizon": "500"})
    assert main(["verify", path]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["entries"][0]["status"] == "sound"


def test_verify_ishikawa_without_inner_schedule(tmp_path: Path) -> None:
    path = _fmcp_file(tmp_path, scheme="ishikawa")
    assert main(["verify", path]) == EXIT_INPUT
    assert main(["bound", path]) == EXIT_INPUT
