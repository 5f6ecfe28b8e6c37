"""Tests for the command line interface."""

from __future__ import annotations

import json
from typing import TYPE_CHECKING

import pytest

from prm_weights import cli, debug
from prm_weights.harness import run_predict

if TYPE_CHECKING:
    from pathlib import Path

    from prm_weights.gf import FieldSpec


def test_predict(capsys: pytest.CaptureFixture) -> None:
    """Print the prediction as JSON."""
    assert cli.main(["predict", "--q", "3", "--n", "2", "--d", "2"]) == 0
    output = json.loads(capsys.readouterr().out)
    assert output["prediction"]["W2_PRM"] == 9
    assert output["field"] == "GF(3)"
    assert output["status"] == "ok"


def test_field_option(capsys: pytest.CaptureFixture) -> None:
    """Accept an explicit modulus."""
    assert cli.main(["predict", "--field", "4:1,1,1", "--n", "2", "--d", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["field"] == "GF(2^2)"


def test_show_help(capsys: pytest.CaptureFixture) -> None:
    """Show help."""
    with pytest.raises(SystemExit):
        cli.main(["-h"])
    assert "prm-weights" in capsys.readouterr().out


def test_show_version(capsys: pytest.CaptureFixture) -> None:
    """Show version."""
    with pytest.raises(SystemExit):
        cli.main(["-V"])
    assert debug.get_version() in capsys.readouterr().out


def test_show_debug_info(capsys: pytest.CaptureFixture) -> None:
    """Show debug information."""
    with pytest.raises(SystemExit):
        cli.main(["--debug-info"])
    output = capsys.readouterr().out
    assert "Python" in output
    assert "numpy" in output


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["predict", "--q", "3"],
        ["predict", "--q", "3", "--n", "2", "--d", "2", "--format", "xml"],
        ["tables", "--q", "3"],
    ],
)
def test_usage_errors(args: list[str]) -> None:
    """Exit with code 1 on usage errors."""
    with pytest.raises(SystemExit) as exit_info:
        cli.main(args)
    assert exit_info.value.code == 1


@pytest.mark.parametrize(
    ("args", "message"),
    [
        (["predict", "--n", "2", "--d", "2"], "One of --q or --field is required"),
        (["predict", "--q", "6", "--n", "2", "--d", "2"], "not a prime power"),
        (["geometry", "--q", "3", "--n", "2", "--d", "2", "--poly", "X0 + X1"], "homogeneous"),
        (["explore", "--q", "3", "--n", "2", "--d", "2", "--strategies", "annealing"], "Unknown strategies"),
        (["explore", "--q", "3", "--n", "2", "--d", "6", "--strategies", "products"], "in 2..5, got 6"),
        (["predict", "--q", "3", "--n", "2", "--d", "2", "--budget", "0"], "must be positive"),
    ],
)
def test_parameter_errors(args: list[str], message: str, capsys: pytest.CaptureFixture) -> None:
    """Report errors on standard error with exit code 1."""
    assert cli.main(args) == 1
    assert message in capsys.readouterr().err


def test_budget_exceeded(capsys: pytest.CaptureFixture) -> None:
    """Exit with code 3 when an enumeration does not fit the budget."""
    args = ["witness", "--q", "3", "--n", "2", "--d", "2", "--method", "search", "--budget", "10"]
    assert cli.main(args) == 3
    assert "budget" in capsys.readouterr().err


def test_oracle_skipped_within_verify(capsys: pytest.CaptureFixture) -> None:
    """Keep verifying witnesses when the oracle does not fit the budget."""
    assert cli.main(["verify", "--q", "3", "--n", "2", "--d", "2", "--budget", "100"]) == 0
    output = json.loads(capsys.readouterr().out)
    assert output["oracle"] is None
    assert output["notes"]


def test_discrepancy_exit_code(
    gf3: FieldSpec,
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture,
) -> None:
    """Exit with code 2 and still print the record when a discrepancy is found."""
    record = run_predict(gf3, 2, 2)
    record.discrepancies.append("W2_PRM: predicted 9, oracle found 8")
    monkeypatch.setattr(cli, "run_predict", lambda *args: record)
    assert cli.main(["predict", "--q", "3", "--n", "2", "--d", "2"]) == 2
    assert json.loads(capsys.readouterr().out)["status"] == "DISCREPANCY"


def test_verify_markdown_to_file(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    """Write Markdown to the output file."""
    out = tmp_path / "verify.md"
    assert cli.main(["verify", "--q", "3", "--n", "2", "--d", "2", "--format", "md", "--out", str(out)]) == 0
    assert not capsys.readouterr().out
    text = out.read_text(encoding="utf8")
    assert text.startswith("| command |")
    assert "| verify | PRM | GF(3) | 2 | 2 | 6 | 9 | exact | plane-conic |  | 6 | 9 | ok |" in text


@pytest.mark.parametrize(
    ("output_format", "start"),
    [("json", "{"), ("csv", "command,"), ("md", "| command |"), ("html", "<!DOCTYPE html>")],
)
def test_formats(output_format: str, start: str, capsys: pytest.CaptureFixture) -> None:
    """Render records in every format."""
    assert cli.main(["witness", "--q", "3", "--n", "3", "--d", "2", "--kind", "quadric", "--format", output_format]) == 0
    assert capsys.readouterr().out.startswith(start)


def test_tables(capsys: pytest.CaptureFixture) -> None:
    """Regenerate the binary table with oracle checks."""
    assert cli.main(["tables", "--q", "2", "--n-max", "3", "--oracle-dim", "10", "--format", "md"]) == 0
    output = capsys.readouterr().out
    assert output.startswith("## Next-to-minimal weights, q = 2")
    assert "DISCREPANCY" not in output


def test_tables_csv(capsys: pytest.CaptureFixture) -> None:
    """Write one CSV line per instance."""
    assert cli.main(["tables", "--q", "3", "--n-max", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "W2_PRM,W2_RM_prev,bounds,class,d,k,l,n,oracle_W2,status"
    assert len(lines) == 1 + 2 + 4


def test_config_file(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    """Read the output format from the configuration file."""
    config = tmp_path / "prm-weights.yml"
    config.write_text("output_format: md\n", encoding="utf8")
    assert cli.main(["predict", "--q", "3", "--n", "2", "--d", "2", "--config", str(config)]) == 0
    assert capsys.readouterr().out.startswith("| command |")
