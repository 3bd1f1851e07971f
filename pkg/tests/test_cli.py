import json

import pytest
from click.testing import CliRunner

from src.cli import cli


@pytest.fixture
def invoke(samples_dir):
    runner = CliRunner()

    def run(*args):
        args = [str(samples_dir / a) if a.endswith(".gpd") else a for a in args]
        return runner.invoke(cli, list(args))

    return run


def _json(result):
    return json.loads(result.stdout)


def test_validate_sample(invoke):
    result = invoke("validate", "p0_over_u1.gpd", "--emit", "json")
    assert result.exit_code == 0
    assert _json(result)["passed"] is True


def test_validate_broken_table(invoke):
    result = invoke("validate", "broken_table.gpd")
    assert result.exit_code == 1
    assert "associativity fails" in result.stdout


def test_check_univalent_reports_witness(invoke):
    result = invoke("check-univalent", "p0_over_u1.gpd", "p", "--emit", "json")
    assert result.exit_code == 1
    payload = _json(result)
    assert payload["univalent"] is False
    assert payload["witness"]["kind"] == "not_hit"


def test_unknown_name_is_an_error(invoke):
    result = invoke("check-univalent", "p0_over_u1.gpd", "nope", "--emit", "json")
    assert result.exit_code == 2
    assert _json(result)["error"] == "precondition"


def test_check_bm(invoke):
    ok = invoke("check-bm", "squares.gpd", "S", "--emit", "json")
    assert ok.exit_code == 0
    assert _json(ok)["bm_equivalence"] is True
    missed = invoke("check-bm", "squares.gpd", "T", "--emit", "json")
    assert missed.exit_code == 1
    payload = _json(missed)
    assert payload["cartesian"] is True
    assert payload["essentially_surjective"] is False


def test_complete_and_classify(invoke):
    result = invoke("complete", "p0_over_u1.gpd", "p", "-u", "U", "--emit", "json")
    assert result.exit_code == 0
    assert _json(result)["univalent"] is True
    found = invoke("classify", "p0_over_u1.gpd", "p", "-u", "U", "--emit", "json")
    assert found.exit_code == 0
    assert _json(found)["classifying_map"]["objects"] == {"0": "1", "1": "1"}


def test_shape_command(invoke):
    result = invoke("shape", "horn", "2", "1", "--emit", "json")
    assert result.exit_code == 0
    assert _json(result)["shape"]["census"] == [3, 2]


def test_bad_shape_parameters(invoke):
    result = invoke("shape", "horn", "2", "5")
    assert result.exit_code == 2


def test_nonpositive_budget_is_rejected(invoke):
    result = invoke("--budget", "0", "shape", "K")
    assert result.exit_code == 2


def test_harness_single_suite(invoke, tmp_path):
    out, rows = tmp_path / "report.json", tmp_path / "rows.csv"
    result = invoke("harness", "--suite", "shape_census", "-o", str(out), "--rows", str(rows),
                    "--no-timing")
    assert result.exit_code == 0
    assert "shape_census: 2/2 passed" in result.stdout
    report = json.loads(out.read_text())
    assert report["passed"] is True
    assert "elapsed_seconds" not in report
    assert rows.read_text().splitlines()[0] == "suite,index,label,role,status,detail"


def test_harness_rows_without_json_report(invoke, tmp_path):
    rows = tmp_path / "rows.csv"
    result = invoke("harness", "--suite", "shape_census", "--rows", str(rows))
    assert result.exit_code == 0
    lines = rows.read_text().splitlines()
    assert lines[0] == "suite,index,label,role,status,detail,seconds"
    assert len(lines) == 4
    assert not list(tmp_path.glob("*.json"))


def test_harness_fault_injection(invoke):
    result = invoke("harness", "--suite", "shape_census", "--fault", "shape_census")
    assert result.exit_code == 1


def test_check_complete_needs_reedy_fibrancy_or_replace(invoke):
    result = invoke("check-complete", "p0_over_u1.gpd", "p", "--replace", "--emit", "json")
    assert result.exit_code == 1
    payload = _json(result)
    assert payload["complete"] is False


def test_shape_k_census(invoke):
    result = invoke("shape", "K", "--emit", "json")
    assert result.exit_code == 0
    assert _json(result)["shape"]["census"] == [2, 3, 2]
