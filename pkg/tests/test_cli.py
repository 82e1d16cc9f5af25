import inspect
import json

import pytest
from click.testing import CliRunner

from matic import __version__
from matic.cli import cli
from matic.monitoring import configure_logging


@pytest.fixture
def runner():
    # click 8.2 keeps stderr apart by default and dropped mix_stderr
    if "mix_stderr" in inspect.signature(CliRunner.__init__).parameters:
        return CliRunner(mix_stderr=False)
    return CliRunner()


def _invoke(runner, tmp_path, *args):
    return runner.invoke(cli, ["--out", str(tmp_path), *args])


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_demo_garage_prints_the_summary(runner, tmp_path):
    result = _invoke(runner, tmp_path, "demo", "garage")
    assert result.exit_code == 0, result.stderr
    summary = json.loads(result.stdout)
    assert summary["result"]["cause"] == "e2"
    assert "✅ demo garage finished" in result.stderr
    assert (tmp_path / "timing.json").exists()


def test_csv_format_prints_metrics(runner, tmp_path):
    result = _invoke(runner, tmp_path, "--format", "csv", "demo", "garage")
    assert result.exit_code == 0, result.stderr
    lines = result.stdout.splitlines()
    assert lines[0] == "rank,cause,cause_label,context,context_size,surprisal_bits"
    assert len(lines) == 5


def test_infer_on_shipped_files(runner, tmp_path, scenarios_dir):
    result = _invoke(
        runner,
        tmp_path,
        "infer",
        "--trace", str(scenarios_dir / "garage_trace.json"),
        "--corpus", str(scenarios_dir / "garage_corpus.json"),
        "--event", "e3",
        "--bank",
    )
    assert result.exit_code == 0, result.stderr
    summary = json.loads(result.stdout)
    assert summary["result"]["cause"] == "e2"
    assert summary["result"]["bank_agrees"] is True


def test_infer_on_first_event_is_a_data_error(runner, tmp_path, scenarios_dir):
    result = _invoke(
        runner,
        tmp_path,
        "infer",
        "--trace", str(scenarios_dir / "garage_trace.json"),
        "--corpus", str(scenarios_dir / "garage_corpus.json"),
        "--event", "e1",
    )
    assert result.exit_code == 3
    assert "❌ Data error" in result.stderr


def test_stationarity_on_context_switch(runner, tmp_path, scenarios_dir):
    result = _invoke(runner, tmp_path, "stationarity", "--scenario", str(scenarios_dir / "context_switch.json"))
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["result"]["verdict"] == "non_stationary"


def test_stationarity_needs_a_source(runner, tmp_path):
    result = _invoke(runner, tmp_path, "stationarity")
    assert result.exit_code == 2


def test_missing_scenario_file_names_the_path(runner, tmp_path):
    missing = tmp_path / "missing.json"
    result = _invoke(runner, tmp_path, "demo", "receiver", "--scenario", str(missing))
    assert result.exit_code == 2
    assert str(missing) in result.stderr


def test_small_receiver_scenario(runner, tmp_path):
    scenario = tmp_path / "receiver.json"
    scenario.write_text(json.dumps({"noiseless_symbols": 200, "ebn0_db": [4.0], "symbols": 2000}))
    result = _invoke(runner, tmp_path / "out", "demo", "receiver", "--scenario", str(scenario))
    assert result.exit_code == 0, result.stderr
    summary = json.loads(result.stdout)["result"]
    assert summary["noiseless_bit_exact"] is True
    assert [p["ebn0_db"] for p in summary["points"]] == [4.0]


def test_character_demo(runner, tmp_path):
    result = _invoke(runner, tmp_path, "--seed", "5", "demo", "character")
    assert result.exit_code == 0, result.stderr
    summary = json.loads(result.stdout)["result"]
    assert summary["forbidden_transitions"] == 0
    assert summary["max_quaternion_norm_error"] < 1e-9


def test_logic_check_single_formula(runner, tmp_path):
    result = _invoke(runner, tmp_path, "logic", "check", "x in x")
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["result"]["stratified"] == 0


def test_logic_check_file(runner, tmp_path, scenarios_dir):
    result = _invoke(runner, tmp_path, "--format", "csv", "logic", "check", "--file", str(scenarios_dir / "formulas.txt"))
    assert result.exit_code == 0, result.stderr
    assert len(result.stdout.splitlines()) == 6


def test_logic_transfer_reports_illegal_transfer(runner, tmp_path):
    result = _invoke(runner, tmp_path, "logic", "transfer", "forall^st n . n <= m")
    assert result.exit_code == 0, result.stderr
    verdict = json.loads(result.stdout)["result"]["verdicts"][0]
    assert verdict["legal"] is False
    assert verdict["reason"] == "NonStandardParameter"
    legal = _invoke(runner, tmp_path, "logic", "transfer", "forall^st n . n <= m", "--standard", "m")
    assert json.loads(legal.stdout)["result"]["verdicts"][0]["result"] == "forall n . n <= m"


def test_logic_syntax_error_exits_with_data_code(runner, tmp_path):
    result = _invoke(runner, tmp_path, "logic", "check", "x in ]")
    assert result.exit_code == 3
    assert "position 5" in result.stderr


def test_logic_needs_formula_or_file(runner, tmp_path):
    assert _invoke(runner, tmp_path, "logic", "check").exit_code == 2


def test_model_fit_then_infer_from_saved_model(runner, tmp_path, scenarios_dir):
    fit = _invoke(runner, tmp_path / "fit", "model", "fit", "--corpus", str(scenarios_dir / "garage_corpus.json"))
    assert fit.exit_code == 0, fit.stderr
    model = tmp_path / "fit" / "model.json"
    result = _invoke(
        runner,
        tmp_path / "infer",
        "infer",
        "--trace", str(scenarios_dir / "garage_trace.json"),
        "--model", str(model),
    )
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["result"]["cause"] == "e2"


def test_net_check_and_gcm_run(runner, tmp_path, scenarios_dir):
    net = _invoke(runner, tmp_path / "net", "net", "check", str(scenarios_dir / "nand_network.json"))
    assert net.exit_code == 0, net.stderr
    assert json.loads(net.stdout)["result"]["verdict"] == "Acyclic"
    gcm = _invoke(runner, tmp_path / "gcm", "gcm", "run", str(scenarios_dir / "and_gate.json"))
    assert gcm.exit_code == 0, gcm.stderr
    assert json.loads(gcm.stdout)["result"]["ticks"] == 4


def test_trace_validate_with_chain(runner, tmp_path, scenarios_dir):
    result = _invoke(
        runner, tmp_path, "trace", "validate", str(scenarios_dir / "garage_trace.json"), "--chain", "e1,e2,e3"
    )
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["result"]["chain"]["status"] == "valid"


def test_seed_out_of_range_is_a_usage_error(runner, tmp_path):
    result = _invoke(runner, tmp_path, "--seed", "-1", "demo", "garage")
    assert result.exit_code == 2


def test_net_check_reads_a_predicate_with_the_configured_threshold(runner, tmp_path, scenarios_dir):
    args = ("net", "check", str(scenarios_dir / "nand_network.json"), "--stimuli", str(scenarios_dir / "nand_stimuli.json"))
    result = _invoke(runner, tmp_path / "a", *args)
    assert result.exit_code == 0, result.stderr
    predicate = json.loads(result.stdout)["result"]["predicate"]
    assert predicate["extension"] == {"both": 0, "left": 1, "mixed": 0, "none": 1}
    assert predicate["cardinality"] == 2
    assert predicate["threshold"] == 0.5
    lowered = _invoke(runner, tmp_path / "b", *args, "--threshold", "0.2")
    assert json.loads(lowered.stdout)["result"]["predicate"]["cardinality"] == 3


def test_debug_logging_covers_inference(runner, tmp_path, scenarios_dir):
    try:
        result = _invoke(
            runner,
            tmp_path,
            "--log-level", "DEBUG",
            "infer",
            "--trace", str(scenarios_dir / "garage_trace.json"),
            "--corpus", str(scenarios_dir / "garage_corpus.json"),
            "--event", "e3",
            "--bank",
        )
    finally:
        configure_logging("WARNING")
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["result"]["cause"] == "e2"
    assert '"event_id": "e3"' in result.stderr
