import json

from coxeter_involutions.app import RunConfig
from coxeter_involutions.cli import EXIT_FAILED, EXIT_OK, EXIT_RESOURCES, EXIT_USAGE, main, merge_config, parse_args
from coxeter_involutions.config import ConfigManager


def test_pair_bc5(capsys):
    assert main(["pair", "BC5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "C5 (full" in out
    assert "c_{0,1} {5} <-> c_{0,4} {2,3,4,5}" in out


def test_pair_falls_back_to_the_centralizer(capsys):
    assert main(["pair", "A4", "--subgroup", "full"]) == EXIT_OK
    assert "A4 (wo" in capsys.readouterr().out


def test_classify_json(capsys):
    assert main(["classify", "F4", "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["type"] == "F4"
    assert payload["spec"] == "full"
    assert len(payload["classes"]) == 8
    assert payload["classes"][4]["reps"] == [[2, 3]]


def test_classify_markdown(capsys):
    assert main(["classify", "H3", "--format", "md"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("### H3")
    assert "| 3 |" in out


def test_orbit_mode_reports_every_class_size(capsys):
    assert main(["classify", "F4", "--mode", "orbit"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()[1:]
    assert [line.rsplit("size=", 1)[1] for line in lines] == ["1", "12", "12", "72", "18", "12", "12", "1"]


def test_table_contains_classes_and_pairing(capsys):
    assert main(["table", "D4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "7 involution classes" in out
    assert "multiplication by w_o" in out
    assert "c- {1,3};{1,2,3} <-> itself" in out


def test_fold_defaults_to_minus_w0(capsys):
    assert main(["fold", "E6"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "-> F4" in out
    assert main(["fold", "D4", "--sigma", "3:4", "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["folded_type"] == "C3"
    assert len(payload["orbits"]) == 3


def test_verify(capsys):
    assert main(["verify", "H4"]) == EXIT_OK
    assert "PASS" in capsys.readouterr().out


def test_verify_failure_exit_code(tmp_path, capsys):
    golden = tmp_path / "golden.txt"
    golden.write_text("F4 | full | 1 | {1} | {1,2,3} | TABLE F4:2\n", encoding="utf-8")
    assert main(["verify", "F4", "--golden-file", str(golden)]) == EXIT_FAILED
    assert "FAIL" in capsys.readouterr().out


def test_bad_type_is_a_usage_error(capsys):
    assert main(["classify", "X9"]) == EXIT_USAGE
    assert "coxinv:" in capsys.readouterr().err


def test_bad_sigma_is_a_usage_error(capsys):
    assert main(["classify", "A3", "--subgroup", "sigma"]) == EXIT_USAGE
    assert main(["fold", "A3", "--sigma", "1:2"]) == EXIT_USAGE
    assert main(["classify", "G2", "--subgroup", "sigma", "--sigma", "1:2"]) == EXIT_USAGE
    assert main(["fold", "G2:8", "--sigma", "1:2"]) == EXIT_OK


def test_bad_memory_budget_is_a_usage_error():
    assert main(["classify", "A3", "--memory-budget", "plenty"]) == EXIT_USAGE


def test_tiny_cap_exceeds_resources(capsys):
    assert main(["classify", "E6", "--mode", "exhaustive", "--cap", "100"]) == EXIT_RESOURCES
    assert "cap" in capsys.readouterr().err


def test_cli_flags_override_config():
    args = parse_args(["classify", "E7", "--mode", "orbit", "--threads", "0", "--subgroup", "wo"])
    merged = merge_config(RunConfig(), args)
    assert merged.mode == "orbit"
    assert merged.threads == 1
    assert merged.subgroup == "wo"
    args = parse_args(["pair", "E7", "--subgroup", "wo"])
    assert merge_config(RunConfig(), args).subgroup == "full"


def test_save_config(capsys):
    assert main(["classify", "A2", "--mode", "exhaustive", "--save-config"]) == EXIT_OK
    assert ConfigManager().load().mode == "exhaustive"


def test_json_output_is_stable(capsys):
    assert main(["table", "H3", "--format", "json", "--threads", "2"]) == EXIT_OK
    first = capsys.readouterr().out
    assert json.dumps(json.loads(first), indent=2, ensure_ascii=False) + "\n" == first
    assert main(["table", "H3", "--format", "json"]) == EXIT_OK
    assert capsys.readouterr().out == first
