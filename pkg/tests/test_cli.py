import json

import pytest

from lieharm.cli import (EXIT_FAILED_CHECK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, format_complex,
                         main)


def _strip_timestamps(text):
    data = json.loads(text)
    for report in data if isinstance(data, list) else [data]:
        report.pop("timestamps")
    return data


def test_analyze_sl3(capsys):
    assert main(["analyze", "sl3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "rank 2" in out and "positive roots (3)" in out
    assert out.count("real hyperbolic space of dimension 2") == 2


def test_analyze_su12_json(capsys):
    assert main(["analyze", "su12", "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    beta = data["simple_roots"][0]
    assert (data["rank"], beta["m_beta"], beta["m_2beta"], beta["dim_M_beta"]) == (1, 2, 1, 4)
    assert beta["hyperbolic_type"] == "complex"
    assert beta["harmonic_morphism"] == "isotropic"
    assert data["split"] is False


def test_analyze_g2split_json(capsys):
    assert main(["analyze", "g2split", "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["rank"] == 2
    assert [r["multiplicity"] for r in data["positive_roots"]] == [1] * 6


def test_unknown_algebra_exits_with_input_error(capsys):
    assert main(["analyze", "e8"]) == EXIT_INPUT
    assert "unknown algebra" in capsys.readouterr().err


def test_eval_phi_at_identity(capsys):
    assert main(["eval", "sl3", '{"X": [0, 0, 0], "H": [0, 0]}']) == EXIT_OK
    assert capsys.readouterr().out.strip() == "0+1i"


def test_eval_phi_sl2_has_real_part(capsys):
    assert main(["eval", "sl2", '{"X": [1], "H": [0]}']) == EXIT_OK
    out = capsys.readouterr().out.strip()
    assert out.endswith("+1i") and not out.startswith("0+")


def test_eval_pullback(capsys):
    assert main(["eval", "sl3", "--beta", "1", "--map", "pullback:eigen", '{"X": [0, 0, 0], "H": [0, 0]}']) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1+0i"


@pytest.mark.parametrize("algebra_id, point", [
    ("sl3", '{"X": [0, 0], "H": [0, 0]}'),
    ("sl3", "[1, 2]"),
    ("sl3", "{not json"),
    ("sl2", '{"X": [NaN], "H": [0]}'),
    ("sl2", '{"X": [0], "H": [Infinity]}'),
])
def test_eval_rejects_malformed_points(algebra_id, point):
    assert main(["eval", algebra_id, point]) == EXIT_INPUT


def test_eval_overflow_is_a_numerical_failure(capsys):
    assert main(["eval", "sl2", '{"X": [1e308], "H": [1e308]}']) == EXIT_NUMERICAL
    captured = capsys.readouterr()
    assert captured.out == "" and "numerical failure" in captured.err


def test_eval_rejects_unknown_map():
    assert main(["eval", "sl3", "--map", "psi", '{"X": [0, 0, 0], "H": [0, 0]}']) == EXIT_INPUT


def test_verify_structure_json(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code = main(["verify", "sl3", "--all-betas", "--checks", "structure,lemma1", "--json",
                 "--out", str(out_file)])
    assert code == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert [r["beta_index"] for r in data] == [0, 1]
    assert all(r["schema"] == "lieharm-report/1" and r["status"] == "pass" for r in data)
    assert json.loads(out_file.read_text()) == data


def test_verify_is_deterministic(capsys):
    args = ["verify", "sl2", "--checks", "morphism", "--samples", "3", "--seed", "7", "--json"]
    assert main(args) == EXIT_OK
    first = _strip_timestamps(capsys.readouterr().out)
    assert main(args) == EXIT_OK
    second = _strip_timestamps(capsys.readouterr().out)
    assert first == second


def test_verify_reports_failed_checks(capsys):
    code = main(["verify", "sl2", "--checks", "morphism", "--samples", "3", "--tol", "1e-30"])
    assert code == EXIT_FAILED_CHECK
    assert "FAIL" in capsys.readouterr().out


def test_verify_input_errors():
    assert main(["verify", "sl2", "--checks", "bogus"]) == EXIT_INPUT
    assert main(["verify", "sl2", "--beta", "3"]) == EXIT_INPUT
    assert main(["verify", "sl2", "--checks", "morphism", "--samples", "2", "--step", "1e-8"]) == EXIT_INPUT


def test_format_complex():
    assert format_complex(1j) == "0+1i"
    assert format_complex(0.5 - 2j) == "0.5-2i"


def test_verify_unwritable_report_path(tmp_path, capsys):
    out_file = tmp_path / "missing" / "r.json"
    assert main(["verify", "sl2", "--checks", "structure", "--out", str(out_file)]) == EXIT_INPUT
    assert "cannot write report" in capsys.readouterr().err
    assert not out_file.exists()


def test_verify_rejects_small_step_before_running():
    assert main(["verify", "sl2", "--checks", "structure", "--step", "1e-9"]) == EXIT_INPUT
