import json

import numpy as np
import pytest

from lieharm.reports import VerificationReport, dumps, flag_check, residual_check


def test_residual_and_flag_checks():
    assert residual_check("a", 1e-12, 1e-10).passed
    assert not residual_check("b", 1e-3, 1e-10).passed
    assert flag_check("c", True).passed
    assert not flag_check("d", False).passed


def test_report_rejects_duplicate_names():
    report = VerificationReport("sl2", 0)
    report.add(residual_check("jacobi", 0.0, 1e-10))
    with pytest.raises(ValueError):
        report.add(residual_check("jacobi", 0.0, 1e-10))


def test_report_json_is_plain_and_versioned():
    report = VerificationReport("sl3", 1, seed=7)
    report.add(residual_check("trace", np.float64(2e-13), 1e-10, values=np.array([1.0, 2.0]),
                              point=1 + 2j, bound=-np.inf))
    report.add(flag_check("split", False))
    report.finish()
    data = json.loads(dumps([report]))
    assert data["schema"] == "lieharm-report/1"
    assert data["status"] == "fail"
    assert data["beta_index"] == 1 and data["seed"] == 7
    first = data["sections"][0]
    assert first["details"] == {"values": [1.0, 2.0], "point": {"re": 1.0, "im": 2.0}, "bound": "-inf"}
    assert [s["check_name"] for s in data["sections"]] == ["trace", "split"]


def test_dumps_lists_several_reports():
    reports = [VerificationReport("sl3", 0), VerificationReport("sl3", 1)]
    data = json.loads(dumps(reports))
    assert [r["beta_index"] for r in data] == [0, 1]
    assert all(r["status"] == "pass" for r in data)
