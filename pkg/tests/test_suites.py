import pytest

from lieharm.catalog import resolve
from lieharm.config import SUITES, VerifyConfig
from lieharm.errors import InvalidParams
from lieharm.suites import VerificationContext, run_verification


def _run(algebra_id, **settings):
    settings.setdefault("samples", 4)
    return run_verification(resolve(algebra_id), VerifyConfig(**settings))


def test_sl2_passes_every_suite():
    reports = _run("sl2")
    assert len(reports) == 1
    report = reports[0]
    assert report.passed, [c.to_json() for c in report.failures]
    names = [c.name for c in report.sections]
    assert len(names) == len(set(names))
    assert "tension_per_direction_traces" in names and "phi_laplacian" in names


def test_tension_is_exactly_zero_for_rank_one():
    report = _run("sl2", checks=["submersion"])[0]
    check = next(c for c in report.sections if c.name == "tension_per_direction_traces")
    assert check.residual == 0.0
    assert check.details["kernel_dimension"] == 0


def test_sl3_submersion_reports_nonzero_fibre_curvature():
    report = _run("sl3", checks=["submersion"], betas=[0])[0]
    assert report.passed, [c.to_json() for c in report.failures]
    fibre = next(c for c in report.sections if c.name == "fiber_second_fundamental")
    assert any(abs(v) > 1e-3 for v in fibre.details["values"].values())
    assert any(c.name == "fibres_not_totally_geodesic" for c in report.sections)


@pytest.mark.parametrize("algebra_id", ["su12", "so23"])
def test_structure_and_lemma1_all_betas(algebra_id):
    reports = _run(algebra_id, checks=["structure", "lemma1"])
    assert all(r.passed for r in reports)
    assert len(reports) == {"su12": 1, "so23": 2}[algebra_id]


def test_su12_curvature_band():
    report = _run("su12", checks=["submersion"])[0]
    names = {c.name: c for c in report.sections}
    assert names["curvature_band"].passed
    assert names["curvature_minimum_attained"].passed


def test_context_rejects_bad_positions_and_suites():
    with pytest.raises(InvalidParams):
        _run("sl3", betas=[2])
    with pytest.raises(InvalidParams):
        _run("sl3", checks=["everything"])


def test_context_caches_expensive_objects(sl3):
    assert sl3.projection(0) is sl3.projection(0)
    assert sl3.geometry(0) is sl3.geometry(0)
    assert sl3.geometry(0, n_scale=0.5) is not sl3.geometry(0)
    assert [p.X.tolist() for p in sl3.points(3)] == [p.X.tolist() for p in sl3.points(5)[:3]]


def test_suite_order_follows_config():
    report = _run("sl2", checks=list(reversed(SUITES)))[0]
    assert report.sections[0].name == "jacobi"
