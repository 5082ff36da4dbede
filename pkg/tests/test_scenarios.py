import json

import pytest

import config
from models.errors import ScenarioParseError, ScenarioValidationError
from models.scenario import Expectation, Scenario
from viewmodels.scenario_viewmodel import CHECKS, CheckOutcome, ScenarioViewModel

BUNDLED = sorted(config.SCENARIO_DIR.glob("*.json"))

DIAMOND = {
    "name": "diamond",
    "seed": 1,
    "relations": {"n": 4, "edges": [[0, 1], [0, 2], [1, 3], [2, 3]]},
    "slices": {"antichains": [[1, 2]]},
    "marked_point": {"id": 1},
}


@pytest.fixture
def vm(tmp_path):
    return ScenarioViewModel(output_dir=tmp_path)


def write_scenario(tmp_path, checks, **extra):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps({**DIAMOND, **extra, "checks": checks}), encoding="utf-8")
    return path


@pytest.mark.parametrize("path", BUNDLED, ids=lambda p: p.stem)
def test_bundled_scenarios_are_satisfied(vm, path):
    report = vm.run_scenario(path)
    unsatisfied = [c.name for c in report.checks if not c.satisfied]
    assert not unsatisfied
    assert report.exit_code == config.EXIT_OK


def test_every_check_is_exercised_by_a_bundled_scenario():
    used = set()
    for path in BUNDLED:
        used.update(check["name"] for check in json.loads(path.read_text(encoding="utf-8"))["checks"])
    assert set(CHECKS) <= used


def test_reports_do_not_depend_on_worker_count(vm, tmp_path):
    path = config.SCENARIO_DIR / "prop33_sprinkle.json"
    serial = vm.run_scenario(path, out=tmp_path / "serial.json", jobs=1)
    parallel = vm.run_scenario(path, out=tmp_path / "parallel.json", jobs=2)
    assert vm.report_diff(serial.to_dict(), parallel.to_dict()) == []
    assert vm.report_diff(tmp_path / "serial.json", tmp_path / "parallel.json") == []


def test_report_diff_ignores_timing_and_finds_changes(vm):
    first = {"generated_at": "a", "checks": [{"wall_time": 1.0, "verdict": True}]}
    second = {"generated_at": "b", "checks": [{"wall_time": 2.0, "verdict": False}]}
    assert vm.report_diff(first, second) == ["checks[0].verdict: True != False"]
    assert vm.report_diff({"a": 1}, {}) == ["a: only in first"]


def test_parse_error_carries_the_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "name": "x",\n  "checks": [\n', encoding="utf-8")
    with pytest.raises(ScenarioParseError) as info:
        ScenarioViewModel.load_scenario(path)
    assert info.value.line is not None


def test_missing_file_is_a_parse_error(tmp_path):
    with pytest.raises(ScenarioParseError):
        ScenarioViewModel.load_scenario(tmp_path / "missing.json")


@pytest.mark.parametrize("data, field", [
    ({**DIAMOND, "checks": [{"name": "haag"}], "colour": "red"}, "colour"),
    ({**DIAMOND, "checks": []}, "checks"),
    ({**DIAMOND, "checks": [{"name": "haag", "expect": "maybe"}]}, "checks[0].expect"),
    ({"name": "x", "points": [], "checks": [{"name": "haag"}]}, "model"),
    ({**DIAMOND, "slices": {"levels": [0.0]}, "checks": [{"name": "haag"}]}, "slices.levels"),
])
def test_validation_errors_name_the_field(data, field):
    with pytest.raises(ScenarioValidationError) as info:
        Scenario.from_dict(data)
    assert info.value.field == field


def test_scenario_defaults():
    scenario = Scenario.from_dict({**DIAMOND, "checks": [{"name": "haag"}]})
    assert scenario.checks[0].expect is Expectation.MUST_HOLD
    assert scenario.grid_h == config.DEFAULT_GRID_H
    assert not scenario.fail_fast


def test_unknown_check_is_rejected_before_running(vm, tmp_path):
    path = write_scenario(tmp_path, [{"name": "no_such_check"}])
    with pytest.raises(ScenarioValidationError):
        vm.run_scenario(path)


def test_expectations(vm, tmp_path):
    path = write_scenario(tmp_path, [
        {"name": "haag", "expect": "must-fail", "params": {"d1": [1]}},
        {"name": "haag", "expect": "report", "params": {"d1": [1]}},
        {"name": "haag", "params": {"d1": [1]}},
    ])
    report = vm.run_scenario(path)
    assert [c.verdict for c in report.checks] == [False, False, False]
    assert [c.satisfied for c in report.checks] == [True, True, False]
    assert report.exit_code == config.EXIT_CHECK_FAILED
    assert report.provenance["points"] == 4


def test_parameter_errors_are_never_satisfied(vm, tmp_path):
    path = write_scenario(tmp_path, [{"name": "domain_of_dependence", "expect": "report"}])
    result = vm.run_scenario(path).checks[0]
    assert result.flags["parameter_error"]
    assert not result.satisfied


def test_domain_errors_need_a_named_expected_error(vm, tmp_path):
    params = {"d1": [0]}
    path = write_scenario(tmp_path, [
        {"name": "punctured_hd", "expect": "must-fail", "params": params},
        {"name": "punctured_hd", "expect": "must-fail", "params": params, "raises": "PreconditionShadowError"},
        {"name": "punctured_hd", "expect": "must-fail", "params": params, "raises": "NoSupersetError"},
    ])
    results = vm.run_scenario(path).checks
    assert all(not r.verdict and r.flags["raised"] for r in results)
    assert [r.satisfied for r in results] == [False, True, False]
    assert results[0].details["error"] == "PreconditionShadowError"


def test_expected_error_that_is_not_raised_is_unsatisfied(vm, tmp_path):
    path = write_scenario(tmp_path, [
        {"name": "haag", "expect": "must-fail", "params": {"d1": [1]}, "raises": "NoSupersetError"},
    ])
    result = vm.run_scenario(path).checks[0]
    assert not result.verdict and not result.satisfied


def test_raises_is_only_valid_on_must_fail_checks():
    with pytest.raises(ScenarioValidationError) as info:
        Scenario.from_dict({**DIAMOND, "checks": [{"name": "haag", "raises": "NoSupersetError"}]})
    assert info.value.field == "checks[0].raises"


ANTICHAIN = {"relations": {"n": 3, "edges": []}, "slices": {"antichains": [[0, 1, 2]]}, "marked_point": {"id": 2}}


def test_ambient_failure_outside_the_shadow_is_unexplained(vm, tmp_path):
    path = write_scenario(tmp_path, [
        {"name": "punctured_hd", "expect": "must-fail", "params": {"mode": "ambient"}},
        {"name": "punctured_hd", "expect": "must-fail", "params": {"mode": "ambient", "family": [[0]]}},
    ], **ANTICHAIN)
    explained, uncovered = vm.run_scenario(path).checks
    assert not explained.verdict and explained.satisfied
    assert explained.flags["failure_explained"]
    # nothing covers site 1, so the failure is not confined to J(2)
    assert not uncovered.verdict and not uncovered.satisfied
    assert not uncovered.flags["failure_explained"]
    assert uncovered.details["regions"][0]["failure_in_shadow"] is False


def test_unexplained_failures_never_satisfy_must_fail(vm, tmp_path, monkeypatch):
    monkeypatch.setitem(CHECKS, "order_axioms",
                        lambda ctx, params, rng: CheckOutcome(False, {}, None, {'failure_explained': False}))
    path = write_scenario(tmp_path, [
        {"name": "order_axioms", "expect": "must-fail"},
        {"name": "order_axioms", "expect": "report"},
    ])
    must_fail, report = vm.run_scenario(path).checks
    assert not must_fail.satisfied
    assert report.satisfied


def test_fail_fast_stops_at_the_first_unsatisfied_check(vm, tmp_path):
    checks = [{"name": "haag", "params": {"d1": [1]}}, {"name": "order_axioms"}]
    path = write_scenario(tmp_path, checks, fail_fast=True)
    assert [c.name for c in vm.run_scenario(path).checks] == ["haag"]
    path = write_scenario(tmp_path, checks)
    assert len(vm.run_scenario(path).checks) == 2
    assert len(vm.run_scenario(path, fail_fast=True).checks) == 1


def test_report_is_written_atomically(vm, tmp_path):
    path = write_scenario(tmp_path, [{"name": "order_axioms"}])
    out = tmp_path / "reports" / "diamond.json"
    vm.run_scenario(path, out=out)
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["summary"] == {"total": 1, "satisfied": 1, "exit_code": 0}
    assert data["artifact_version"] == config.APP_VERSION
    assert not list(out.parent.glob("*.tmp"))


def test_negative_control_contrasts_ambient_and_excised(vm):
    report = vm.run_scenario(config.SCENARIO_DIR / "ambient_negative_control.json")
    ambient, excised = [c for c in report.checks if c.name == "punctured_hd"]
    assert ambient.expect is Expectation.MUST_FAIL and excised.expect is Expectation.MUST_HOLD
    assert [r["d1"] for r in ambient.details["regions"]] == [[5], [6]]
    assert not any(r["holds"] for r in ambient.details["regions"])
    assert all(r["failure_in_shadow"] for r in ambient.details["regions"])
    assert ambient.flags["failure_explained"] and ambient.satisfied
    assert excised.verdict and excised.satisfied
    assert [r["d1"] for r in excised.details["regions"]] == [[5], [6]]


def test_sprinkled_scenario_moves_interior_slices_through_the_point(vm):
    path = config.SCENARIO_DIR / "prop33_sprinkle.json"
    scenario = vm.load_scenario(path)
    assert len(scenario.slices.levels) > 2
    results = {c.name: c for c in vm.run_scenario(path).checks}
    through = results["slice_through_point"]
    assert through.expect is Expectation.MUST_HOLD and through.verdict
    assert all(s["valid"] for s in through.details["slices"].values())
    assert results["prop33"].details["checked"] > 0
