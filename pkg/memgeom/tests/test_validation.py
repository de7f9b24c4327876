import pytest

from ..validation import (
    FULL_BUDGET,
    QUICK_BUDGET,
    CheckResult,
    ValidationSummary,
    check_names,
    run_validation,
)
from ..testing import assert_equal


def test_run_validation_quick():
    """Test for the whole property suite with reduced sample counts"""
    summary = run_validation(quick=True, seed=0)
    assert summary.passed, str(summary)
    assert_equal([result.name for result in summary.results], list(check_names()))
    assert summary.quick


def test_run_validation_subset(capsys):
    summary = run_validation(quick=True, checks=["denoiser-exactness", "circulant-bound"], verbose=1)
    assert_equal(len(summary.results), 2)
    assert str(summary).endswith("2/2 checks passed")
    assert "denoiser-exactness: PASS" in capsys.readouterr().out
    document = summary.to_dict()
    assert "seconds" not in document["checks"][0]
    assert "seconds" in summary.to_dict(timings=True)["checks"][0]


def test_run_validation_unknown_check():
    with pytest.raises(ValueError):
        run_validation(quick=True, checks=["shell-concentration", "telepathy"])


def test_summary_failures():
    summary = ValidationSummary(
        (CheckResult("a", True, "", 0.1), CheckResult("b", False, "off by one", 0.2)), False, 1
    )
    assert not summary.passed
    assert_equal(summary.failed, ("b",))
    assert "FAIL" in str(summary)
    assert str(summary).endswith("1/2 checks passed")


def test_quick_budget_is_smaller():
    assert QUICK_BUDGET.shell_samples < FULL_BUDGET.shell_samples
    assert QUICK_BUDGET.threshold_trials < FULL_BUDGET.threshold_trials
    assert QUICK_BUDGET.n_sigma >= FULL_BUDGET.n_sigma
