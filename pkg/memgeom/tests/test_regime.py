import numpy as np
import pytest

from ..curves import DiagnosticCurve
from ..datasets import Dataset, SyntheticSpec, split_train_test
from ..regime import (
    GapMask,
    RegimeReport,
    classify_regimes,
    find_crossing,
    find_danger_zone,
    gap_mask,
    regime_report,
    threshold_runs,
)
from ..schedule import edm_schedule, sigma_grid
from ..shells import ShellSpec
from ..utils import read_csv, read_json
from ..testing import assert_allclose, assert_array_equal, assert_equal

SIGMAS = [0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4]


def curves(coverage, weight):
    return DiagnosticCurve(SIGMAS, coverage, name="coverage"), DiagnosticCurve(
        SIGMAS, weight, name="w-sigma"
    )


def test_threshold_runs():
    assert_equal(threshold_runs([True, True, False, True]), [(0, 1), (3, 3)])
    assert_equal(threshold_runs([False, False]), [])
    assert_equal(threshold_runs([True] * 3), [(0, 2)])


def test_find_danger_zone():
    coverage, weight = curves(
        [0.0, 0.2, 0.6, 0.9, 0.95, 0.99, 0.99],
        [1.0, 1.0, 0.9, 0.7, 0.4, 0.2, 0.1],
    )
    assert_equal(find_danger_zone(coverage, weight), (0.4, 0.8))
    assert_equal(find_danger_zone(coverage, weight, 0.1, 0.1), (0.2, 6.4))
    assert find_danger_zone(coverage, weight, 0.95, 0.95) is None
    crossing = find_crossing(coverage, weight)
    assert_equal(crossing, 0.8)


def test_danger_zone_widest_run():
    coverage, weight = curves(
        [0.6, 0.6, 0.0, 0.6, 0.6, 0.6, 0.0],
        [0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9],
    )
    assert_equal(find_danger_zone(coverage, weight), (0.8, 3.2))


def test_danger_zone_antitone():
    """Test for raising the thresholds never widening the danger zone"""
    rng = np.random.default_rng(0)
    for _ in range(20):
        coverage, weight = curves(np.sort(rng.uniform(size=7)), np.sort(rng.uniform(size=7))[::-1])
        zones = [find_danger_zone(coverage, weight, tau, tau) for tau in (0.2, 0.4, 0.6)]
        for wide, narrow in zip(zones[:-1], zones[1:]):
            if narrow is not None:
                assert wide is not None
                assert wide[0] <= narrow[0] and narrow[1] <= wide[1]


def test_find_crossing_floor():
    coverage, weight = curves([0.0] * 7, [1.0] * 7)
    assert find_crossing(coverage, weight) is None
    with pytest.raises(ValueError):
        find_crossing(coverage, DiagnosticCurve([1.0, 2.0], [0.5, 0.5]))


def test_classify_regimes():
    coverage, weight = curves(
        [0.0, 0.2, 0.6, 0.9, 0.95, 0.99, 0.1],
        [1.0, 1.0, 0.9, 0.7, 0.4, 0.2, 0.1],
    )
    report = RegimeReport(coverage, weight, 0.8, (0.4, 0.8), 0.5, 0.5)
    assert_equal(
        classify_regimes(report),
        ["small", "small", "danger", "danger", "large", "large", "transition"],
    )


def test_regime_report_single_point():
    data = Dataset(np.zeros((1, 64)))
    grid = sigma_grid(0.1, 10.0, 5)
    report = regime_report(data, data.values, ShellSpec(64, 5.0), grid, n_noise=500, seed=0)
    assert_array_equal(report.weight_curve.value, np.ones(5))
    assert np.all(report.coverage_curve.value >= 0.9865 - 4 * report.coverage_curve.stderr)
    assert_equal(report.danger_zone, (0.1, 10.0))


def test_regime_report_no_coverage():
    spec = SyntheticSpec("uniform-cube", 20, 32, seed=1)
    train, test = split_train_test(spec, 10)
    report = regime_report(train, test, ShellSpec(32, 5.0), [1e-3, 1e-2], n_noise=20, seed=0)
    assert_array_equal(report.coverage_curve.value, [0.0, 0.0])
    assert report.danger_zone is None
    assert_equal(classify_regimes(report), ["small", "small"])


def test_regime_report_two_clusters():
    """Test for a danger zone that is stable across seeds"""
    spec = SyntheticSpec("two-cluster", 40, 64, seed=2, params={"separation": 1.0, "width": 0.05})
    train, test = split_train_test(spec, 40)
    grid = sigma_grid(0.02, 0.5, 30)
    reports = [
        regime_report(train, test, ShellSpec(64, 5.0), grid, n_noise=100, n_weight_noise=100, seed=s)
        for s in (0, 1)
    ]
    knots = []
    for report in reports:
        assert report.danger_zone is not None
        low, high = report.danger_zone
        assert low <= report.crossing_sigma <= high
        knots.append(np.searchsorted(grid.values, [low, high]))
    assert np.all(np.abs(knots[0] - knots[1]) <= 1)


def test_report_to_json(tmp_path):
    coverage, weight = curves([0.0, 0.2, 0.6, 0.9, 0.95, 0.99, 0.1], [1.0] * 7)
    report = RegimeReport(coverage, weight, None, (0.4, 3.2), 0.5, 0.5)
    document = read_json(report.to_json(tmp_path / "regime.json", meta={"seed": 3}))
    assert_equal(document["danger_zone"], [0.4, 3.2])
    assert document["crossing_sigma"] is None
    assert_equal(document["coverage"], coverage.value.tolist())
    assert document["meta"]["seed"] == 3


def test_gap_mask_edm_schedule():
    schedule = edm_schedule(80.0, 0.002, 18)
    mask = gap_mask((1.0, 5.0), schedule)
    assert_equal(mask.excluded_indices, (8, 9, 10))
    assert_array_equal(np.round(mask.excluded_sigmas, 2), [3.26, 1.92, 1.09])
    assert_array_equal(mask.weight([0.5, 1.0, 3.0, 5.0, 6.0]), [1, 0, 0, 0, 1])
    # a knot is listed exactly when its weight is zero
    assert_array_equal(
        np.flatnonzero(mask.weight(schedule.sigmas) == 0), list(mask.excluded_indices)
    )


def test_gap_mask_buffer():
    schedule = edm_schedule(80.0, 0.002, 18)
    mask = gap_mask((1.0, 5.0), schedule, buffer=0.1)
    assert_equal(mask.excluded_indices, (7, 8, 9, 10))
    assert_allclose(mask.intervals[0], (1 / 1.1, 5.5))
    clipped = gap_mask((0.001, 0.01), schedule, buffer=1.0)
    assert_equal(clipped.intervals[0][0], 0.002)


def test_gap_mask_outside_schedule():
    schedule = edm_schedule(80.0, 0.002, 18)
    with pytest.warns(RuntimeWarning):
        mask = gap_mask((100.0, 200.0), schedule)
    assert_equal(mask.excluded_indices, ())
    assert_equal(mask.weight(150.0), 1.0)


def test_gap_mask_from_report():
    coverage, weight = curves([0.0, 0.2, 0.6, 0.9, 0.95, 0.99, 0.1], [1.0] * 7)
    schedule = edm_schedule(80.0, 0.002, 18)
    report = RegimeReport(coverage, weight, None, None, 0.5, 0.5)
    with pytest.raises(ValueError):
        gap_mask(report, schedule)
    report = RegimeReport(coverage, weight, None, (1.0, 5.0), 0.5, 0.5)
    assert_equal(gap_mask(report, schedule), gap_mask((1.0, 5.0), schedule))
    with pytest.raises(ValueError):
        gap_mask((1.0, 5.0), schedule, buffer=-1.0)


def test_gap_mask_files(tmp_path):
    mask = gap_mask((1.0, 5.0), edm_schedule(80.0, 0.002, 18))
    header, columns, _ = read_csv(mask.to_csv(tmp_path / "mask.csv", [0.5, 2.0, 10.0]))
    assert_equal(header, ["sigma", "weight"])
    assert_equal(columns["weight"], ["1.0", "0.0", "1.0"])
    document = read_json(mask.to_json(tmp_path / "mask.json"))
    assert_equal(document["excluded_indices"], [8, 9, 10])
    assert isinstance(mask, GapMask)
