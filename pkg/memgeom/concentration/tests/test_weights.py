import numpy as np
import pytest

from ... import config
from ...datasets import Dataset, SyntheticSpec, min_pairwise_distance, synthesize
from ...schedule import SigmaGrid
from .._weights import max_vs_self_weight, self_weight_samples, w_sigma_curve
from ...testing import assert_allclose, assert_array_equal, assert_equal


def mixture(n_points=20, dim=16, seed=3):
    means = 4.0 * np.eye(dim)[:4]
    spec = SyntheticSpec(
        "gaussian-mixture", n_points, dim, seed=seed, params={"means": means, "scales": 1.0}
    )
    return synthesize(spec)


def test_w_sigma_small_noise():
    data = mixture()
    sigma = 1e-3 * min_pairwise_distance(data)
    curve = w_sigma_curve(data, [sigma], n_base=10, n_noise=20, seed=0)
    assert_allclose(curve.value, [1.0], rtol=0, atol=1e-12)


def test_w_sigma_large_noise():
    data = mixture()
    sigma = 1e4 * data.diameter()
    curve = w_sigma_curve(data, [sigma], n_base=10, n_noise=20, seed=0)
    assert abs(curve.value[0] - 1 / data.n_points) < 1e-3


def test_w_sigma_range():
    """Test for the [1/N, 1] range of the weight curve"""
    data = mixture()
    grid = SigmaGrid(np.geomspace(0.1, 100, 8))
    curve = w_sigma_curve(data, grid, n_base=20, n_noise=50, seed=1)
    assert np.all(curve.value >= 1 / data.n_points - 1e-12)
    assert np.all(curve.value <= 1 + 1e-12)
    assert_array_equal(curve.n_samples, np.full(8, 20 * 50))
    assert curve.name == "w-sigma"


def test_w_sigma_seed_split():
    data = mixture()
    sigmas = [1.0, 3.0, 10.0]
    first = w_sigma_curve(data, sigmas, n_base=20, n_noise=200, seed=10)
    second = w_sigma_curve(data, sigmas, n_base=20, n_noise=200, seed=11)
    combined = np.hypot(first.stderr, second.stderr)
    assert np.all(np.abs(first.value - second.value) <= 4 * combined + 1e-12)


def test_w_sigma_workers():
    data = mixture()
    with config.config_context(n_workers=1, chunk_size=64):
        serial = w_sigma_curve(data, [2.0, 5.0], n_base=10, n_noise=30, seed=4)
    with config.config_context(n_workers=4, chunk_size=64):
        threaded = w_sigma_curve(data, [2.0, 5.0], n_base=10, n_noise=30, seed=4)
    assert serial == threaded


def test_max_vs_self_single_point():
    data = Dataset([[1.0, -2.0, 0.5]])
    comparison = max_vs_self_weight(data, [0.1, 1.0, 10.0], n_noise=10, seed=0)
    assert_array_equal(comparison.max_weight.value, np.ones(3))
    assert_array_equal(comparison.self_weight.value, np.ones(3))
    assert_array_equal(comparison.gap.value, np.zeros(3))


def test_max_vs_self_gap():
    """Test for the max weight dominating the self weight"""
    data = mixture()
    grid = np.geomspace(1e-3, 30, 6)
    comparison = max_vs_self_weight(data, grid, n_base=20, n_noise=100, seed=2)
    gap = comparison.gap
    assert np.all(gap.value >= -4 * gap.stderr - 1e-15)
    assert gap.value[0] <= 1e-6
    assert_allclose(
        gap.value, comparison.max_weight.value - comparison.self_weight.value, atol=1e-12
    )
    max_weight, self_weight = comparison
    assert_equal(max_weight, comparison.max_weight)


def test_w_sigma_matches_max_curve():
    data = mixture()
    curve = w_sigma_curve(data, [1.0, 4.0], n_base=5, n_noise=20, seed=8)
    comparison = max_vs_self_weight(data, [1.0, 4.0], n_base=5, n_noise=20, seed=8)
    assert_array_equal(curve.value, comparison.max_weight.value)


def test_self_weight_samples():
    data = Dataset([[0.0], [1.0]])
    weights = self_weight_samples(data, [0, 1], 0.3, 7, seed=5)
    assert weights.shape == (14, 2)
    assert np.all(weights[:, 0] >= weights[:, 1])


def test_weight_curve_errors():
    data = mixture()
    with pytest.raises(ValueError):
        w_sigma_curve(data, [1.0], n_base=data.n_points + 1, seed=0)
    with pytest.raises(ValueError):
        w_sigma_curve(data, [1.0], n_noise=0, seed=0)
    with pytest.raises(ValueError):
        w_sigma_curve(data, [-1.0], seed=0)
