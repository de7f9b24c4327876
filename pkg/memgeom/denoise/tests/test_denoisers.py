from decimal import Decimal, localcontext

import numpy as np
import pytest

from ...datasets import Dataset
from .._denoisers import (
    CompositeDenoiser,
    ConstantDenoiser,
    EmpiricalDenoiser,
    GaussianDenoiser,
    GaussianModel,
    IdentityDenoiser,
    denoiser_from_dict,
    denoiser_to_dict,
    gaussian_from_dataset,
)
from .test_weights import decimal_weights
from ...testing import assert_allclose, assert_array_equal, assert_equal


def test_empirical_denoiser_single_point():
    data = Dataset([[1.5, -2.0, 0.25]])
    denoiser = EmpiricalDenoiser(data)
    rng = np.random.default_rng(0)
    for sigma in [1e-3, 1.0, 1e4]:
        assert_array_equal(denoiser(rng.standard_normal(3), sigma), data[0])


@pytest.mark.parametrize("n_points, dim", [(2, 1), (5, 3), (10, 4)])
def test_empirical_denoiser_oracle(n_points, dim):
    """Matches a 200-digit evaluation of sum_i w_i x_i"""
    rng = np.random.default_rng(n_points)
    values = rng.standard_normal((n_points, dim))
    x = rng.standard_normal(dim)
    sigma = 0.6
    with localcontext() as context:
        context.prec = 200
        weights = decimal_weights(values, x, sigma)
        expected = [
            float(sum(w * Decimal(float(values[i, k])) for i, w in enumerate(weights)))
            for k in range(dim)
        ]
    result = EmpiricalDenoiser(Dataset(values))(x, sigma)
    assert_allclose(result, expected, rtol=1e-12, atol=1e-12 * np.max(np.abs(values)))


def test_empirical_denoiser_batch():
    rng = np.random.default_rng(3)
    denoiser = EmpiricalDenoiser(Dataset(rng.standard_normal((7, 2))))
    points = rng.standard_normal((5, 2))
    batch = denoiser(points, 0.4)
    assert_equal(batch.shape, (5, 2))
    for point, out in zip(points, batch):
        assert_allclose(denoiser(point, 0.4), out, rtol=1e-15)


def test_empirical_denoiser_convex_hull():
    rng = np.random.default_rng(4)
    data = Dataset(rng.uniform(-1, 1, size=(12, 3)))
    denoiser = EmpiricalDenoiser(data)
    points = 5 * rng.standard_normal((50, 3))
    low, high = data.values.min(axis=0), data.values.max(axis=0)
    for sigma in [1e-2, 0.5, 20.0]:
        out = denoiser(points, sigma)
        assert np.all(out >= low - 1e-9) and np.all(out <= high + 1e-9)


def test_empirical_denoiser_limits():
    rng = np.random.default_rng(5)
    data = Dataset(rng.standard_normal((8, 3)))
    denoiser = EmpiricalDenoiser(data)
    diameter = data.diameter()

    # large noise: the posterior is uniform
    x = rng.standard_normal(3)
    out = denoiser(x, 1e6 * diameter)
    assert np.linalg.norm(out - data.mean()) <= 1e-6 * diameter

    # small noise: each noisy row is pulled back to its own clean row
    sigma = 1e-3 * data.values.std()
    for row in data:
        noisy = row + sigma * rng.standard_normal(3)
        assert_allclose(denoiser(noisy, sigma), row, atol=1e-12)


def test_gaussian_denoiser_closed_forms():
    isotropic = GaussianDenoiser(GaussianModel(np.zeros(3), np.eye(3)))
    x = np.array([1.0, -2.0, 0.5])
    for sigma in [0.1, 1.0, 3.0]:
        assert_allclose(isotropic(x, sigma), x / (1 + sigma**2), rtol=1e-14)

    model = GaussianModel([1.0, 2.0], np.diag([4.0, 1.0]))
    assert_allclose(GaussianDenoiser(model)([3.0, 3.0], 2.0), [2.0, 2.2], rtol=1e-10)


def test_gaussian_denoiser_dense_oracle():
    rng = np.random.default_rng(6)
    factor = rng.standard_normal((4, 4))
    covariance = factor @ factor.T
    mean = rng.standard_normal(4)
    x = rng.standard_normal(4)
    sigma = 0.7
    expected = mean + covariance @ np.linalg.solve(covariance + sigma**2 * np.eye(4), x - mean)
    result = GaussianDenoiser(GaussianModel(mean, covariance))(x, sigma)
    assert_allclose(result, expected, rtol=1e-10)


def test_gaussian_denoiser_fixed_point():
    """m^G(mu) = mu, including for a singular covariance"""
    data = Dataset([[0.0, 1.0], [2.0, 1.0], [4.0, 1.0]])
    denoiser = GaussianDenoiser(data)
    mean = data.mean()
    for sigma in [1e-3, 1.0, 1e3]:
        assert_array_equal(denoiser(mean, sigma), mean)


def test_gaussian_model():
    data = Dataset([[0.0, 0.0], [2.0, 0.0], [0.0, 4.0], [2.0, 4.0]])
    model = gaussian_from_dataset(data)
    assert_array_equal(model.mean, [1.0, 2.0])
    assert_allclose(model.covariance, np.diag([1.0, 4.0]))
    assert_allclose(model.eigenvalues, [1.0, 4.0])

    with pytest.raises(ValueError):
        GaussianModel([0.0, 0.0], [[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(ValueError):
        GaussianModel([0.0, 0.0], np.diag([1.0, -0.5]))
    with pytest.raises(ValueError):
        GaussianModel([0.0, 0.0], np.eye(3))

    clamped = GaussianModel([0.0, 0.0], np.diag([1.0, -1e-12]))
    assert np.all(clamped.eigenvalues >= 0)


def test_constant_and_identity_denoisers():
    constant = ConstantDenoiser([1.0, 2.0])
    assert_array_equal(constant([5.0, 5.0], 1.0), [1.0, 2.0])
    assert_array_equal(constant(np.zeros((3, 2)), 0.1), np.tile([1.0, 2.0], (3, 1)))
    identity = IdentityDenoiser()
    assert_array_equal(identity([3.0, -1.0, 2.0], 2.0), [3.0, -1.0, 2.0])


def test_composite_denoiser():
    data = Dataset([[-1.0, 0.0], [1.0, 0.0]])
    base, insert = EmpiricalDenoiser(data), GaussianDenoiser(data)
    composite = CompositeDenoiser(
        [((0.002, 0.14), base), ((8.4, 80.0), base), ((0.14, 8.4), insert)]
    )
    assert_equal(composite.sigma_min, 0.002)
    assert_equal(composite.sigma_max, 80.0)

    x = np.array([0.3, -0.2])
    # boundaries go to the higher-noise branch, the top end is covered
    for sigma, active in [(80.0, base), (8.4, base), (1.0, insert), (0.14, insert), (0.002, base)]:
        assert composite.branch(sigma) is active
        assert_array_equal(composite(x, sigma), active(x, sigma))

    for sigma in [0.001, 80.5]:
        assert not composite.covers(sigma)
        with pytest.raises(ValueError):
            composite(x, sigma)


def test_composite_denoiser_errors():
    identity = IdentityDenoiser()
    with pytest.raises(ValueError):
        CompositeDenoiser([])
    with pytest.raises(ValueError):
        CompositeDenoiser([((1.0, 2.0), identity), ((2.5, 3.0), identity)])
    with pytest.raises(ValueError):
        CompositeDenoiser([((1.0, 2.5), identity), ((2.0, 3.0), identity)])
    with pytest.raises(ValueError):
        CompositeDenoiser([((2.0, 1.0), identity)])
    with pytest.raises(ValueError):
        CompositeDenoiser([((1.0, 2.0), ConstantDenoiser([0.0])), ((2.0, 3.0), ConstantDenoiser([0.0, 1.0]))])


def test_denoiser_dict():
    data = Dataset([[-1.0, 0.0], [1.0, 0.5]], label="pair")
    composite = CompositeDenoiser(
        [
            ((0.5, 10.0), GaussianDenoiser(data)),
            ((0.01, 0.5), EmpiricalDenoiser(data)),
            ((10.0, 20.0), ConstantDenoiser([0.0, 0.25])),
        ]
    )
    config = denoiser_to_dict(composite)
    assert_equal(config["kind"], "composite")
    rebuilt = denoiser_from_dict(config, {"pair": data})
    x = np.array([0.2, 0.1])
    for sigma in [0.01, 0.3, 0.5, 4.0, 15.0, 20.0]:
        assert_array_equal(rebuilt(x, sigma), composite(x, sigma))

    model = GaussianModel([0.0, 0.0], np.eye(2))
    rebuilt = denoiser_from_dict(denoiser_to_dict(GaussianDenoiser(model)))
    assert_array_equal(rebuilt.model.covariance, np.eye(2))

    with pytest.raises(ValueError):
        denoiser_from_dict({"kind": "neural"})
    with pytest.raises(ValueError):
        denoiser_from_dict({"kind": "empirical", "dataset": "missing"}, {"pair": data})
