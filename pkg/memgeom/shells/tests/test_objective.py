import numpy as np
import pytest

from ...datasets import Dataset
from ...denoise import ConstantDenoiser, IdentityDenoiser, denoiser_from_dict
from .._coverage import disjointness_sigma
from .._geometry import ShellSpec
from .._objective import (
    ShellProjector,
    annulus_second_moment,
    sample_annulus,
    shell_only_loss,
)
from ...testing import assert_allclose, assert_array_equal, assert_equal, assert_within_stderr


@pytest.mark.parametrize("dim, c", [(64, 2.0), (16, 5.0)])
def test_sample_annulus(dim, c):
    spec = ShellSpec(dim, c)
    samples = sample_annulus(np.random.default_rng(0), 20000, spec)
    assert_equal(samples.shape, (20000, dim))
    squared = np.sum(samples**2, axis=1)
    assert np.all(squared >= spec.r_in_sq * (1 - 1e-12))
    assert np.all(squared <= spec.r_out_sq * (1 + 1e-12))
    assert_within_stderr(np.mean(squared), annulus_second_moment(spec), np.std(squared) / np.sqrt(20000))
    # directions are centered
    assert np.all(np.abs(np.mean(samples, axis=0)) <= 5 * np.sqrt(annulus_second_moment(spec) / dim / 20000))


def separated_points():
    rng = np.random.default_rng(1)
    return Dataset(4.0 * rng.standard_normal((12, 64)), label="points")


def test_shell_projector_zero_loss():
    """Two different shell projectors are both global minimizers"""
    data = separated_points()
    spec = ShellSpec(64, 2.0)
    sigma = 0.9 * disjointness_sigma(data, spec)
    first = ShellProjector(data, spec)
    second = ShellProjector(data, spec, outside=ConstantDenoiser(np.ones(64)))
    for denoiser in [first, second]:
        loss = shell_only_loss(data, spec, denoiser, sigma, 4000, seed=2)
        assert_equal(loss.mean, 0.0)
        assert_equal(loss.stderr, 0.0)

    # they disagree away from the shells
    far = data.values.mean(axis=0) + 100.0
    assert not np.array_equal(first(far, sigma), second(far, sigma))


def test_shell_projector_gaussian_noise():
    """Gaussian noise leaves the shells with small probability, so the loss is positive"""
    data = separated_points()
    spec = ShellSpec(64, 2.0)
    sigma = 0.9 * disjointness_sigma(data, spec)
    loss = shell_only_loss(data, spec, ShellProjector(data, spec), sigma, 4000, seed=3, noise="gaussian")
    outside = 1 - spec.exact_mass()
    assert loss.mean > 0
    assert loss.mean <= sigma**2 * 2 * spec.r_out_sq * outside * 10


def test_shell_projector_nearest_center():
    spec = ShellSpec(2, 1.0)
    data = Dataset([[0.0, 0.0], [1.0, 0.0]])
    projector = ShellProjector(data, spec)
    # inside both balls, closer to the second row
    assert_array_equal(projector([0.7, 0.0], 1.0), [1.0, 0.0])
    assert_array_equal(projector([100.0, 0.0], 1.0), [100.0, 0.0])


def test_constant_mean_loss():
    data = Dataset([[-3.0, 0.0, 0.0], [3.0, 0.0, 0.0]])
    spec = ShellSpec(3, 0.5)
    denoiser = ConstantDenoiser(data.mean())
    for noise in ["annulus", "gaussian"]:
        loss = shell_only_loss(data, spec, denoiser, 0.5, 1000, seed=4, noise=noise)
        assert_allclose(loss.mean, 9.0, rtol=1e-12)


def test_identity_loss():
    """The identity pays sigma^2 E|Z|^2"""
    data = separated_points()
    spec = ShellSpec(64, 2.0)
    sigma = 0.3
    annulus = shell_only_loss(data, spec, IdentityDenoiser(), sigma, 5000, seed=5)
    assert_within_stderr(annulus.mean, sigma**2 * annulus_second_moment(spec), annulus.stderr)
    gaussian = shell_only_loss(data, spec, IdentityDenoiser(), sigma, 5000, seed=5, noise="gaussian")
    assert_within_stderr(gaussian.mean, sigma**2 * 64, gaussian.stderr)


def test_shell_projector_dict():
    data = separated_points()
    spec = ShellSpec(64, 2.0)
    projector = ShellProjector(data, spec, outside=ConstantDenoiser(np.zeros(64)))
    rebuilt = denoiser_from_dict(projector.to_dict(), {"points": data})
    assert rebuilt.spec == spec
    x = data[3] + 0.01
    assert_array_equal(rebuilt(x, 0.1), projector(x, 0.1))


def test_shell_only_loss_errors():
    data = separated_points()
    spec = ShellSpec(64, 2.0)
    with pytest.raises(ValueError):
        shell_only_loss(data, spec, IdentityDenoiser(), 0.1, 10, seed=0, noise="uniform")
    with pytest.raises(ValueError):
        ShellProjector(data, ShellSpec(32, 2.0))
