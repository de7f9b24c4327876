import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import chi2

from .._geometry import ShellSpec
from .._phi import (
    NormBank,
    PhiTable,
    default_phi_knots,
    phi,
    phi_table,
    shell_membership_rate,
)
from ... import config
from ...testing import assert_allclose, assert_array_equal, assert_equal, assert_within_stderr


def polar_phi(spec, t):
    """Phi in dimension 2 by integrating the angular measure over the radius"""

    def integrand(r):
        lo = (spec.r_in_sq - r**2 - t**2) / (2 * r * t)
        hi = (spec.r_out_sq - r**2 - t**2) / (2 * r * t)
        angle = np.arccos(np.clip(lo, -1, 1)) - np.arccos(np.clip(hi, -1, 1))
        return r * math.exp(-(r**2) / 2) * angle / math.pi

    return quad(integrand, spec.r_in, spec.r_out, limit=200)[0]


def test_norm_bank():
    bank = NormBank(10, 20000, seed=0)
    assert_equal(bank.n_samples, 20000)
    norms = bank.squared_norms()
    assert_within_stderr(np.mean(norms), 10.0, np.std(norms) / math.sqrt(20000))
    shifted = bank.squared_norms(2.0)
    assert_within_stderr(np.mean(shifted), 14.0, np.std(shifted) / math.sqrt(20000))
    with pytest.raises(ValueError):
        NormBank(1, 10, seed=0)


def test_norm_bank_workers():
    with config.config_context(n_workers=1, chunk_size=500):
        serial = NormBank(8, 3000, seed=4)
    with config.config_context(n_workers=4, chunk_size=500):
        threaded = NormBank(8, 3000, seed=4)
    assert_array_equal(serial.first, threaded.first)
    assert_array_equal(serial.rest, threaded.rest)


def test_shell_membership_rate():
    spec = ShellSpec(256, 5.0)
    rate = shell_membership_rate(spec, 200000, seed=1)
    assert rate.mean >= 0.9865 - 3 * rate.stderr
    assert_within_stderr(rate.mean, spec.exact_mass(), rate.stderr)

    large = shell_membership_rate(ShellSpec(256, 50.0), 10000, seed=1)
    assert_equal(large.mean, 1.0)


def test_shell_membership_rate_two_dimensions():
    spec = ShellSpec(2, 0.1)
    exact = quad(lambda s: chi2.pdf(s, 2), spec.r_in_sq, spec.r_out_sq)[0]
    rate = shell_membership_rate(spec, 200000, seed=2)
    assert_within_stderr(rate.mean, exact, rate.stderr)


def test_phi_at_zero():
    """Phi(0) equals the membership rate on the same samples"""
    spec = ShellSpec(32, 5.0)
    rate = shell_membership_rate(spec, 5000, seed=3)
    estimate = phi(spec, 0.0, 5000, seed=3)
    assert_equal(estimate.value, rate.mean)
    assert_equal(estimate.stderr, rate.stderr)


def test_phi_beyond_support():
    spec = ShellSpec(32, 5.0)
    estimate = phi(spec, 2 * spec.r_out + 1e-9, 1000, seed=0)
    assert_equal(estimate.value, 0.0)
    assert_equal(estimate.stderr, 0.0)
    with pytest.raises(ValueError):
        phi(spec, -0.1, 1000, seed=0)


def test_phi_polar_quadrature():
    spec = ShellSpec(2, 1.0)
    estimate = phi(spec, 1.0, 1000000, seed=5)
    assert_within_stderr(estimate.value, polar_phi(spec, 1.0), estimate.stderr)


def test_phi_table():
    spec = ShellSpec(64, 5.0)
    table = phi_table(spec, 20000, seed=6)
    knots = default_phi_knots(spec)
    assert_equal(len(table), 121)
    assert_array_equal(table.knots, knots)
    assert_equal(table.knots[0], 0.0)
    assert_allclose(table.knots[1], 1e-3)
    assert_equal(table.knots[-1], 2 * spec.r_out)

    # overlap never exceeds the single-shell mass
    assert np.all(table.values >= 0)
    assert np.all(table.values <= table.values[0] + 4 * table.stderr[0])

    assert_array_equal(table.evaluate(table.knots), table.values)
    assert_equal(table.evaluate(2 * spec.r_out + 1.0), 0.0)
    middle = table.evaluate(np.sqrt(table.knots[50] * table.knots[51]))
    assert min(table.values[50], table.values[51]) <= middle <= max(table.values[50], table.values[51])
    with pytest.raises(ValueError):
        table.evaluate(-1.0)


def test_phi_table_interpolation():
    spec = ShellSpec(64, 5.0)
    table = PhiTable(spec, [0.0, 1.0, 4.0], [0.9, 0.5, 0.1], [0.0, 0.0, 0.0], 100)
    assert_allclose(table.evaluate(0.5), 0.7)
    assert_allclose(table.evaluate(2.0), 0.3)
    value, stderr = table.evaluate(2.0, return_stderr=True)
    assert_equal(stderr, 0.0)
    # the table stops before 2 r_out: no extrapolation
    with pytest.raises(ValueError):
        table.evaluate(5.0)
    assert_equal(table.evaluate(2 * spec.r_out + 0.5), 0.0)

    shifted = PhiTable(spec, [1.0, 4.0], [0.5, 0.1], [0.0, 0.0], 100)
    with pytest.raises(ValueError):
        shifted.evaluate(0.5)
    with pytest.raises(ValueError):
        PhiTable(spec, [0.0, 0.0, 1.0], [1, 1, 1], [0, 0, 0], 1)


def test_phi_table_csv(tmp_path):
    spec = ShellSpec(16, 5.0)
    table = phi_table(spec, 2000, seed=7, knots=[0.0, 0.5, 1.0, 2.0])
    path = table.to_csv(tmp_path / "phi.csv", meta={"seed": 7})
    loaded = PhiTable.from_csv(path)
    assert loaded.spec == spec
    assert_array_equal(loaded.knots, table.knots)
    assert_array_equal(loaded.values, table.values)
    assert_array_equal(loaded.stderr, table.stderr)
    assert_equal(loaded.n_samples, 2000)
