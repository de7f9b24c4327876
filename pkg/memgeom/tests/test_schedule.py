import numpy as np
import pytest

from ..schedule import (
    NoiseSchedule,
    SigmaGrid,
    edm_schedule,
    sigma_grid,
    sigma_to_t,
    t_to_sigma,
)
from ..testing import assert_allclose, assert_array_equal, assert_equal

# Published 18-step schedule for (80, 0.002, rho=7), rounded to 2 decimals
TABLE_SIGMAS = [
    80.00, 57.59, 40.79, 28.37, 19.35, 12.91, 8.40, 5.32, 3.26,
    1.92, 1.09, 0.59, 0.30, 0.14, 0.06, 0.02, 0.01, 0.00,
]


def test_edm_schedule_endpoints():
    schedule = edm_schedule(80, 0.002, 18)
    assert_equal(schedule.sigmas[0], 80.0)
    assert_equal(schedule.sigmas[17], 0.002)
    assert_equal(schedule.n_steps, 18)
    assert_equal(schedule.rho, 7.0)


def test_edm_schedule_table_values():
    schedule = edm_schedule(80, 0.002, 18, rho=7)
    assert_allclose(schedule.sigmas, TABLE_SIGMAS, atol=0.0051)


def test_edm_schedule_linear():
    schedule = edm_schedule(10.0, 1.0, 10, rho=1)
    assert_allclose(schedule.sigmas, np.linspace(10.0, 1.0, 10), rtol=1e-14)


@pytest.mark.parametrize("rho", [0.5, 1.0, 3.0, 7.0, 20.0])
def test_edm_schedule_monotone(rho):
    sigmas = edm_schedule(80, 0.002, 40, rho=rho).sigmas
    for i in range(len(sigmas) - 1):
        assert sigmas[i + 1] < sigmas[i]


def test_edm_schedule_errors():
    with pytest.raises(ValueError):
        edm_schedule(0.002, 80)
    with pytest.raises(ValueError):
        edm_schedule(80, 0.0)
    with pytest.raises(ValueError):
        edm_schedule(80, 0.002, n_steps=1)
    with pytest.raises(ValueError):
        edm_schedule(80, 0.002, rho=0)


def test_schedule_split():
    schedule = edm_schedule(80, 0.002, 18)
    upper, lower = schedule.split(7)
    assert_equal(upper.sigma_min, lower.sigma_max)
    assert_array_equal(np.concatenate([upper.sigmas, lower.sigmas[1:]]), schedule.sigmas)
    with pytest.raises(ValueError):
        schedule.split(0)


def test_noise_schedule_validation():
    with pytest.raises(ValueError):
        NoiseSchedule([1.0, 2.0])
    with pytest.raises(ValueError):
        NoiseSchedule([1.0, 0.0])
    with pytest.raises(ValueError):
        NoiseSchedule([1.0])


def test_sigma_grid():
    grid = sigma_grid()
    assert_equal(len(grid), 40)
    assert_equal(grid.sigma_lo, 0.002)
    assert_equal(grid.sigma_hi, 80.0)
    assert np.all(np.diff(grid.values) > 0)
    ratios = grid.values[1:] / grid.values[:-1]
    assert_allclose(ratios, ratios[0], rtol=1e-10)

    assert_array_equal(SigmaGrid.from_values([3.0, 1.0, 2.0]).values, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        SigmaGrid([1.0, 1.0])
    with pytest.raises(ValueError):
        sigma_grid(1.0, 0.5)


def test_sigma_t_conversion():
    assert_equal(sigma_to_t(1.0), 0.5)
    assert_allclose(t_to_sigma(0.4), 1.5, rtol=1e-15)

    sigmas = np.geomspace(1.0, 1e4, 50)
    assert_allclose(t_to_sigma(sigma_to_t(sigmas)), sigmas, rtol=1e-15)
    small = np.geomspace(1e-3, 1.0, 50)
    assert_allclose(t_to_sigma(sigma_to_t(small)), small, rtol=1e-12)

    t = sigma_to_t(np.geomspace(1e-3, 1e3, 100))
    assert np.all(np.diff(t) < 0)
    assert np.all((t > 0) & (t < 1))

    with pytest.raises(ValueError):
        sigma_to_t(0.0)
    with pytest.raises(ValueError):
        t_to_sigma(1.0)
    with pytest.raises(ValueError):
        t_to_sigma(0.0)
