import numpy as np
import pytest

from ..testing import (
    assert_allclose,
    assert_array_almost_equal,
    assert_array_equal,
    assert_equal,
    assert_within_stderr,
)


def test_assert_allclose():
    array = np.array([5.0, 5.0, 5.0])

    assert_allclose(array, array)
    assert_allclose(array, array + 1e-10)

    with pytest.raises(AssertionError):
        assert_allclose(array, array + 10)

    assert_allclose(array, array + 1, atol=2)
    with pytest.raises(AssertionError):
        assert_allclose(array, array + 1, atol=0.5)

    assert_allclose(array, array + 0.1 * array, rtol=0.2)
    with pytest.raises(AssertionError):
        assert_allclose(array, array + 0.1 * array, rtol=0.09)


def test_assert_equal():
    array = np.array([5, 5, 5])

    assert_equal(array, array)
    assert_equal(np.array([1, 2]), np.array([1.0, 2.0]))
    assert_equal(np.array([1]), 1)

    with pytest.raises(AssertionError):
        assert_equal(array, array + 10)


def test_assert_array_almost_equal():
    array = np.array([5.0, 5.0, 5.0])

    assert_array_almost_equal(array, array)
    assert_array_almost_equal(array, array + 1e-10)

    with pytest.raises(AssertionError):
        assert_array_almost_equal(array, array + 10)


def test_assert_array_equal():
    array = np.arange(4.0)
    assert_array_equal(array, array.copy())
    with pytest.raises(AssertionError):
        assert_array_equal(array, array + 1e-12)


def test_assert_within_stderr():
    assert_within_stderr(1.03, 1.0, stderr=0.01)
    assert_within_stderr(1.0, 1.0, stderr=0.0)
    with pytest.raises(AssertionError):
        assert_within_stderr(1.05, 1.0, stderr=0.01)
    with pytest.raises(AssertionError):
        assert_within_stderr(1.03, 1.0, stderr=0.01, n_sigma=2)
