import numpy as np
import pytest

from .._dataset import Dataset, DatasetError, as_points
from ...testing import assert_allclose, assert_array_equal, assert_equal


def test_dataset():
    values = np.arange(6.0).reshape(2, 3)
    data = Dataset(values, label="toy")
    assert_equal(data.n_points, 2)
    assert_equal(data.dim, 3)
    assert_array_equal(data.values, values)

    # copied and read-only
    values[0, 0] = 10
    assert_equal(data.values[0, 0], 0.0)
    with pytest.raises(ValueError):
        data.values[0, 0] = 1.0


def test_dataset_validation():
    with pytest.raises(DatasetError):
        Dataset(np.zeros(3))
    with pytest.raises(DatasetError):
        Dataset(np.zeros((0, 2)))
    with pytest.raises(DatasetError) as error:
        Dataset([[0.0, 1.0], [2.0, np.nan]])
    assert_equal(error.value.row, 1)
    assert_equal(error.value.column, 1)
    assert "row 2" in str(error.value)


def test_moments():
    data = Dataset([[-1.0, 0.0], [1.0, 0.0], [1.0, 2.0], [-1.0, 2.0]])
    assert_allclose(data.mean(), [0.0, 1.0])
    # biased covariance
    assert_allclose(data.covariance(), np.diag([1.0, 1.0]))
    assert_allclose(data.diameter(), np.sqrt(8.0))
    assert_equal(Dataset([[3.0, 4.0]]).diameter(), 0.0)


def test_subset_and_overlap():
    data = Dataset(np.arange(8.0).reshape(4, 2))
    sub = data.subset([2, 0])
    assert_array_equal(sub.values, [[4.0, 5.0], [0.0, 1.0]])
    mask = data.contains_rows([[4.0, 5.0], [4.0, 4.0]])
    assert_array_equal(mask, [True, False])
    assert_array_equal(data.scaled(2).values, 2 * data.values)


def test_as_points():
    assert_equal(as_points([1.0, 2.0]).shape, (1, 2))
    with pytest.raises(ValueError):
        as_points([[1.0, 2.0]], dim=3)
    with pytest.raises(ValueError):
        as_points([[1.0, np.inf]])
