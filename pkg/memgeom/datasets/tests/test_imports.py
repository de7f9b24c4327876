import struct

import numpy as np
import pytest

from ..data_imports import affine_rescale, load_dataset, save_dataset
from ..synthetic import SyntheticSpec, synthesize
from .._dataset import Dataset, DatasetError
from ...testing import assert_allclose, assert_array_equal, assert_equal


def test_load_csv(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("0,0,0\n1,1,1")
    data = load_dataset(path)
    assert_equal(data.shape, (2, 3))
    assert_array_equal(data.values, [[0, 0, 0], [1, 1, 1]])
    assert_equal(data.label, "points")


def test_load_raw(tmp_path):
    path = tmp_path / "single.f64"
    path.write_bytes(struct.pack("<QQ", 1, 1) + struct.pack("<d", 0.5))
    data = load_dataset(path, format="raw-f64")
    assert_array_equal(data.values, [[0.5]])


@pytest.mark.parametrize("suffix", [".csv", ".f64"])
def test_round_trip(tmp_path, suffix):
    """save then load reproduces every bit"""
    means = np.stack([np.zeros(16), np.full(16, 3.0)])
    spec = SyntheticSpec("gaussian-mixture", 100, 16, seed=4, params={"means": means, "scales": 0.7})
    data = synthesize(spec)
    path = save_dataset(data, tmp_path / f"mixture{suffix}")
    loaded = load_dataset(path)
    assert loaded.values.tobytes() == data.values.tobytes()


def test_csv_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0,1\n2,abc\n")
    with pytest.raises(DatasetError) as error:
        load_dataset(path)
    assert_equal((error.value.row, error.value.column), (1, 1))
    assert str(path) in str(error.value)

    path.write_text("0,1\n2,3,4\n")
    with pytest.raises(DatasetError) as error:
        load_dataset(path)
    assert_equal(error.value.row, 1)

    path.write_text("0,1\n2,nan\n")
    with pytest.raises(DatasetError) as error:
        load_dataset(path)
    assert_equal((error.value.row, error.value.column), (1, 1))


def test_raw_errors(tmp_path):
    path = tmp_path / "bad.f64"
    path.write_bytes(b"\x01\x00")
    with pytest.raises(DatasetError, match="malformed header"):
        load_dataset(path)

    path.write_bytes(struct.pack("<QQ", 2, 2) + struct.pack("<3d", 1.0, 2.0, 3.0))
    with pytest.raises(DatasetError, match="dimension mismatch"):
        load_dataset(path)

    path.write_bytes(struct.pack("<QQ", 1, 2) + struct.pack("<2d", 1.0, np.inf))
    with pytest.raises(DatasetError) as error:
        load_dataset(path)
    assert_equal((error.value.row, error.value.column), (0, 1))

    with pytest.raises(DatasetError, match="does not exist"):
        load_dataset(tmp_path / "missing.csv")
    with pytest.raises(ValueError):
        load_dataset(tmp_path / "points.txt")


def test_affine_rescale():
    data = Dataset([[0.0, 255.0], [127.5, 51.0]])
    rescaled = affine_rescale(data, in_range=(0, 255))
    assert_allclose(rescaled.values, [[-1.0, 1.0], [0.0, -0.6]])
    auto = affine_rescale(data)
    assert_allclose(auto.values.min(), -1.0)
    assert_allclose(auto.values.max(), 1.0)
