import numpy as np
import pytest

from .._circulant import (
    CirculantModel,
    circulant_matrix,
    inverse_dft,
    power_law_spectrum,
    random_symmetric_spectrum,
    spike_spectrum,
    wraparound_distance,
)
from ...testing import assert_allclose, assert_array_equal, assert_equal


def test_first_row_matches_fft():
    spectrum = [8.0, 4.0, 2.0, 1.0, 1.0, 1.0, 2.0, 4.0]
    model = CirculantModel(spectrum)
    assert_allclose(model.first_row, np.real(np.fft.ifft(spectrum)), rtol=0, atol=1e-12)


def test_circulant_matrix_eigenvalues():
    """Test for the DFT diagonalization of the circulant covariance"""
    spectrum = random_symmetric_spectrum(12, seed=0)
    matrix = circulant_matrix(CirculantModel(spectrum))
    assert_allclose(matrix, matrix.T, rtol=0, atol=1e-14)
    assert_allclose(np.sort(np.linalg.eigvalsh(matrix)), np.sort(spectrum), rtol=0, atol=1e-12)


def test_circulant_model_errors():
    with pytest.raises(ValueError):
        CirculantModel([1.0])
    with pytest.raises(ValueError):
        CirculantModel([1.0, -1.0, 1.0, -1.0])
    with pytest.raises(ValueError):
        CirculantModel([1.0, 2.0, 3.0, 4.0])
    with pytest.raises(ValueError):
        inverse_dft([1.0, 2.0, 3.0])


def test_spectrum_families():
    assert_allclose(power_law_spectrum(6, 1.0), [1, 1 / 2, 1 / 3, 1 / 4, 1 / 3, 1 / 2], rtol=1e-15)
    assert_array_equal(spike_spectrum(4, 10.0, 0.5), [10.0, 0.5, 0.5, 0.5])
    spectrum = random_symmetric_spectrum(9, seed=1)
    assert_array_equal(spectrum[1:], spectrum[1:][::-1])
    for dim in (8, 9):
        CirculantModel(power_law_spectrum(dim, 2.0))
        CirculantModel(random_symmetric_spectrum(dim, seed=2))
    with pytest.raises(ValueError):
        spike_spectrum(4, 1.0, 2.0)


def test_concentration():
    assert_equal(CirculantModel(np.ones(8)).concentration, 1 / 8)
    assert CirculantModel(spike_spectrum(8)).concentration > 0.99


def test_wraparound_distance():
    assert_equal(wraparound_distance(0, 3, 8), 3)
    assert_equal(wraparound_distance(1, 7, 8), 2)
    assert_equal(wraparound_distance(5, 5, 8), 0)
