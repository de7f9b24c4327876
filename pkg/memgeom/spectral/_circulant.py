import numpy as np
from scipy.linalg import circulant, dft

from ..random import check_random_state

# Largest imaginary residue, relative to the largest magnitude, of a real transform
IMAG_TOL = 1e-10


def wraparound_distance(i, j, dim):
    """Cyclic distance min(|i - j|, dim - |i - j|) between two coordinates"""
    gap = abs(int(i) - int(j)) % dim
    return min(gap, dim - gap)


def inverse_dft(values):
    """Real inverse DFT (1/d) sum_k values_k omega^(r k) by a direct O(d^2) product

    Raises
    ------
    ValueError
        if the imaginary residue exceeds IMAG_TOL relative to the result
    """
    values = np.asarray(values, dtype=np.float64)
    dim = values.shape[0]
    transform = dft(dim).conj() @ values / dim
    scale = max(float(np.max(np.abs(transform))), np.finfo(np.float64).tiny)
    residue = float(np.max(np.abs(transform.imag)))
    if residue > IMAG_TOL * scale:
        raise ValueError(
            f"Transform is not real (imaginary residue {residue:.3g}): the values should "
            f"satisfy v[k] == v[d - k]."
        )
    return transform.real


class CirculantModel:
    """Stationary covariance on the cycle Z_d, given by its DFT eigenvalues

    Parameters
    ----------
    spectrum : array of shape (dim, )
        nonnegative eigenvalues lambda_k in DFT order, with
        lambda_k == lambda_{d - k}

    Attributes
    ----------
    first_row : ndarray
        c_r = (1/d) sum_k lambda_k omega^(r k), the first row of the covariance
    """

    def __init__(self, spectrum):
        spectrum = np.array(spectrum, dtype=np.float64).reshape(-1)
        if spectrum.shape[0] < 2:
            raise ValueError(f"A circulant model needs dim >= 2, got {spectrum.shape[0]}.")
        if not np.all(np.isfinite(spectrum)) or np.any(spectrum < 0):
            raise ValueError("Spectrum entries should be finite and nonnegative.")
        mirrored = np.roll(spectrum[::-1], 1)
        if np.max(np.abs(spectrum - mirrored)) > 1e-12 * max(1.0, float(np.max(spectrum))):
            raise ValueError("Spectrum should satisfy spectrum[k] == spectrum[dim - k].")
        first_row = inverse_dft(spectrum)
        spectrum.setflags(write=False)
        first_row.setflags(write=False)
        self.spectrum = spectrum
        self.first_row = first_row

    @property
    def dim(self):
        return self.spectrum.shape[0]

    def __repr__(self):
        return f"CirculantModel(dim={self.dim}, trace={np.sum(self.spectrum):.4g})"

    @property
    def concentration(self):
        """Share of the largest eigenvalue in the trace, 1/d for a flat spectrum"""
        total = float(np.sum(self.spectrum))
        return float(np.max(self.spectrum)) / total if total > 0 else 1.0 / self.dim


def circulant_matrix(model):
    """Dense covariance matrix of a circulant model"""
    return circulant(model.first_row)


def _cyclic_index(dim):
    k = np.arange(dim)
    return np.minimum(k, dim - k)


def power_law_spectrum(dim, exponent, scale=1.0):
    """lambda_k = scale (1 + min(k, d - k))^-exponent"""
    if not scale > 0:
        raise ValueError(f"scale should be positive, got {scale}.")
    return scale * (1.0 + _cyclic_index(dim)) ** (-float(exponent))


def spike_spectrum(dim, height=100.0, floor=1e-3):
    """One large eigenvalue at frequency 0, `floor` elsewhere"""
    if not height >= floor >= 0:
        raise ValueError(f"Expected height >= floor >= 0, got height={height}, floor={floor}.")
    spectrum = np.full(dim, float(floor))
    spectrum[0] = float(height)
    return spectrum


def random_symmetric_spectrum(dim, seed=None):
    """Uniform(0, 1) eigenvalues mirrored so that lambda_k == lambda_{d - k}"""
    rng = check_random_state(seed)
    half = rng.uniform(size=dim // 2 + 1)
    return half[_cyclic_index(dim)]
