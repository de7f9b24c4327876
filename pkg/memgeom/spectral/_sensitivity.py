from dataclasses import dataclass

import numpy as np

from ..denoise import check_sigma
from ..utils.artifacts import write_csv
from ._circulant import CirculantModel, inverse_dft, wraparound_distance

# Level below which a kernel entry counts as negligible
DEFAULT_DECAY_TOL = 1e-3


@dataclass(frozen=True)
class SensitivityProfile:
    """Off-diagonal sensitivity of the Gaussian denoiser of a circulant model

    Attributes
    ----------
    sigma : float
    h : ndarray of shape (dim, )
        h_k = sigma^2 / (lambda_k + sigma^2), in (0, 1]
    q : ndarray of shape (dim, )
        kernel q_r = (1/d) sum_k h_k omega^(r k); sigma^2 (Sigma + sigma^2 I)^-1
        is the circulant matrix with first row q
    tv : float
        cyclic total variation sum_k |h_{k+1} - h_k|
    bounds : ndarray of shape (dim // 2, )
        tv / (4 n) for n = 1, ..., dim // 2
    """

    sigma: float
    h: np.ndarray
    q: np.ndarray
    tv: float
    bounds: np.ndarray

    @property
    def dim(self):
        return self.h.shape[0]

    @property
    def distances(self):
        return np.arange(1, self.dim // 2 + 1)

    def decay_index(self, tol=DEFAULT_DECAY_TOL):
        """Smallest wrap-around distance n >= 1 with |q_n| < tol, None if there is none"""
        below = np.flatnonzero(np.abs(self.q[self.distances]) < tol)
        return int(self.distances[below[0]]) if below.size else None

    def to_csv(self, path, meta=None):
        """Writes columns ``n,abs_q,bound`` for n = 1, ..., dim // 2"""
        n = self.distances
        rows = zip(n.tolist(), np.abs(self.q[n]), self.bounds)
        return write_csv(path, ["n", "abs_q", "bound"], rows, meta=meta)


def sensitivity_profile(model, sigma):
    """Kernel of sigma^2 (Sigma + sigma^2 I)^-1 and its total-variation decay bound

    |q_n| <= TV(h) / (4 n) for every wrap-around distance n >= 1.

    Parameters
    ----------
    model : CirculantModel or array
        a spectrum is wrapped into a model
    sigma : float

    Returns
    -------
    SensitivityProfile
    """
    sigma = check_sigma(sigma)
    if not isinstance(model, CirculantModel):
        model = CirculantModel(model)
    h = sigma**2 / (model.spectrum + sigma**2)
    q = inverse_dft(h)
    tv = float(np.sum(np.abs(np.roll(h, -1) - h)))
    bounds = tv / (4 * np.arange(1, model.dim // 2 + 1))
    for array in (h, q, bounds):
        array.setflags(write=False)
    return SensitivityProfile(sigma, h, q, tv, bounds)


def offdiag_sensitivity(model, sigma, i, j):
    """|d [m_sigma]_i / d x_j| = sigma^2 |[(Sigma + sigma^2 I)^-1]_ij| for i != j

    Only depends on the wrap-around distance between i and j.
    """
    if not isinstance(model, CirculantModel):
        model = CirculantModel(model)
    for index in (i, j):
        if not 0 <= index < model.dim:
            raise ValueError(f"Indices should be in [0, {model.dim}), got {index}.")
    if i == j:
        raise ValueError("Only off-diagonal sensitivities are defined, got i == j.")
    profile = sensitivity_profile(model, sigma)
    return float(abs(profile.q[wraparound_distance(i, j, model.dim)]))


def spectrum_concentration_sweep(spectra, sigma, tol=DEFAULT_DECAY_TOL):
    """Total variation and decay index across a family of spectra

    Parameters
    ----------
    spectra : dict of str -> spectrum or CirculantModel
        all of the same dimension
    sigma : float
    tol : float, default is 1e-3

    Returns
    -------
    list of dict
        rows with keys ``name, concentration, tv, decay_index, max_offdiag``,
        ordered by increasing concentration (share of the largest eigenvalue)
    """
    models = {
        name: spectrum if isinstance(spectrum, CirculantModel) else CirculantModel(spectrum)
        for name, spectrum in spectra.items()
    }
    dims = {model.dim for model in models.values()}
    if len(dims) > 1:
        raise ValueError(f"Spectra should share their dimension, got {sorted(dims)}.")
    rows = []
    for name, model in models.items():
        profile = sensitivity_profile(model, sigma)
        rows.append(
            {
                "name": name,
                "concentration": model.concentration,
                "tv": profile.tv,
                "decay_index": profile.decay_index(tol),
                "max_offdiag": float(np.max(np.abs(profile.q[profile.distances]))),
            }
        )
    return sorted(rows, key=lambda row: row["concentration"])
