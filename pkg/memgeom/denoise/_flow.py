"""
Flow-matching counterparts of the empirical denoiser.

With X_t = (1 - t) Z + t X, the optimal velocity field of the empirical
distribution is a softmax-weighted average of the conditional fields
u_t(x | x_i) = (x_i - x) / (1 - t).
"""

import numpy as np
from scipy.special import logsumexp

from ..datasets import as_points, squared_distances


def check_t(t):
    t = float(t)
    if not 0 < t < 1:
        raise ValueError(f"t should lie in the open interval (0, 1), got {t}.")
    return t


def flow_weight_matrix(dataset, points, t):
    """Weights proportional to exp(-|x - t x_i|^2 / (2 (1 - t)^2)), per row of `points`"""
    t = check_t(t)
    points = as_points(points, dim=dataset.dim)
    logits = -squared_distances(points, t * dataset.values) / (2.0 * (1.0 - t) ** 2)
    return np.exp(logits - logsumexp(logits, axis=1, keepdims=True))


def flow_denoiser(dataset, x, t):
    """Posterior mean m_t(x) = sum_i w_i(x, t) x_i in flow time

    Agrees with the empirical denoiser through m_t(t x) = m_sigma(x),
    sigma = (1 - t) / t.
    """
    x = np.asarray(x, dtype=np.float64)
    out = flow_weight_matrix(dataset, x, t) @ dataset.values
    return out[0] if x.ndim == 1 else out


def flow_vector_fields(dataset, x, t, conditioning_index):
    """Optimal and conditional velocity fields at `x`

    Parameters
    ----------
    dataset : Dataset
    x : array of shape (dim, ) or (n, dim)
    t : float in (0, 1)
    conditioning_index : int
        row x_1 the conditional field points to

    Returns
    -------
    u_opt : ndarray
        sum_i w_i(x, t) (x_i - x) / (1 - t)
    u_cond : ndarray
        (x_1 - x) / (1 - t)
    """
    t = check_t(t)
    if not 0 <= conditioning_index < dataset.n_points:
        raise ValueError(
            f"conditioning_index should be in [0, {dataset.n_points}), got {conditioning_index}."
        )
    x = np.asarray(x, dtype=np.float64)
    points = as_points(x, dim=dataset.dim)
    weights = flow_weight_matrix(dataset, points, t)
    u_opt = (weights @ dataset.values - points) / (1.0 - t)
    u_cond = (dataset.values[conditioning_index] - points) / (1.0 - t)
    if x.ndim == 1:
        return u_opt[0], u_cond[0]
    return u_opt, u_cond
