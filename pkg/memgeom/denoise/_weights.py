from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..datasets import as_points, as_vector, squared_distances


def check_sigma(sigma):
    sigma = float(sigma)
    if not (np.isfinite(sigma) and sigma > 0):
        raise ValueError(f"sigma should be finite and positive, got {sigma}.")
    return sigma


@dataclass(frozen=True)
class PosteriorWeights:
    """Softmax weights of the dataset rows given a noisy observation"""

    weights: np.ndarray
    argmax_index: int
    max_weight: float

    def __len__(self):
        return self.weights.shape[0]


def log_posterior_weights(values, points, sigma):
    """Log posterior weights of every dataset row, for a batch of points

    log w_i(x) = -|x - x_i|^2 / (2 sigma^2) - logsumexp_j(-|x - x_j|^2 / (2 sigma^2))

    Parameters
    ----------
    values : array of shape (n_points, dim)
        dataset rows
    points : array of shape (n_queries, dim)
    sigma : float

    Returns
    -------
    ndarray of shape (n_queries, n_points)
    """
    logits = -squared_distances(points, values) / (2.0 * sigma**2)
    return logits - logsumexp(logits, axis=1, keepdims=True)


def posterior_weight_matrix(dataset, points, sigma):
    """Posterior weights (n_queries, n_points) for a batch of points"""
    sigma = check_sigma(sigma)
    points = as_points(points, dim=dataset.dim)
    return np.exp(log_posterior_weights(dataset.values, points, sigma))


def posterior_weights(dataset, x, sigma):
    """Posterior weights of the dataset rows at the noisy point `x`

    w_i(x, sigma) is the softmax over i of -|x - x_i|^2 / (2 sigma^2),
    computed in log space with the maximum subtracted.

    Parameters
    ----------
    dataset : Dataset
    x : array of shape (dim, )
    sigma : float

    Returns
    -------
    PosteriorWeights
    """
    sigma = check_sigma(sigma)
    x = as_vector(x, dim=dataset.dim)
    weights = np.exp(log_posterior_weights(dataset.values, x[None, :], sigma)[0])
    index = int(np.argmax(weights))
    return PosteriorWeights(weights, index, float(weights[index]))
