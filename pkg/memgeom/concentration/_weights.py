from dataclasses import dataclass

import numpy as np

from ..curves import DiagnosticCurve
from ..denoise import check_sigma, log_posterior_weights
from ..random import monte_carlo_samples, resolve_seed, stream_rng, summarize

# Base points and noise draws per base point of the weight curves
DEFAULT_N_BASE = 100
DEFAULT_N_NOISE = 400


def self_weight_samples(dataset, rows, sigma, n_noise, seed, key=()):
    """Max and self posterior weights of noisy copies of dataset rows

    Sample ``s`` perturbs row ``rows[s // n_noise]`` with sigma Z.

    Returns
    -------
    ndarray of shape (len(rows) * n_noise, 2)
        column 0 holds max_i w_i, column 1 the weight of the perturbed row
    """
    sigma = check_sigma(sigma)
    if n_noise < 1:
        raise ValueError(f"n_noise should be at least 1, got {n_noise}.")
    rows = np.asarray(rows, dtype=np.int64).reshape(-1)
    values = dataset.values

    def sample(rng, start, size):
        owners = rows[(start + np.arange(size)) // n_noise]
        noisy = values[owners] + sigma * rng.standard_normal((size, dataset.dim))
        log_weights = log_posterior_weights(values, noisy, sigma)
        own = log_weights[np.arange(size), owners]
        return np.exp(np.stack([log_weights.max(axis=1), own], axis=1))

    return monte_carlo_samples(sample, rows.shape[0] * int(n_noise), seed, key=key)


def _base_rows(dataset, n_base, seed):
    if n_base is None:
        n_base = min(DEFAULT_N_BASE, dataset.n_points)
    if not 1 <= n_base <= dataset.n_points:
        raise ValueError(f"n_base should be in [1, {dataset.n_points}], got {n_base}.")
    rng = stream_rng(seed, 0)
    return np.sort(rng.choice(dataset.n_points, size=int(n_base), replace=False))


@dataclass(frozen=True)
class WeightComparison:
    """Max and self posterior-weight curves computed on shared samples"""

    max_weight: DiagnosticCurve
    self_weight: DiagnosticCurve
    gap: DiagnosticCurve

    def __iter__(self):
        yield self.max_weight
        yield self.self_weight


def max_vs_self_weight(
    dataset, sigma_grid, n_base=None, n_noise=DEFAULT_N_NOISE, seed=None, verbose=0
):
    """Mean max posterior weight against mean self weight across noise levels

    Base rows x_1 are drawn without replacement; every base row is perturbed
    `n_noise` times at each noise level. Both curves use the same noisy
    points, so the gap curve carries a paired standard error.

    Parameters
    ----------
    dataset : Dataset
    sigma_grid : SigmaGrid or array
    n_base : int, optional
        number of base rows, default is min(100, n_points)
    n_noise : int, default is 400
    seed : int, optional
    verbose : int, default is 0
        level of verbosity

    Returns
    -------
    WeightComparison
    """
    seed = resolve_seed(seed)
    sigmas = np.asarray(getattr(sigma_grid, "values", sigma_grid), dtype=np.float64)
    rows = _base_rows(dataset, n_base, seed)

    columns = {"max": [], "self": [], "gap": []}
    for k, sigma in enumerate(sigmas):
        weights = self_weight_samples(dataset, rows, sigma, n_noise, seed, key=(1, k))
        columns["max"].append(summarize(weights[:, 0]))
        columns["self"].append(summarize(weights[:, 1]))
        columns["gap"].append(summarize(weights[:, 0] - weights[:, 1]))
        if verbose:
            print(
                f"sigma={sigma:.4g}: max weight={columns['max'][-1].mean:.4f}, "
                f"self weight={columns['self'][-1].mean:.4f}"
            )

    def curve(name, estimates):
        return DiagnosticCurve(
            sigmas,
            [e.mean for e in estimates],
            [e.stderr for e in estimates],
            [e.n_samples for e in estimates],
            name=name,
        )

    return WeightComparison(
        curve("max-weight", columns["max"]),
        curve("self-weight", columns["self"]),
        curve("max-self-gap", columns["gap"]),
    )


def w_sigma_curve(dataset, sigma_grid, n_base=None, n_noise=DEFAULT_N_NOISE, seed=None, verbose=0):
    """Posterior weight W_sigma = E[max_i w_i(x_1 + sigma Z, sigma)] across noise levels

    The expectation runs over training rows x_1 only. Same sampling as
    :func:`max_vs_self_weight`, whose max-weight curve this is.

    Returns
    -------
    DiagnosticCurve
        values lie in [1/N, 1]
    """
    comparison = max_vs_self_weight(dataset, sigma_grid, n_base, n_noise, seed, verbose)
    max_weight = comparison.max_weight
    return DiagnosticCurve(
        max_weight.sigma,
        max_weight.value,
        max_weight.stderr,
        max_weight.n_samples,
        name="w-sigma",
    )
