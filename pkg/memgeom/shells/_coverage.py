from dataclasses import dataclass

import numpy as np

from ..datasets import (
    as_points,
    min_pairwise_distance,
    nearest_neighbor_distances,
    squared_distances,
)
from ..denoise import check_sigma
from ..curves import DiagnosticCurve
from ..random import monte_carlo, resolve_seed, stream_rng, summarize

# Largest number of (test point, training point) pairs used by the upper bound
DEFAULT_N_PAIRS = 12000


def in_any_shell(dataset, spec, points, sigma):
    """Whether each row of `points` lies in the union of the sigma-shells around the dataset rows"""
    scaled = squared_distances(points, dataset.values) / sigma**2
    return np.any(spec.contains_sq(scaled), axis=1)


def coverage(dataset, spec, test_points, sigma, n_noise, seed, key=()):
    """Gaussian shell coverage of the test distribution

    Fraction of noisy test points X + sigma Z falling in the union of the
    shells {y : sigma r_in <= |y - x_i| <= sigma r_out}. Every test point is
    paired with `n_noise` noise draws.

    Parameters
    ----------
    dataset : Dataset
        centers of the shells
    spec : ShellSpec
    test_points : Dataset or array of shape (n_test, dim)
    sigma : float
    n_noise : int
    seed : int
    key : tuple of int, optional
        random stream prefix

    Returns
    -------
    MCEstimate
    """
    sigma = check_sigma(sigma)
    points = as_points(test_points, dim=dataset.dim, name="test_points")
    if n_noise < 1:
        raise ValueError(f"n_noise should be at least 1, got {n_noise}.")

    def sample(rng, start, size):
        rows = points[(start + np.arange(size)) // n_noise]
        noisy = rows + sigma * rng.standard_normal(rows.shape)
        return in_any_shell(dataset, spec, noisy, sigma).astype(np.float64)

    return monte_carlo(sample, points.shape[0] * int(n_noise), seed, key=key)


def coverage_curve(dataset, spec, test_points, sigma_grid, n_noise, seed=None, verbose=0):
    """Shell coverage across noise levels, knot ``k`` drawing from stream key ``(k,)``

    Returns
    -------
    DiagnosticCurve
    """
    seed = resolve_seed(seed)
    sigmas = np.asarray(getattr(sigma_grid, "values", sigma_grid), dtype=np.float64)
    estimates = []
    for k, sigma in enumerate(sigmas):
        estimates.append(coverage(dataset, spec, test_points, sigma, n_noise, seed, key=(k,)))
        if verbose:
            print(f"sigma={sigma:.4g}: coverage={estimates[-1].mean:.4f}")
    return DiagnosticCurve(
        sigmas,
        [e.mean for e in estimates],
        [e.stderr for e in estimates],
        [e.n_samples for e in estimates],
        name="coverage",
    )


@dataclass(frozen=True)
class CoverageBounds:
    """Lower and upper bounds on the shell coverage at one noise level

    ``upper`` is clamped to [0, 1]; ``raw_upper`` is the unclamped value.
    """

    sigma: float
    lower: float
    lower_stderr: float
    upper: float
    upper_stderr: float
    raw_upper: float
    n_pairs: int

    def __iter__(self):
        yield self.lower
        yield self.upper

    def to_dict(self):
        return dict(self.__dict__)


def coverage_bounds(dataset, spec, test_points, sigma, phi_table, seed, n_pairs=DEFAULT_N_PAIRS):
    """Bounds on the shell coverage through the overlap function Phi

        E_X Phi(d_1NN(X) / sigma) <= C_sigma <= 2 exp(-c) + N E_{X, X'} Phi(|X - X'| / sigma)

    X runs over the test points and X' over the dataset rows. The pair
    expectation uses every pair when there are at most `n_pairs` of them, and
    `n_pairs` pairs drawn uniformly otherwise.

    Parameters
    ----------
    dataset : Dataset
    spec : ShellSpec
    test_points : Dataset or array
    sigma : float
    phi_table : PhiTable
        must cover every argument; extrapolation raises ValueError
    seed : int
        used for pair subsampling only
    n_pairs : int, default is 12000

    Returns
    -------
    CoverageBounds
    """
    sigma = check_sigma(sigma)
    if phi_table.spec != spec:
        raise ValueError(f"Phi table was computed for {phi_table.spec!r}, expected {spec!r}.")
    points = as_points(test_points, dim=dataset.dim, name="test_points")
    n_test, n_points = points.shape[0], dataset.n_points

    d1nn = nearest_neighbor_distances(dataset, points, k=1)[:, 0]
    phi_low, phi_low_err = phi_table.evaluate(d1nn / sigma, return_stderr=True)
    low = summarize(phi_low)
    lower_stderr = float(np.hypot(low.stderr, np.mean(phi_low_err)))

    if n_test * n_points <= n_pairs:
        distances = np.sqrt(squared_distances(points, dataset.values)).reshape(-1)
    else:
        rng = stream_rng(seed, 0)
        test_index = rng.integers(n_test, size=n_pairs)
        data_index = rng.integers(n_points, size=n_pairs)
        diff = points[test_index] - dataset.values[data_index]
        distances = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    phi_pair, phi_pair_err = phi_table.evaluate(distances / sigma, return_stderr=True)
    pair = summarize(phi_pair)
    raw_upper = 2 * np.exp(-spec.c) + n_points * pair.mean
    upper_stderr = n_points * float(np.hypot(pair.stderr, np.mean(phi_pair_err)))

    return CoverageBounds(
        sigma=sigma,
        lower=low.mean,
        lower_stderr=lower_stderr,
        upper=float(np.clip(raw_upper, 0.0, 1.0)),
        upper_stderr=upper_stderr,
        raw_upper=float(raw_upper),
        n_pairs=int(distances.shape[0]),
    )


def disjointness_sigma(dataset, spec):
    """Noise level below which all shells around the dataset rows are disjoint

    Returns min_{i != j} |x_i - x_j| / (2 r_out); 0 when rows are duplicated.
    """
    if dataset.n_points < 2:
        raise ValueError(f"Disjointness needs at least two points, got {dataset.n_points}.")
    return min_pairwise_distance(dataset) / (2 * spec.r_out)


def shells_disjoint(dataset, spec, sigma):
    """Exhaustive check that no two shells of radius sigma r_out intersect"""
    sigma = check_sigma(sigma)
    if dataset.n_points < 2:
        return True
    squared = squared_distances(dataset.values, dataset.values)
    upper = squared[np.triu_indices(dataset.n_points, k=1)]
    return bool(np.all(upper > (2 * sigma * spec.r_out) ** 2))
