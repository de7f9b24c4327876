import warnings
from dataclasses import dataclass

import numpy as np

from ..datasets import distance_profile
from ..denoise import log_posterior_weights
from ..random import MCEstimate, monte_carlo, resolve_seed, stream_rng, summarize
from ._normal import normal_isf, normal_quantile, normal_sf
from ._weights import self_weight_samples


def check_levels(q, delta):
    q, delta = float(q), float(delta)
    if not 0.5 < q < 1:
        raise ValueError(f"q should lie in the open interval (1/2, 1), got {q}.")
    if not 0 < delta < 1:
        raise ValueError(f"delta should lie in the open interval (0, 1), got {delta}.")
    return q, delta


def _check_point(dataset, point_index):
    if dataset.n_points < 2:
        raise ValueError(f"Thresholds need at least 2 points, got {dataset.n_points}.")
    if not 0 <= point_index < dataset.n_points:
        raise ValueError(
            f"point_index should be in [0, {dataset.n_points}), got {point_index}."
        )
    return int(point_index)


def a_constants(n_points, q, delta):
    """Upper-regime constants a_K for K = 1, ..., n_points - 1

    a_K = F^-1(delta / K) + sqrt(F^-1(delta / K)^2 + 2 log(K q / (1 - q)))
    """
    q, delta = check_levels(q, delta)
    k = np.arange(1, int(n_points), dtype=np.float64)
    quantile = normal_quantile(delta / k)
    return quantile + np.sqrt(quantile**2 + 2 * np.log(k * q / (1 - q)))


def b_constant(n_points, q, delta):
    """Lower-regime constant b = G + sqrt(G^2 + 2 log(N q / (1 - q))), G = -F^-1(delta / N)"""
    q, delta = check_levels(q, delta)
    quantile = normal_isf(delta / n_points)
    return float(quantile + np.sqrt(quantile**2 + 2 * np.log(n_points * q / (1 - q))))


@dataclass(frozen=True)
class ThresholdReport:
    """Noise levels bracketing the concentration of the self weight of one row

    For sigma <= sigma_low, w_1 >= q with probability at least 1 - delta;
    for sigma >= sigma_high, w_1 <= q with probability at least 1 - delta.
    ``sigma_high`` is nan and ``k_star`` is None when no a_K is positive.
    """

    point_index: int
    sigma_high: float
    k_star: int
    sigma_low: float
    q: float
    delta: float
    a_constants: np.ndarray
    b_constant: float
    d2nn: float

    def __repr__(self):
        return (
            f"ThresholdReport(point_index={self.point_index}, sigma_low={self.sigma_low:.4g}, "
            f"sigma_high={self.sigma_high:.4g}, k_star={self.k_star})"
        )

    def to_dict(self):
        return {
            "point_index": self.point_index,
            "sigma_high": self.sigma_high,
            "k_star": self.k_star,
            "sigma_low": self.sigma_low,
            "q": self.q,
            "delta": self.delta,
            "a_constants": self.a_constants.tolist(),
            "b_constant": self.b_constant,
            "d2nn": self.d2nn,
        }


def concentration_thresholds(dataset, point_index, q, delta):
    """Noise-level thresholds for the concentration of the posterior weight of a row

    Parameters
    ----------
    dataset : Dataset
        at least 2 rows
    point_index : int
        row x_1 whose self weight w_1(x_1 + sigma Z, sigma) is studied
    q : float in (1/2, 1)
        weight level
    delta : float in (0, 1)
        failure probability

    Returns
    -------
    ThresholdReport
        sigma_high = min_{K=2..N} d_KNN / a_{K-1} with d_1NN = 0 the row
        itself, sigma_low = d_2NN / b

    Notes
    -----
    Every K is scanned. K with a_{K-1} <= 0 are skipped; if all are skipped
    a RuntimeWarning is issued and no upper threshold is reported.
    """
    q, delta = check_levels(q, delta)
    point_index = _check_point(dataset, point_index)
    profile = distance_profile(dataset, dataset[point_index], is_member=True, index=point_index)
    n_points = dataset.n_points

    a_values = a_constants(n_points, q, delta)
    a_values.setflags(write=False)
    valid = a_values > 0
    if np.any(valid):
        k = np.arange(2, n_points + 1)[valid]
        candidates = profile.distances[k - 1] / a_values[valid]
        best = int(np.argmin(candidates))
        sigma_high, k_star = float(candidates[best]), int(k[best])
    else:
        warnings.warn(
            f"No positive a_K for q={q}, delta={delta}: no upper threshold.", RuntimeWarning
        )
        sigma_high, k_star = float("nan"), None

    b_value = b_constant(n_points, q, delta)
    return ThresholdReport(
        point_index=point_index,
        sigma_high=sigma_high,
        k_star=k_star,
        sigma_low=profile.d2nn / b_value,
        q=q,
        delta=delta,
        a_constants=a_values,
        b_constant=b_value,
        d2nn=profile.d2nn,
    )


@dataclass(frozen=True)
class ThresholdValidation:
    """Monte Carlo failure rates at both thresholds

    ``fail_high`` is the rate of w_1 > q at sigma_high, ``fail_low`` the rate
    of w_1 < q at sigma_low; each should stay below ``tolerance``.
    """

    report: ThresholdReport
    fail_high: MCEstimate
    fail_low: MCEstimate
    tolerance: float

    def __iter__(self):
        yield self.fail_high.mean
        yield self.fail_low.mean

    @property
    def passed(self):
        return self.fail_high.mean <= self.tolerance and self.fail_low.mean <= self.tolerance


def validate_thresholds(dataset, point_index, q, delta, n_trials, seed=None):
    """Checks both thresholds by sampling noisy copies of the row

    Parameters
    ----------
    dataset : Dataset
    point_index : int
    q, delta : float
    n_trials : int
        noise draws at each threshold
    seed : int, optional

    Returns
    -------
    ThresholdValidation
        tolerance is delta + 4 sqrt(delta (1 - delta) / n_trials)
    """
    report = concentration_thresholds(dataset, point_index, q, delta)
    if not (report.sigma_low > 0 and np.isfinite(report.sigma_high) and report.sigma_high > 0):
        raise ValueError(
            f"Thresholds of row {point_index} are degenerate, got sigma_low={report.sigma_low}, "
            f"sigma_high={report.sigma_high}."
        )
    seed = resolve_seed(seed)
    rows = [report.point_index]
    high = self_weight_samples(dataset, rows, report.sigma_high, n_trials, seed, key=(0,))
    low = self_weight_samples(dataset, rows, report.sigma_low, n_trials, seed, key=(1,))
    return ThresholdValidation(
        report=report,
        fail_high=summarize((high[:, 1] > q).astype(np.float64)),
        fail_low=summarize((low[:, 1] < q).astype(np.float64)),
        tolerance=delta + 4 * np.sqrt(delta * (1 - delta) / n_trials),
    )


@dataclass(frozen=True)
class ThresholdAverages:
    """Thresholds averaged over randomly drawn rows"""

    point_indices: np.ndarray
    sigma_high: float
    sigma_low: float
    q_high: float
    q_low: float
    delta: float
    reports: tuple

    def to_dict(self):
        return {
            "point_indices": self.point_indices.tolist(),
            "sigma_high": self.sigma_high,
            "sigma_low": self.sigma_low,
            "q_high": self.q_high,
            "q_low": self.q_low,
            "delta": self.delta,
        }


def average_thresholds(dataset, n_points=20, q_high=0.6, q_low=0.95, delta=0.05, seed=None):
    """Average thresholds over `n_points` rows drawn without replacement

    The upper threshold uses weight level `q_high` and the lower one `q_low`:
    above the average sigma_high the self weight stays below 0.6, below the
    average sigma_low it exceeds 0.95, each with probability 1 - delta.

    Returns
    -------
    ThresholdAverages
        rows without an upper threshold are left out of its average
    """
    n_points = min(int(n_points), dataset.n_points)
    if n_points < 1:
        raise ValueError(f"n_points should be at least 1, got {n_points}.")
    rng = stream_rng(resolve_seed(seed), 0)
    indices = np.sort(rng.choice(dataset.n_points, size=n_points, replace=False))
    highs = [concentration_thresholds(dataset, i, q_high, delta) for i in indices]
    lows = [concentration_thresholds(dataset, i, q_low, delta) for i in indices]
    sigma_high = np.array([r.sigma_high for r in highs])
    return ThresholdAverages(
        point_indices=indices,
        sigma_high=float(np.mean(sigma_high[np.isfinite(sigma_high)]))
        if np.any(np.isfinite(sigma_high))
        else float("nan"),
        sigma_low=float(np.mean([r.sigma_low for r in lows])),
        q_high=float(q_high),
        q_low=float(q_low),
        delta=float(delta),
        reports=tuple(zip(highs, lows)),
    )


def _kappa(n_points, epsilon):
    if n_points < 2:
        return float("inf")
    return float(np.log(epsilon / ((n_points - 1) * (1 - epsilon))))


def certificate_delta(dataset, point_index, sigma, epsilon):
    """Failure mass sum_{j != 1} F~(|d_j| / (2 sigma) + sigma kappa / |d_j|), d_j = x_j - x_1

    Returns
    -------
    delta, kappa : float
    """
    kappa = _kappa(dataset.n_points, epsilon)
    offsets = np.delete(dataset.values - dataset[point_index], point_index, axis=0)
    norms = np.sqrt(np.einsum("ij,ij->i", offsets, offsets))
    positive = norms > 0
    terms = normal_sf(norms[positive] / (2 * sigma) + sigma * kappa / norms[positive])
    # a duplicate row splits the weight whatever sigma is
    n_duplicates = int(np.sum(~positive)) if kappa < 0 else 0
    return float(np.sum(terms)) + n_duplicates, kappa


@dataclass(frozen=True)
class WeightCertificate:
    """With probability at least 1 - delta, w_1 >= 1 - epsilon and |m - x_1| <= distance_bound"""

    point_index: int
    sigma: float
    epsilon: float
    delta: float
    kappa_epsilon: float
    distance_bound: float

    @property
    def vacuous(self):
        return self.delta >= 1

    def to_dict(self):
        return dict(self.__dict__)


def weight_certificate(dataset, point_index, sigma, epsilon):
    """Probability that the self weight of a noisy row exceeds 1 - epsilon

    Parameters
    ----------
    dataset : Dataset
    point_index : int
    sigma : float
    epsilon : float in (0, 1)

    Returns
    -------
    WeightCertificate
        ``delta`` may exceed 1, in which case the certificate says nothing
    """
    sigma = float(sigma)
    if not sigma > 0:
        raise ValueError(f"sigma should be positive, got {sigma}.")
    epsilon = float(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon should lie in the open interval (0, 1), got {epsilon}.")
    if not 0 <= point_index < dataset.n_points:
        raise ValueError(
            f"point_index should be in [0, {dataset.n_points}), got {point_index}."
        )
    delta, kappa = certificate_delta(dataset, point_index, sigma, epsilon)
    return WeightCertificate(
        point_index=int(point_index),
        sigma=sigma,
        epsilon=epsilon,
        delta=delta,
        kappa_epsilon=kappa,
        distance_bound=dataset.diameter() * epsilon,
    )


def validate_certificate(dataset, point_index, sigma, epsilon, n_trials, seed=None):
    """Monte Carlo rate of noisy copies of a row violating its weight certificate

    A draw fails when w_1 < 1 - epsilon or |m(x_1 + sigma Z) - x_1| > D epsilon.

    Returns
    -------
    certificate : WeightCertificate
    failure_rate : MCEstimate
        should not exceed certificate.delta beyond Monte Carlo noise
    """
    certificate = weight_certificate(dataset, point_index, sigma, epsilon)
    values = dataset.values
    center = values[point_index]

    def sample(rng, start, size):
        noisy = center + sigma * rng.standard_normal((size, dataset.dim))
        weights = np.exp(log_posterior_weights(values, noisy, sigma))
        offsets = weights @ values - center
        distances = np.sqrt(np.einsum("ij,ij->i", offsets, offsets))
        failed = (weights[:, point_index] < 1 - epsilon) | (
            distances > certificate.distance_bound
        )
        return failed.astype(np.float64)

    return certificate, monte_carlo(sample, n_trials, resolve_seed(seed))
