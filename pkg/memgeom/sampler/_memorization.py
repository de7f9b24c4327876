import warnings

import numpy as np

from ..curves import DiagnosticCurve
from ..datasets import as_points
from ..denoise import check_sigma
from ..metrics import MEMORIZATION_RATIO, MemorizationReport
from ..random import monte_carlo_samples, resolve_seed, summarize
from ._integrate import check_method, integrate

# Rate above which a noise level counts as memorized
MEMORIZED_CUTOFF = 0.5


def sample_terminals(denoiser, schedule, n_samples, method="heun", seed=None, dim=None):
    """Terminal states of `n_samples` probability-flow trajectories

    Trajectories start from sigma_max z with z ~ N(0, I) drawn chunk by chunk
    from independent streams, so that sample ``s`` does not depend on the
    number of workers.

    Returns
    -------
    ndarray of shape (n_samples, dim)
    """
    check_method(method)
    dim = dim if dim is not None else denoiser.dim
    if dim is None:
        raise ValueError(f"Cannot infer the sample dimension of {denoiser!r}.")

    def sample(rng, start, size):
        z = rng.standard_normal((size, dim))
        return integrate(denoiser, schedule, z, method).terminal

    return monte_carlo_samples(sample, n_samples, seed)


def trajectory_memorization(
    denoiser, dataset, schedule, n_samples, method="heun", seed=None, ratio=MEMORIZATION_RATIO
):
    """Fraction of generated samples that copy a training point

    Parameters
    ----------
    denoiser : Denoiser
    dataset : Dataset
        training set the samples are compared to
    schedule : NoiseSchedule
    n_samples : int
    method : {'heun', 'euler'}, default is 'heun'
    seed : int, optional
    ratio : float, default is 3
        a terminal state is memorized when d1NN < d2NN / ratio

    Returns
    -------
    MemorizationReport
    """
    if n_samples < 1:
        raise ValueError(f"n_samples should be at least 1, got {n_samples}.")
    terminals = sample_terminals(
        denoiser, schedule, n_samples, method, resolve_seed(seed), dim=dataset.dim
    )
    return MemorizationReport.from_samples(dataset, terminals, ratio=ratio)


def per_noise_memorization(
    denoiser, dataset, test_points, sigma, n_noise, seed=None, key=(), ratio=MEMORIZATION_RATIO
):
    """Memorization rate of one-step denoised test points at noise level `sigma`

    Every test point x is paired with `n_noise` draws z and m(x + sigma z, sigma)
    is checked against the training set.

    Parameters
    ----------
    denoiser : Denoiser
    dataset : Dataset
        training set, at least 2 rows
    test_points : Dataset or array of shape (n_test, dim)
        a UserWarning is issued when they share rows with `dataset`
    sigma : float
    n_noise : int
    seed : int, optional
    key : tuple of int, optional
        random stream prefix
    ratio : float, default is 3

    Returns
    -------
    MemorizationReport
    """
    sigma = check_sigma(sigma)
    if n_noise < 1:
        raise ValueError(f"n_noise should be at least 1, got {n_noise}.")
    points = as_points(test_points, dim=dataset.dim, name="test_points")
    overlap = int(np.sum(dataset.contains_rows(points)))
    if overlap:
        warnings.warn(f"{overlap} test points are training rows.", UserWarning)

    def sample(rng, start, size):
        rows = points[(start + np.arange(size)) // n_noise]
        return denoiser(rows + sigma * rng.standard_normal(rows.shape), sigma)

    denoised = monte_carlo_samples(sample, points.shape[0] * int(n_noise), seed, key=key)
    return MemorizationReport.from_samples(dataset, denoised, ratio=ratio)


def per_noise_memorization_curve(
    denoiser, dataset, test_points, sigma_grid, n_noise, seed=None, ratio=MEMORIZATION_RATIO, verbose=0
):
    """Per-noise-level memorization rate across a grid of noise levels

    Knot ``k`` draws from stream key ``(k,)``.

    Returns
    -------
    DiagnosticCurve
    """
    seed = resolve_seed(seed)
    sigmas = np.asarray(getattr(sigma_grid, "values", sigma_grid), dtype=np.float64)
    estimates = []
    for k, sigma in enumerate(sigmas):
        report = per_noise_memorization(
            denoiser, dataset, test_points, sigma, n_noise, seed, key=(k,), ratio=ratio
        )
        estimates.append(summarize(report.flags.astype(np.float64)))
        if verbose:
            print(f"sigma={sigma:.4g}: memorization rate={report.rate:.4f}")
    return DiagnosticCurve(
        sigmas,
        [e.mean for e in estimates],
        [e.stderr for e in estimates],
        [e.n_samples for e in estimates],
        name="per-noise-memorization",
    )


def memorized_levels(curve, cutoff=MEMORIZED_CUTOFF):
    """Noise levels of a per-noise memorization curve whose rate reaches `cutoff`

    The cutoff is a convention, not part of the memorization criterion.
    """
    if not 0 < cutoff <= 1:
        raise ValueError(f"cutoff should lie in (0, 1], got {cutoff}.")
    return curve.sigma[curve.value >= cutoff]
