import numpy as np
from scipy.linalg import cho_solve

from ..curves import DiagnosticCurve
from ..datasets import as_points, as_vector
from ..metrics import squared_error
from ..random import monte_carlo, resolve_seed, stream_rng
from ._denoisers import (
    Denoiser,
    EmpiricalDenoiser,
    GaussianDenoiser,
    denoiser_from_dict,
    gaussian_from_dataset,
)
from ._weights import check_sigma, posterior_weight_matrix


def denoise(denoiser, x, sigma, datasets=None):
    """Evaluates a denoiser, given as an instance or as its dict description

    Parameters
    ----------
    denoiser : Denoiser or dict
    x : array of shape (dim, ) or (n, dim)
    sigma : float
    datasets : Dataset or dict, optional
        used to resolve a dict description, see :func:`denoiser_from_dict`
    """
    if not isinstance(denoiser, Denoiser):
        denoiser = denoiser_from_dict(denoiser, datasets)
    return denoiser(x, sigma)


def denoising_mse(denoiser, eval_set, sigma, n_noise, seed, key=()):
    """Monte Carlo estimate of E |m(X + sigma Z, sigma) - X|^2

    Every row X of `eval_set` is paired with `n_noise` independent standard
    normal draws Z; sample ``s`` uses row ``s // n_noise``.

    Parameters
    ----------
    denoiser : Denoiser
    eval_set : Dataset
    sigma : float
    n_noise : int
        noise draws per row
    seed : int
    key : tuple of int, optional
        random stream prefix, see :func:`memgeom.random.monte_carlo`

    Returns
    -------
    MCEstimate
        mean squared error and its standard error
    """
    sigma = check_sigma(sigma)
    if n_noise < 1:
        raise ValueError(f"n_noise should be at least 1, got {n_noise}.")
    values = eval_set.values

    def sample(rng, start, size):
        rows = values[(start + np.arange(size)) // n_noise]
        noisy = rows + sigma * rng.standard_normal(rows.shape)
        return squared_error(rows, denoiser(noisy, sigma))

    return monte_carlo(sample, eval_set.n_points * int(n_noise), seed, key=key)


def generalization_gap(denoiser, train, test, sigma, n_noise, seed):
    """Denoising MSE on the training set and on a held-out test set

    Returns
    -------
    train_mse, test_mse : MCEstimate
    """
    seed = resolve_seed(seed)
    train_mse = denoising_mse(denoiser, train, sigma, n_noise, seed, key=(0,))
    test_mse = denoising_mse(denoiser, test, sigma, n_noise, seed, key=(1,))
    return train_mse, test_mse


def finite_difference_jacobian(denoiser, x, sigma, fd_step=1e-5):
    """Central finite-difference Jacobian of ``denoiser(., sigma)`` at `x`

    Returns
    -------
    ndarray of shape (dim, dim)
        entry (i, j) approximates d m_i / d x_j
    """
    sigma = check_sigma(sigma)
    if not fd_step > 0:
        raise ValueError(f"fd_step should be positive, got {fd_step}.")
    x = as_vector(x)
    shifts = fd_step * np.eye(x.shape[0])
    forward = denoiser(x + shifts, sigma)
    backward = denoiser(x - shifts, sigma)
    return (forward - backward).T / (2 * fd_step)


def posterior_covariance_jacobian(dataset, x, sigma):
    """Jacobian of the empirical denoiser through the posterior covariance

    grad m(x) = Cov(X | X_sigma = x) / sigma^2
              = (sum_i w_i x_i x_i^T - m m^T) / sigma^2
    """
    sigma = check_sigma(sigma)
    x = as_vector(x, dim=dataset.dim)
    weights = posterior_weight_matrix(dataset, x[None, :], sigma)[0]
    mean = weights @ dataset.values
    centered = dataset.values - mean
    return (centered.T * weights) @ centered / sigma**2


def gaussian_jacobian(model, sigma):
    """Jacobian Sigma (Sigma + sigma^2 I)^-1 of the Gaussian denoiser (constant in x)"""
    sigma = check_sigma(sigma)
    return cho_solve(model.factor(sigma), model.covariance, check_finite=False).T


def tweedie_jacobian_check(dataset, x, sigma, fd_step=1e-5):
    """Compares the finite-difference and posterior-covariance Jacobians

    Parameters
    ----------
    dataset : Dataset
    x : array of shape (dim, )
    sigma : float
    fd_step : float, default is 1e-5

    Returns
    -------
    max_rel_err : float
        max |J_fd - J_cov| divided by max |J_cov|; 0 when both vanish
    """
    numeric = finite_difference_jacobian(EmpiricalDenoiser(dataset), x, sigma, fd_step)
    analytic = posterior_covariance_jacobian(dataset, x, sigma)
    error = float(np.max(np.abs(numeric - analytic)))
    scale = float(np.max(np.abs(analytic)))
    if error == 0:
        return 0.0
    return error / max(scale, np.finfo(np.float64).tiny)


def gauss_excess_profile(dataset, sigma_grid, n_eval, seed):
    """Scaled gap (1 + sigma)^2 sup_x |m_sigma(x) - m^G_sigma(x)| across noise levels

    m^G uses the dataset's empirical mean and biased covariance. The supremum
    is taken over `n_eval` dataset rows drawn without replacement (all rows
    when ``n_eval >= n_points``); points off the data support are not probed.

    Parameters
    ----------
    dataset : Dataset
    sigma_grid : SigmaGrid or array
    n_eval : int
    seed : int

    Returns
    -------
    DiagnosticCurve
    """
    if n_eval < 1:
        raise ValueError(f"n_eval should be at least 1, got {n_eval}.")
    sigmas = np.asarray(getattr(sigma_grid, "values", sigma_grid), dtype=np.float64)
    n_eval = min(int(n_eval), dataset.n_points)
    rng = stream_rng(seed, 0)
    rows = np.sort(rng.choice(dataset.n_points, size=n_eval, replace=False))
    points = as_points(dataset.values[rows])

    empirical = EmpiricalDenoiser(dataset)
    gaussian = GaussianDenoiser(gaussian_from_dataset(dataset))
    values = []
    for sigma in sigmas:
        gap = empirical(points, sigma) - gaussian(points, sigma)
        values.append(np.max(np.sqrt(np.einsum("ij,ij->i", gap, gap))) * (1 + sigma) ** 2)
    return DiagnosticCurve(
        sigmas, values, n_samples=np.full(sigmas.shape, n_eval), name="gauss-excess"
    )
