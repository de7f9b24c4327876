import numpy as np

from ..datasets import Dataset, squared_distances
from ..denoise import (
    Denoiser,
    IdentityDenoiser,
    check_sigma,
    denoiser_from_dict,
    lookup_dataset,
    register_denoiser_kind,
)
from ..metrics import squared_error
from ..random import monte_carlo
from ._geometry import ShellSpec

NOISE_LAWS = ("annulus", "gaussian")


def sample_annulus(rng, size, spec):
    """Uniform samples on the annulus r_in <= |z| <= r_out of R^dim

    The direction is uniform on the sphere and the radius follows the density
    proportional to r^(dim - 1) on [r_in, r_out].

    Parameters
    ----------
    rng : np.random.Generator
    size : int
    spec : ShellSpec

    Returns
    -------
    ndarray of shape (size, dim)
    """
    directions = rng.standard_normal((size, spec.dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    ratio = (spec.r_in / spec.r_out) ** spec.dim
    uniform = rng.random(size)
    radii = spec.r_out * (ratio + uniform * (1 - ratio)) ** (1 / spec.dim)
    return directions * radii[:, None]


def annulus_second_moment(spec):
    """E |Z|^2 for Z uniform on the annulus"""
    d = spec.dim
    rho = spec.r_in / spec.r_out
    return d / (d + 2) * spec.r_out_sq * (1 - rho ** (d + 2)) / (1 - rho**d)


@register_denoiser_kind("shell-projector")
class ShellProjector(Denoiser):
    """Denoiser sending every point of a shell to the shell's center

    A point lying in the sigma-shells of several rows goes to the nearest of
    those rows; a point outside every shell is handed to `outside`. Each
    choice of `outside` gives a global minimizer of the shell-only objective
    as long as the shells are disjoint.

    Parameters
    ----------
    dataset : Dataset
    spec : ShellSpec
    outside : Denoiser, optional
        defaults to the identity
    """

    def __init__(self, dataset, spec, outside=None):
        if not isinstance(dataset, Dataset):
            dataset = Dataset(dataset)
        if spec.dim != dataset.dim:
            raise ValueError(f"Shell dimension {spec.dim} does not match dataset dimension {dataset.dim}.")
        self.dataset = dataset
        self.spec = spec
        self.outside = IdentityDenoiser() if outside is None else outside

    @property
    def dim(self):
        return self.dataset.dim

    def _denoise(self, points, sigma):
        scaled = squared_distances(points, self.dataset.values) / sigma**2
        inside = self.spec.contains_sq(scaled)
        hit = np.any(inside, axis=1)
        nearest = np.argmin(np.where(inside, scaled, np.inf), axis=1)
        out = np.empty_like(points)
        out[hit] = self.dataset.values[nearest[hit]]
        if not np.all(hit):
            out[~hit] = self.outside(points[~hit], sigma)
        return out

    def __repr__(self):
        return f"ShellProjector({self.dataset!r}, {self.spec!r}, outside={self.outside!r})"

    def to_dict(self):
        return {
            "kind": self.kind,
            "dataset": self.dataset.label,
            "dim": self.spec.dim,
            "c": self.spec.c,
            "outside": self.outside.to_dict(),
        }

    @classmethod
    def from_dict(cls, config, datasets):
        outside = denoiser_from_dict(config["outside"], datasets)
        dataset = lookup_dataset(config["dataset"], datasets)
        return cls(dataset, ShellSpec(config["dim"], config["c"]), outside=outside)


def shell_only_loss(dataset, spec, denoiser, sigma, n_samples, seed, noise="annulus"):
    """Monte Carlo estimate of E |m(x_i + sigma Z, sigma) - x_i|^2

    i is uniform over the dataset rows and Z is either uniform on the unit
    shell annulus (``noise='annulus'``), where disjoint shells make the loss
    vanish for shell projectors, or standard normal (``noise='gaussian'``).

    Parameters
    ----------
    dataset : Dataset
    spec : ShellSpec
    denoiser : Denoiser
    sigma : float
    n_samples : int
    seed : int
    noise : {'annulus', 'gaussian'}

    Returns
    -------
    MCEstimate
    """
    sigma = check_sigma(sigma)
    if noise not in NOISE_LAWS:
        raise ValueError(f"Unknown noise law {noise!r}, expected one of {NOISE_LAWS}.")
    values = dataset.values

    def sample(rng, start, size):
        rows = values[rng.integers(dataset.n_points, size=size)]
        if noise == "annulus":
            z = sample_annulus(rng, size, spec)
        else:
            z = rng.standard_normal(rows.shape)
        return squared_error(rows, denoiser(rows + sigma * z, sigma))

    return monte_carlo(sample, n_samples, seed)
