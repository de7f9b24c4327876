from abc import ABCMeta, abstractmethod

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh

from ..datasets import Dataset, as_points
from ._weights import check_sigma, log_posterior_weights

_DENOISER_KINDS = dict()


def register_denoiser_kind(kind):
    """Class decorator registering a denoiser under `kind` for config loading"""

    def decorator(cls):
        cls.kind = kind
        _DENOISER_KINDS[kind] = cls
        return cls

    return decorator


class Denoiser(metaclass=ABCMeta):
    """Base class for closed-form denoisers x -> m(x, sigma)

    Calling a denoiser on a vector of shape (dim, ) returns a vector; calling
    it on a batch of shape (n, dim) returns a batch.
    """

    kind = None

    @property
    def dim(self):
        """Dimension of the inputs, None if any dimension is accepted"""
        return None

    def __call__(self, x, sigma):
        sigma = check_sigma(sigma)
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        points = as_points(x, dim=self.dim)
        out = self._denoise(points, sigma)
        return out[0] if single else out

    @abstractmethod
    def _denoise(self, points, sigma):
        """Denoises a validated (n, dim) batch"""

    @abstractmethod
    def to_dict(self):
        """JSON-ready description of the denoiser"""

    @classmethod
    @abstractmethod
    def from_dict(cls, config, datasets):
        """Inverse of :meth:`to_dict`"""

    def covers(self, sigma):
        return True


@register_denoiser_kind("empirical")
class EmpiricalDenoiser(Denoiser):
    """Posterior mean of the uniform distribution on a finite dataset

    m(x, sigma) = sum_i w_i(x, sigma) x_i

    Parameters
    ----------
    dataset : Dataset
    """

    def __init__(self, dataset):
        if not isinstance(dataset, Dataset):
            dataset = Dataset(dataset)
        self.dataset = dataset

    @property
    def dim(self):
        return self.dataset.dim

    def _denoise(self, points, sigma):
        weights = np.exp(log_posterior_weights(self.dataset.values, points, sigma))
        return weights @ self.dataset.values

    def __repr__(self):
        return f"EmpiricalDenoiser({self.dataset!r})"

    def to_dict(self):
        return {"kind": self.kind, "dataset": self.dataset.label}

    @classmethod
    def from_dict(cls, config, datasets):
        return cls(lookup_dataset(config["dataset"], datasets))


class GaussianModel:
    """Gaussian with mean mu and covariance Sigma

    Parameters
    ----------
    mean : array of shape (dim, )
    covariance : array of shape (dim, dim)
        symmetric to 1e-12 (relative) and positive semi-definite up to
        eigenvalues of -1e-10 (relative), which are clamped to 0
    """

    def __init__(self, mean, covariance):
        mean = np.array(mean, dtype=np.float64).reshape(-1)
        covariance = np.array(covariance, dtype=np.float64)
        dim = mean.shape[0]
        if covariance.shape != (dim, dim):
            raise ValueError(
                f"Covariance should have shape {(dim, dim)}, got {covariance.shape}."
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(covariance))):
            raise ValueError("Gaussian parameters should be finite.")
        scale = max(1.0, float(np.max(np.abs(covariance))))
        if np.max(np.abs(covariance - covariance.T)) > 1e-12 * scale:
            raise ValueError("Covariance should be symmetric.")
        covariance = (covariance + covariance.T) / 2
        eigenvalues, eigenvectors = eigh(covariance)
        if eigenvalues[0] < -1e-10 * max(1.0, float(eigenvalues[-1])):
            raise ValueError(
                f"Covariance should be positive semi-definite, smallest eigenvalue is {eigenvalues[0]}."
            )
        if eigenvalues[0] < 0:
            eigenvalues = np.clip(eigenvalues, 0.0, None)
            covariance = (eigenvectors * eigenvalues) @ eigenvectors.T
            covariance = (covariance + covariance.T) / 2
        for array in (mean, covariance, eigenvalues):
            array.setflags(write=False)
        self.mean = mean
        self.covariance = covariance
        self.eigenvalues = eigenvalues

    @property
    def dim(self):
        return self.mean.shape[0]

    def __repr__(self):
        return f"GaussianModel(dim={self.dim}, trace={np.trace(self.covariance):.4g})"

    def factor(self, sigma):
        """Cholesky factorization of Sigma + sigma^2 I"""
        shifted = self.covariance + sigma**2 * np.eye(self.dim)
        return cho_factor(shifted, lower=True, check_finite=False)


def gaussian_from_dataset(dataset):
    """Gaussian with the dataset's empirical mean and biased covariance"""
    return GaussianModel(dataset.mean(), dataset.covariance())


@register_denoiser_kind("gaussian")
class GaussianDenoiser(Denoiser):
    """Posterior mean of a Gaussian prior

    m(x, sigma) = mu + Sigma (Sigma + sigma^2 I)^-1 (x - mu), computed with a
    Cholesky solve.

    Parameters
    ----------
    model : GaussianModel or Dataset
        a dataset is replaced by its moment-matched Gaussian
    """

    def __init__(self, model):
        self.source = None
        if isinstance(model, Dataset):
            self.source = model.label
            model = gaussian_from_dataset(model)
        self.model = model

    @property
    def dim(self):
        return self.model.dim

    def _denoise(self, points, sigma):
        centered = points - self.model.mean
        solved = cho_solve(self.model.factor(sigma), centered.T, check_finite=False)
        return self.model.mean + (self.model.covariance @ solved).T

    def __repr__(self):
        return f"GaussianDenoiser({self.model!r})"

    def to_dict(self):
        if self.source is not None:
            return {"kind": self.kind, "dataset": self.source}
        return {
            "kind": self.kind,
            "mean": self.model.mean.tolist(),
            "covariance": self.model.covariance.tolist(),
        }

    @classmethod
    def from_dict(cls, config, datasets):
        if "dataset" in config:
            return cls(lookup_dataset(config["dataset"], datasets))
        return cls(GaussianModel(config["mean"], config["covariance"]))


@register_denoiser_kind("constant")
class ConstantDenoiser(Denoiser):
    """Denoiser returning the same vector everywhere"""

    def __init__(self, vector):
        vector = np.array(vector, dtype=np.float64).reshape(-1)
        vector.setflags(write=False)
        self.vector = vector

    @property
    def dim(self):
        return self.vector.shape[0]

    def _denoise(self, points, sigma):
        return np.broadcast_to(self.vector, points.shape).copy()

    def __repr__(self):
        return f"ConstantDenoiser(dim={self.dim})"

    def to_dict(self):
        return {"kind": self.kind, "vector": self.vector.tolist()}

    @classmethod
    def from_dict(cls, config, datasets):
        return cls(config["vector"])


@register_denoiser_kind("identity")
class IdentityDenoiser(Denoiser):
    """Denoiser returning its input"""

    def _denoise(self, points, sigma):
        return points.copy()

    def __repr__(self):
        return "IdentityDenoiser()"

    def to_dict(self):
        return {"kind": self.kind}

    @classmethod
    def from_dict(cls, config, datasets):
        return cls()


@register_denoiser_kind("composite")
class CompositeDenoiser(Denoiser):
    """Piecewise denoiser selecting a branch by noise level

    Parameters
    ----------
    intervals : list of ((sigma_lo, sigma_hi), Denoiser)
        contiguous, non-overlapping noise intervals. Each branch owns
        [sigma_lo, sigma_hi); the highest one also owns its upper end. A noise
        level on a boundary therefore goes to the higher-noise branch.

    Examples
    --------
    >>> swap = CompositeDenoiser([((8.4, 80.0), base), ((0.14, 8.4), insert),
    ...                           ((0.002, 0.14), base)])
    """

    def __init__(self, intervals):
        pieces = []
        for (sigma_lo, sigma_hi), denoiser in intervals:
            sigma_lo, sigma_hi = float(sigma_lo), float(sigma_hi)
            if not 0 < sigma_lo < sigma_hi:
                raise ValueError(
                    f"Composite intervals need 0 < sigma_lo < sigma_hi, got ({sigma_lo}, {sigma_hi})."
                )
            if not isinstance(denoiser, Denoiser):
                raise ValueError(f"Expected a Denoiser, got {denoiser!r}.")
            pieces.append((sigma_lo, sigma_hi, denoiser))
        if not pieces:
            raise ValueError("A composite denoiser needs at least one interval.")
        pieces.sort(key=lambda piece: piece[1], reverse=True)
        for upper, lower in zip(pieces[:-1], pieces[1:]):
            if upper[0] != lower[1]:
                raise ValueError(
                    f"Composite intervals should be contiguous without overlap, "
                    f"got [{lower[0]}, {lower[1]}) below [{upper[0]}, {upper[1]})."
                )
        dims = {piece[2].dim for piece in pieces} - {None}
        if len(dims) > 1:
            raise ValueError(f"Composite branches have different dimensions {sorted(dims)}.")
        self._dim = dims.pop() if dims else None
        self.pieces = tuple(pieces)

    @property
    def dim(self):
        return self._dim

    @property
    def sigma_min(self):
        return self.pieces[-1][0]

    @property
    def sigma_max(self):
        return self.pieces[0][1]

    def covers(self, sigma):
        return self.sigma_min <= sigma <= self.sigma_max

    def branch(self, sigma):
        """The denoiser active at noise level `sigma`"""
        for position, (sigma_lo, sigma_hi, denoiser) in enumerate(self.pieces):
            if sigma_lo <= sigma < sigma_hi or (position == 0 and sigma == sigma_hi):
                return denoiser
        raise ValueError(
            f"sigma={sigma} is outside the composite range [{self.sigma_min}, {self.sigma_max}]."
        )

    def __call__(self, x, sigma):
        return self.branch(check_sigma(sigma))(x, sigma)

    def _denoise(self, points, sigma):
        return self.branch(sigma)._denoise(points, sigma)

    def __repr__(self):
        bands = ", ".join(f"[{lo:.4g}, {hi:.4g}): {d!r}" for lo, hi, d in self.pieces)
        return f"CompositeDenoiser({bands})"

    def to_dict(self):
        return {
            "kind": self.kind,
            "intervals": [
                {"sigma_lo": lo, "sigma_hi": hi, "denoiser": denoiser.to_dict()}
                for lo, hi, denoiser in self.pieces
            ],
        }

    @classmethod
    def from_dict(cls, config, datasets):
        return cls(
            [
                ((item["sigma_lo"], item["sigma_hi"]), denoiser_from_dict(item["denoiser"], datasets))
                for item in config["intervals"]
            ]
        )


def lookup_dataset(label, datasets):
    """Resolves a dataset label against a Dataset or a label -> Dataset mapping"""
    if isinstance(datasets, Dataset):
        return datasets
    if datasets is None or label not in datasets:
        raise ValueError(f"Denoiser config references unknown dataset {label!r}.")
    return datasets[label]


def denoiser_to_dict(denoiser):
    """JSON-ready description of a denoiser, see :func:`denoiser_from_dict`"""
    return denoiser.to_dict()


def denoiser_from_dict(config, datasets=None):
    """Builds a denoiser from its description

    Parameters
    ----------
    config : dict
        must hold a ``kind`` key naming a registered denoiser kind
    datasets : Dataset or dict of str -> Dataset, optional
        datasets referenced by label

    Returns
    -------
    Denoiser
    """
    kind = config.get("kind")
    if kind not in _DENOISER_KINDS:
        raise ValueError(
            f"Unknown denoiser kind {kind!r}, known kinds are {sorted(_DENOISER_KINDS)}."
        )
    return _DENOISER_KINDS[kind].from_dict(config, datasets)
