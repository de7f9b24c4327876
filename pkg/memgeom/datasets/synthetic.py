from dataclasses import dataclass, field

import numpy as np

from ._dataset import Dataset
from ..random import stream_rng

SYNTHETIC_KINDS = ("gaussian-mixture", "two-cluster", "uniform-cube", "circulant-stationary")


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a desk-scale synthetic dataset

    Parameters
    ----------
    kind : {'gaussian-mixture', 'two-cluster', 'uniform-cube', 'circulant-stationary'}
    n_points : int
    dim : int
    seed : int
    params : dict
        kind-specific parameters:

        * gaussian-mixture: ``means`` (k, dim), ``scales`` (k,) or float,
          optional ``weights`` (k,)
        * two-cluster: ``separation`` s and ``width`` w; half of the points
          around +(s/2) e_1, the other half around -(s/2) e_1, plus isotropic
          Gaussian noise of scale w
        * uniform-cube: ``low`` and ``high`` (default 0 and 1)
        * circulant-stationary: ``spectrum`` (dim,) nonnegative DFT-ordered
          eigenvalues with spectrum[k] == spectrum[dim - k], optional ``mean``
    """

    kind: str
    n_points: int
    dim: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in SYNTHETIC_KINDS:
            raise ValueError(f"Unknown synthetic kind {self.kind!r}, expected one of {SYNTHETIC_KINDS}.")
        if int(self.n_points) < 1 or int(self.dim) < 1:
            raise ValueError(
                f"n_points and dim should be positive, got {self.n_points} and {self.dim}."
            )

    def to_dict(self):
        params = {
            k: np.asarray(v).tolist() if isinstance(v, (list, tuple, np.ndarray)) else v
            for k, v in self.params.items()
        }
        return {
            "kind": self.kind,
            "n_points": int(self.n_points),
            "dim": int(self.dim),
            "seed": int(self.seed),
            "params": params,
        }

    @classmethod
    def from_dict(cls, config):
        return cls(
            kind=config["kind"],
            n_points=int(config["n_points"]),
            dim=int(config["dim"]),
            seed=int(config.get("seed", 0)),
            params=dict(config.get("params", {})),
        )


def _mixture(spec, rng):
    means = np.atleast_2d(np.asarray(spec.params["means"], dtype=np.float64))
    n_components = means.shape[0]
    if means.shape[1] != spec.dim:
        raise ValueError(f"Mixture means have dimension {means.shape[1]}, expected {spec.dim}.")
    scales = np.broadcast_to(
        np.asarray(spec.params.get("scales", 1.0), dtype=np.float64), (n_components,)
    )
    weights = spec.params.get("weights")
    if weights is None:
        weights = np.full(n_components, 1.0 / n_components)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (n_components,) or np.any(weights < 0):
        raise ValueError("Mixture weights should be nonnegative, one per component.")
    weights = weights / weights.sum()
    components = rng.choice(n_components, size=spec.n_points, p=weights)
    noise = rng.standard_normal((spec.n_points, spec.dim))
    return means[components] + scales[components, None] * noise


def _two_cluster(spec, rng):
    separation = float(spec.params.get("separation", 10.0))
    width = float(spec.params.get("width", 1.0))
    n_plus = (spec.n_points + 1) // 2
    centers = np.zeros((spec.n_points, spec.dim))
    centers[:n_plus, 0] = separation / 2
    centers[n_plus:, 0] = -separation / 2
    if width == 0:
        return centers
    return centers + width * rng.standard_normal((spec.n_points, spec.dim))


def _uniform_cube(spec, rng):
    low = float(spec.params.get("low", 0.0))
    high = float(spec.params.get("high", 1.0))
    if not high > low:
        raise ValueError(f"uniform-cube needs low < high, got ({low}, {high}).")
    return rng.uniform(low, high, size=(spec.n_points, spec.dim))


def _circulant(spec, rng):
    from ..spectral import CirculantModel, circulant_matrix

    model = CirculantModel(spec.params["spectrum"])
    if model.dim != spec.dim:
        raise ValueError(f"Spectrum has length {model.dim}, expected {spec.dim}.")
    mean = np.broadcast_to(
        np.asarray(spec.params.get("mean", 0.0), dtype=np.float64), (spec.dim,)
    )
    return rng.multivariate_normal(mean, circulant_matrix(model), size=spec.n_points, method="eigh")


_GENERATORS = {
    "gaussian-mixture": _mixture,
    "two-cluster": _two_cluster,
    "uniform-cube": _uniform_cube,
    "circulant-stationary": _circulant,
}


def synthesize(spec, label=None, stream=0):
    """Generates the dataset described by `spec`

    A pure function of `spec`, seed included.

    Parameters
    ----------
    spec : SyntheticSpec
    label : str, optional
    stream : int, default is 0
        random stream of the seed to draw from; 0 for training data

    Returns
    -------
    Dataset

    Raises
    ------
    ValueError
        inconsistent parameters, e.g. a negative eigenvalue in the spectrum of
        a circulant-stationary spec
    """
    rng = stream_rng(spec.seed, stream)
    values = _GENERATORS[spec.kind](spec, rng)
    return Dataset(values, label=label or f"{spec.kind}-{spec.seed}")


def split_train_test(spec, n_test):
    """Training set and an independent test set drawn from the same law

    The training set is ``synthesize(spec)``; the test set has `n_test` points
    drawn from the seed's second stream.
    """
    train = synthesize(spec, label=f"{spec.kind}-{spec.seed}-train")
    test_spec = SyntheticSpec(spec.kind, n_test, spec.dim, spec.seed, spec.params)
    test = synthesize(test_spec, label=f"{spec.kind}-{spec.seed}-test", stream=1)
    return train, test
