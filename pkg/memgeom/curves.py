import numpy as np

from .utils.artifacts import read_csv, write_csv

# Author: memgeom developers
# License: BSD 3 clause


class DiagnosticCurve:
    """Ordered (sigma, value, stderr, n_samples) records

    Parameters
    ----------
    sigma : array of shape (n_knots, )
        strictly increasing noise levels
    value : array of shape (n_knots, )
    stderr : array of shape (n_knots, ), optional
        defaults to zeros (deterministic curves)
    n_samples : array of shape (n_knots, ), optional
        defaults to ones
    name : str, optional
    """

    def __init__(self, sigma, value, stderr=None, n_samples=None, name="curve"):
        sigma = np.array(sigma, dtype=np.float64).reshape(-1)
        value = np.array(value, dtype=np.float64).reshape(-1)
        if stderr is None:
            stderr = np.zeros_like(value)
        if n_samples is None:
            n_samples = np.ones(value.shape, dtype=np.int64)
        stderr = np.array(stderr, dtype=np.float64).reshape(-1)
        n_samples = np.array(n_samples, dtype=np.int64).reshape(-1)

        if not (sigma.shape == value.shape == stderr.shape == n_samples.shape):
            raise ValueError(
                f"Curve columns should have equal lengths, got sigma={sigma.shape}, "
                f"value={value.shape}, stderr={stderr.shape}, n={n_samples.shape}."
            )
        if np.any(np.diff(sigma) <= 0):
            raise ValueError("Curve sigmas should be strictly increasing.")
        if np.any(stderr < 0):
            raise ValueError("Curve standard errors should be nonnegative.")

        for array in (sigma, value, stderr, n_samples):
            array.setflags(write=False)
        self.sigma = sigma
        self.value = value
        self.stderr = stderr
        self.n_samples = n_samples
        self.name = name

    def __len__(self):
        return self.sigma.shape[0]

    def __iter__(self):
        return iter(
            zip(
                self.sigma.tolist(),
                self.value.tolist(),
                self.stderr.tolist(),
                self.n_samples.tolist(),
            )
        )

    def __repr__(self):
        return (
            f"DiagnosticCurve(name={self.name!r}, n_knots={len(self)}, "
            f"sigma=[{self.sigma[0]:.3g}, {self.sigma[-1]:.3g}])"
        )

    def __eq__(self, other):
        if not isinstance(other, DiagnosticCurve):
            return NotImplemented
        return (
            np.array_equal(self.sigma, other.sigma)
            and np.array_equal(self.value, other.value)
            and np.array_equal(self.stderr, other.stderr)
            and np.array_equal(self.n_samples, other.n_samples)
        )

    def to_csv(self, path, meta=None):
        """Writes the curve as CSV with columns ``sigma,value,stderr,n``"""
        return write_csv(path, ["sigma", "value", "stderr", "n"], iter(self), meta=meta)

    @classmethod
    def from_csv(cls, path, name=None):
        """Reads a curve written by :meth:`to_csv`"""
        header, columns, _ = read_csv(path)
        missing = {"sigma", "value", "stderr", "n"} - set(header)
        if missing:
            raise ValueError(f"{path}: missing curve columns {sorted(missing)}")
        return cls(
            [float(v) for v in columns["sigma"]],
            [float(v) for v in columns["value"]],
            [float(v) for v in columns["stderr"]],
            [int(v) for v in columns["n"]],
            name=name or str(path),
        )
