from dataclasses import dataclass

import numpy as np

from ..datasets import nearest_neighbor_distances

# A sample is memorized when d1NN < d2NN / MEMORIZATION_RATIO
MEMORIZATION_RATIO = 3.0


def memorization_flags(dataset, samples, ratio=MEMORIZATION_RATIO):
    """Nearest-neighbor distance-ratio test of generated samples

    Parameters
    ----------
    dataset : Dataset
        training set, at least two rows
    samples : array of shape (n_samples, dim)
    ratio : float, default is 3

    Returns
    -------
    d1nn, d2nn : ndarray of shape (n_samples, )
    flags : ndarray of bool
        d1nn < d2nn / ratio (strict, so exact ties are never flagged)
    """
    if dataset.n_points < 2:
        raise ValueError(
            "The memorization criterion needs a second nearest neighbor, "
            f"got a dataset of {dataset.n_points} point."
        )
    if not ratio > 0:
        raise ValueError(f"ratio should be positive, got {ratio}.")
    nearest = nearest_neighbor_distances(dataset, samples, k=2)
    d1nn, d2nn = nearest[:, 0], nearest[:, 1]
    return d1nn, d2nn, d1nn < d2nn / ratio


@dataclass(frozen=True)
class MemorizationReport:
    """Fraction of samples that copy a training point

    Attributes
    ----------
    n_samples, n_memorized : int
    rate : float
        n_memorized / n_samples
    d1nn, d2nn : ndarray
        per-sample nearest and second-nearest training distances
    flags : ndarray of bool
    n_ties : int
        samples with d1nn == d2nn (equidistant to duplicate rows)
    ratio : float
    """

    n_samples: int
    n_memorized: int
    rate: float
    d1nn: np.ndarray
    d2nn: np.ndarray
    flags: np.ndarray
    n_ties: int
    ratio: float = MEMORIZATION_RATIO

    @classmethod
    def from_samples(cls, dataset, samples, ratio=MEMORIZATION_RATIO):
        d1nn, d2nn, flags = memorization_flags(dataset, samples, ratio=ratio)
        n_memorized = int(np.sum(flags))
        return cls(
            n_samples=int(flags.shape[0]),
            n_memorized=n_memorized,
            rate=n_memorized / flags.shape[0],
            d1nn=d1nn,
            d2nn=d2nn,
            flags=flags,
            n_ties=int(np.sum(d1nn == d2nn)),
            ratio=float(ratio),
        )

    def __repr__(self):
        return (
            f"MemorizationReport(rate={self.rate:.4f}, n_memorized={self.n_memorized}, "
            f"n_samples={self.n_samples})"
        )

    def to_dict(self, records=True):
        result = {
            "n_samples": self.n_samples,
            "n_memorized": self.n_memorized,
            "rate": self.rate,
            "n_ties": self.n_ties,
            "ratio": self.ratio,
        }
        if records:
            result["records"] = [
                {"d1nn": float(a), "d2nn": float(b), "memorized": bool(f)}
                for a, b, f in zip(self.d1nn, self.d2nn, self.flags)
            ]
        return result
