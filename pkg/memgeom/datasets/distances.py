"""
Brute-force Euclidean distances.

Squared distances come from scipy.spatial.distance.cdist with the
"sqeuclidean" metric, which sums (a - b) ** 2 directly instead of going through
|a|^2 + |b|^2 - 2<a, b>, which loses all precision for nearby points.
"""

import numpy as np
from scipy.spatial.distance import cdist

from ..random import parallel_map
from ._dataset import Dataset, as_points, as_vector


def squared_distances(a, b):
    """Matrix of squared Euclidean distances between the rows of `a` and `b`

    Parameters
    ----------
    a : array of shape (n, d)
    b : array of shape (m, d)

    Returns
    -------
    ndarray of shape (n, m)
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim == 1:
        a = a[None, :]
    if b.ndim == 1:
        b = b[None, :]
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"Dimension mismatch: {a.shape[1]} != {b.shape[1]}")
    return cdist(a, b, "sqeuclidean")


def pairwise_distances(a, b):
    """Matrix of Euclidean distances between the rows of `a` and `b`"""
    return np.sqrt(squared_distances(a, b))


class DistanceProfile:
    """Sorted distances from one query to every dataset row

    Parameters
    ----------
    distances : array of shape (n_points, )
        ascending distances; for a member query the first entry is the
        query's own zero distance
    is_member : bool
    index : int or None
        row index of the query when it is a member
    """

    def __init__(self, distances, is_member=False, index=None):
        distances = np.array(distances, dtype=np.float64)
        distances.setflags(write=False)
        self.distances = distances
        self.is_member = bool(is_member)
        self.index = index

    def __len__(self):
        return self.distances.shape[0]

    def __repr__(self):
        return (
            f"DistanceProfile(n_points={len(self)}, is_member={self.is_member}, "
            f"d1NN={self.distances[0]:.4g})"
        )

    def knn(self, k):
        """Distance to the k-th nearest row (k >= 1)"""
        if not 1 <= k <= len(self):
            raise ValueError(f"k should be in [1, {len(self)}], got {k}")
        return float(self.distances[k - 1])

    @property
    def d1nn(self):
        return self.knn(1)

    @property
    def d2nn(self):
        return self.knn(2)


def _member_index(dataset, query):
    matches = np.flatnonzero(np.all(dataset.values == query[None, :], axis=1))
    if matches.size == 0:
        raise ValueError("query is flagged as a member but is not a row of the dataset")
    return int(matches[0])


def distance_profile(dataset, query, is_member=False, index=None):
    """Ascending Euclidean distances from `query` to the rows of `dataset`

    Parameters
    ----------
    dataset : Dataset
    query : array of shape (dim, )
    is_member : bool, default is False
        if True, the query is treated as the dataset row `index` (or the first
        row equal to it): that row contributes the leading zero and duplicates
        of it keep their own zero distances
    index : int, optional
        row of the member query

    Returns
    -------
    DistanceProfile
    """
    query = as_vector(query, dim=dataset.dim, name="query")
    distances = pairwise_distances(query[None, :], dataset.values)[0]
    if not is_member:
        return DistanceProfile(np.sort(distances))

    if index is None:
        index = _member_index(dataset, query)
    elif not np.array_equal(dataset.values[index], query):
        raise ValueError(f"query differs from dataset row {index}")
    others = np.delete(distances, index)
    return DistanceProfile(np.concatenate([[0.0], np.sort(others)]), True, int(index))


def nearest_neighbor_distances(dataset, queries, k=2, member_indices=None, block_size=256):
    """Distances from many queries to their k nearest dataset rows

    Parameters
    ----------
    dataset : Dataset
    queries : array of shape (n_queries, dim) or Dataset
    k : int, default is 2
    member_indices : array of shape (n_queries, ), optional
        row index of each query inside `dataset` (member queries); the own
        row is replaced by an exact zero
    block_size : int, default is 256
        number of queries per parallel task

    Returns
    -------
    ndarray of shape (n_queries, k)
        ascending distances, ordered by query index
    """
    queries = as_points(queries, dim=dataset.dim, name="queries")
    if not 1 <= k <= dataset.n_points:
        raise ValueError(f"k should be in [1, {dataset.n_points}], got {k}")
    if member_indices is not None:
        member_indices = np.asarray(member_indices, dtype=np.int64).reshape(-1)
        if member_indices.shape[0] != queries.shape[0]:
            raise ValueError("member_indices should have one entry per query")

    starts = list(range(0, queries.shape[0], block_size))

    def run_block(start):
        block = queries[start : start + block_size]
        sq = squared_distances(block, dataset.values)
        if member_indices is not None:
            rows = np.arange(block.shape[0])
            own = member_indices[start : start + block_size]
            sq[rows, own] = np.inf
            nearest = np.sort(sq, axis=1)[:, : k - 1]
            return np.concatenate([np.zeros((block.shape[0], 1)), np.sqrt(nearest)], axis=1)
        return np.sqrt(np.sort(sq, axis=1)[:, :k])

    return np.concatenate(parallel_map(run_block, starts), axis=0)


def min_pairwise_distance(dataset):
    """Smallest distance between two distinct rows (0 for duplicate rows)"""
    if not isinstance(dataset, Dataset):
        dataset = Dataset(dataset)
    if dataset.n_points < 2:
        raise ValueError("At least two points are needed for a pairwise distance.")
    sq = squared_distances(dataset.values, dataset.values)
    np.fill_diagonal(sq, np.inf)
    return float(np.sqrt(np.min(sq)))
