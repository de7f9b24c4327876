import numpy as np


class DatasetError(ValueError):
    """Invalid dataset content, with the offending position when known

    Parameters
    ----------
    message : str
    row, column : int, optional
        0-based position of the offending entry
    path : str, optional
    """

    def __init__(self, message, row=None, column=None, path=None):
        self.row = row
        self.column = column
        self.path = path
        location = []
        if path is not None:
            location.append(str(path))
        if row is not None:
            location.append(f"row {row + 1}")
        if column is not None:
            location.append(f"column {column + 1}")
        if location:
            message = f"{', '.join(location)}: {message}"
        super().__init__(message)


class Dataset:
    """Immutable finite training set of N points in dimension d

    Parameters
    ----------
    values : array-like of shape (n_points, dim)
        copied into a read-only 64-bit float array
    label : str, optional
        text identifier, used when the dataset is referenced from configs

    Examples
    --------
    >>> from memgeom.datasets import Dataset
    >>> data = Dataset([[0.0, 0.0], [1.0, 1.0]], label="toy")
    >>> data.n_points, data.dim
    (2, 2)
    """

    def __init__(self, values, label="dataset"):
        values = np.array(values, dtype=np.float64, order="C", copy=True)
        if values.ndim != 2:
            raise DatasetError(
                f"values should be a matrix of shape (n_points, dim), got ndim={values.ndim}"
            )
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise DatasetError(f"a dataset needs n_points >= 1 and dim >= 1, got {values.shape}")
        bad = np.argwhere(~np.isfinite(values))
        if bad.size:
            row, column = (int(i) for i in bad[0])
            raise DatasetError(
                f"non-finite entry {values[row, column]!r}", row=row, column=column
            )
        values.setflags(write=False)
        self._values = values
        self.label = str(label)

    @property
    def values(self):
        """Read-only (n_points, dim) matrix"""
        return self._values

    @property
    def n_points(self):
        return self._values.shape[0]

    @property
    def dim(self):
        return self._values.shape[1]

    @property
    def shape(self):
        return self._values.shape

    def __len__(self):
        return self.n_points

    def __getitem__(self, index):
        return self._values[index]

    def __iter__(self):
        return iter(self._values)

    def __repr__(self):
        return f"Dataset(label={self.label!r}, n_points={self.n_points}, dim={self.dim})"

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash((self.shape, self._values.tobytes()))

    def mean(self):
        """Empirical mean of the rows"""
        return self._values.mean(axis=0)

    def covariance(self):
        """Biased (1/N) empirical covariance of the rows"""
        centered = self._values - self.mean()
        return centered.T @ centered / self.n_points

    def diameter(self):
        """Largest pairwise Euclidean distance between rows"""
        from .distances import pairwise_distances

        if self.n_points < 2:
            return 0.0
        return float(np.max(pairwise_distances(self._values, self._values)))

    def subset(self, indices, label=None):
        """Dataset made of the rows at `indices`, in that order"""
        indices = np.asarray(indices, dtype=np.int64).reshape(-1)
        return Dataset(self._values[indices], label=label or f"{self.label}[subset]")

    def scaled(self, factor, label=None):
        """Dataset with every row multiplied by `factor`"""
        return Dataset(self._values * float(factor), label=label or self.label)

    def contains_rows(self, other):
        """Boolean mask over the rows of `other` that also appear in this dataset"""
        other = as_points(other, dim=self.dim)
        own = {row.tobytes() for row in self._values}
        return np.array([row.tobytes() in own for row in other], dtype=bool)


def as_points(points, dim=None, name="points"):
    """Validates a batch of points, returning a float array of shape (n, dim)

    `points` may be a :class:`Dataset`, a single d-vector or an (n, d) array.
    """
    if isinstance(points, Dataset):
        array = points.values
    else:
        array = np.asarray(points, dtype=np.float64)
        if array.ndim == 1:
            array = array[None, :]
    if array.ndim != 2:
        raise ValueError(f"{name} should be a vector or a matrix, got ndim={array.ndim}")
    if dim is not None and array.shape[1] != dim:
        raise ValueError(f"{name} have dimension {array.shape[1]}, expected {dim}")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} contain non-finite entries")
    return array


def as_vector(x, dim=None, name="x"):
    """Validates a single d-vector"""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"{name} should be a vector, got shape {x.shape}")
    if dim is not None and x.shape[0] != dim:
        raise ValueError(f"{name} has dimension {x.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite entries")
    return x
