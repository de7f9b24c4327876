import numpy as np


def squared_error(y_true, y_pred):
    """Squared Euclidean error per sample

    Parameters
    ----------
    y_true : array of shape (n_samples, dim)
        Ground truth (correct) target values.
    y_pred : array of shape (n_samples, dim)
        Estimated target values.

    Returns
    -------
    array of shape (n_samples, )
    """
    diff = np.asarray(y_pred, dtype=np.float64) - np.asarray(y_true, dtype=np.float64)
    return np.einsum("...k,...k->...", diff, diff)
