from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .. import config


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo mean with its standard error"""

    mean: float
    stderr: float
    n_samples: int

    def __iter__(self):
        yield self.mean
        yield self.stderr


def check_random_state(seed):
    """Returns a valid random Generator

    Parameters
    ----------
    seed : None, int, np.random.SeedSequence or np.random.Generator
        if seed is None, fresh OS entropy is used.

    Returns
    -------
    Valid instance np.random.Generator

    Notes
    -----
    Inspired by the scikit-learn eponymous function
    """
    if seed is None or isinstance(seed, (int, np.integer, np.random.SeedSequence)):
        return np.random.default_rng(seed)

    elif isinstance(seed, np.random.Generator):
        return seed

    raise ValueError(
        f"Seed should be None, int, np.random.SeedSequence or np.random.Generator, "
        f"got {seed!r}"
    )


def resolve_seed(seed):
    """Returns an integer seed, drawing one from OS entropy if `seed` is None"""
    if seed is None:
        return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0])
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"Seed should be None or an int, got {seed!r}")
    if seed < 0:
        raise ValueError(f"Seed should be nonnegative, got {seed}")
    return int(seed)


def stream_rng(seed, *key):
    """Generator of the random stream identified by ``(seed, *key)``

    The stream only depends on the seed and the key, never on how many
    streams are drawn or in which order.

    Parameters
    ----------
    seed : int
    *key : int
        stream identifier, e.g. (knot index, chunk index)

    Returns
    -------
    np.random.Generator
    """
    seq = np.random.SeedSequence(entropy=resolve_seed(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(seq)


def chunk_sizes(n_samples, chunk_size=None):
    """Splits `n_samples` into consecutive chunks of at most `chunk_size`"""
    if chunk_size is None:
        chunk_size = config.get_chunk_size()
    n_full, rest = divmod(int(n_samples), int(chunk_size))
    sizes = [int(chunk_size)] * n_full
    if rest:
        sizes.append(rest)
    return sizes


def parallel_map(func, items, n_workers=None):
    """Order-preserving map over `items` on a thread pool

    Parameters
    ----------
    func : callable
    items : iterable
    n_workers : int, optional
        defaults to :func:`memgeom.config.get_n_workers`

    Returns
    -------
    list
        ``[func(item) for item in items]``
    """
    items = list(items)
    if n_workers is None:
        n_workers = config.get_n_workers()
    if n_workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=n_workers) as executor:
        return list(executor.map(func, items))


def monte_carlo_samples(sample_fn, n_samples, seed, key=()):
    """Draws `n_samples` per-sample values, chunk by chunk

    Parameters
    ----------
    sample_fn : callable
        ``sample_fn(rng, start, size)`` returns an array whose first axis has
        length `size`; `start` is the global index of the first sample.
    n_samples : int
    seed : int
    key : tuple of int, optional
        prefix of the stream keys; chunk ``j`` uses ``stream_rng(seed, *key, j)``

    Returns
    -------
    ndarray
        concatenation of the chunks in sample order
    """
    if n_samples < 1:
        raise ValueError(f"n_samples should be at least 1, got {n_samples}")
    seed = resolve_seed(seed)
    sizes = chunk_sizes(n_samples)
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(int)

    def run_chunk(j):
        rng = stream_rng(seed, *key, j)
        return np.asarray(sample_fn(rng, int(starts[j]), sizes[j]))

    return np.concatenate(parallel_map(run_chunk, range(len(sizes))), axis=0)


def summarize(values):
    """Mean and standard error of a vector of per-sample values"""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return MCEstimate(mean, stderr, int(n))


def monte_carlo(sample_fn, n_samples, seed, key=()):
    """Monte Carlo estimate of the mean of per-sample values

    See :func:`monte_carlo_samples` for the meaning of the parameters.

    Returns
    -------
    MCEstimate
    """
    return summarize(monte_carlo_samples(sample_fn, n_samples, seed, key=key))
