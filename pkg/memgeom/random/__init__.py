"""
The :mod:`memgeom.random` module provides reproducible random streams and the
deterministic parallel Monte Carlo driver used by every estimator.
"""

from .base import (
    MCEstimate,
    check_random_state,
    resolve_seed,
    stream_rng,
    chunk_sizes,
    parallel_map,
    monte_carlo,
    monte_carlo_samples,
    summarize,
)
