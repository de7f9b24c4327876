"""
The :mod:`memgeom.sampler` module integrates the probability-flow ODE under
any denoiser and measures memorization of the generated samples, including
the denoiser-swapping experiment.
"""

from ._integrate import (
    METHODS,
    IntegrationError,
    Trajectory,
    integrate,
    integrate_from,
    save_trajectories,
)
from ._memorization import (
    MEMORIZED_CUTOFF,
    memorized_levels,
    per_noise_memorization,
    per_noise_memorization_curve,
    sample_terminals,
    trajectory_memorization,
)
from ._swap import (
    DEFAULT_SWAP_BAND,
    REGIONS,
    swap_experiment,
    swap_regions,
    swapped_denoiser,
)
