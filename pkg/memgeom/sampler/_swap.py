from ..denoise import CompositeDenoiser
from ..metrics import MEMORIZATION_RATIO
from ..random import resolve_seed
from ._memorization import trajectory_memorization

# Boundaries (sigma_lo, sigma_hi) of the medium band of the swap experiment
DEFAULT_SWAP_BAND = (0.14, 8.4)
REGIONS = ("large", "medium", "small")


def swap_regions(schedule, boundaries=DEFAULT_SWAP_BAND):
    """Splits the schedule range into the large, medium and small noise bands

    Parameters
    ----------
    schedule : NoiseSchedule
    boundaries : (float, float)
        sigma_lo < sigma_hi within [sigma_min, sigma_max]

    Returns
    -------
    dict of str -> (float, float)
        ``large`` is [sigma_hi, sigma_max], ``medium`` [sigma_lo, sigma_hi],
        ``small`` [sigma_min, sigma_lo]; empty outer bands are left out
    """
    sigma_lo, sigma_hi = (float(b) for b in boundaries)
    if not schedule.sigma_min <= sigma_lo < sigma_hi <= schedule.sigma_max:
        raise ValueError(
            f"Swap boundaries should satisfy sigma_min <= sigma_lo < sigma_hi <= sigma_max, "
            f"got ({sigma_lo}, {sigma_hi}) for [{schedule.sigma_min}, {schedule.sigma_max}]."
        )
    regions = {
        "large": (sigma_hi, schedule.sigma_max),
        "medium": (sigma_lo, sigma_hi),
        "small": (schedule.sigma_min, sigma_lo),
    }
    return {name: band for name, band in regions.items() if band[0] < band[1]}


def swapped_denoiser(base, insert, schedule, boundaries=DEFAULT_SWAP_BAND, region="medium"):
    """Composite denoiser using `insert` on one region and `base` elsewhere"""
    if region not in REGIONS:
        raise ValueError(f"Unknown region {region!r}, expected one of {REGIONS}.")
    regions = swap_regions(schedule, boundaries)
    if region not in regions:
        raise ValueError(f"Region {region!r} is empty for boundaries {boundaries}.")
    return CompositeDenoiser(
        [(band, insert if name == region else base) for name, band in regions.items()]
    )


def swap_experiment(
    base,
    insert,
    dataset,
    schedule,
    n_samples,
    boundaries=DEFAULT_SWAP_BAND,
    seed=None,
    method="heun",
    region="medium",
    ratio=MEMORIZATION_RATIO,
):
    """Trajectory memorization with and without a denoiser swap on one noise band

    Both runs share the seed, hence the initial noises.

    Parameters
    ----------
    base : Denoiser
    insert : Denoiser
        used on `region` in the swapped run
    dataset : Dataset
    schedule : NoiseSchedule
    n_samples : int
    boundaries : (float, float), default is (0.14, 8.4)
    seed : int, optional
    method : {'heun', 'euler'}
    region : {'large', 'medium', 'small'}, default is 'medium'
    ratio : float, default is 3

    Returns
    -------
    baseline, swapped : MemorizationReport
    """
    seed = resolve_seed(seed)
    composite = swapped_denoiser(base, insert, schedule, boundaries, region)
    baseline = trajectory_memorization(base, dataset, schedule, n_samples, method, seed, ratio)
    swapped = trajectory_memorization(composite, dataset, schedule, n_samples, method, seed, ratio)
    return baseline, swapped
