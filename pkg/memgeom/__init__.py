__version__ = "0.1.0"

from .config import (
    get_n_workers,
    set_n_workers,
    get_chunk_size,
    set_chunk_size,
    config_context,
)
from .schedule import (
    NoiseSchedule,
    SigmaGrid,
    edm_schedule,
    sigma_grid,
    sigma_to_t,
    t_to_sigma,
)
from .curves import DiagnosticCurve
from .datasets import (
    Dataset,
    DatasetError,
    SyntheticSpec,
    load_dataset,
    save_dataset,
    synthesize,
    split_train_test,
    distance_profile,
)
from .random import MCEstimate, check_random_state, monte_carlo
from .denoise import (
    EmpiricalDenoiser,
    GaussianDenoiser,
    GaussianModel,
    ConstantDenoiser,
    IdentityDenoiser,
    CompositeDenoiser,
    denoise,
    denoiser_from_dict,
    posterior_weights,
)

# shells registers the "shell-projector" denoiser kind
from .shells import ShellSpec, ShellProjector, coverage, coverage_bounds, phi_table
from .concentration import concentration_thresholds, w_sigma_curve, weight_certificate
from .sampler import integrate, trajectory_memorization, swap_experiment
from .metrics import MemorizationReport, memorization_flags
from .regime import RegimeReport, regime_report, gap_mask
from .spectral import CirculantModel, sensitivity_profile

from . import datasets
from . import denoise
from . import shells
from . import concentration
from . import sampler
from . import metrics
from . import spectral
from . import random
