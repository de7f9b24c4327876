"""
The :mod:`memgeom.denoise` module includes the closed-form denoisers (empirical
posterior mean, Gaussian linear, constant, composite), posterior weights,
flow-matching vector fields and Jacobian diagnostics.
"""

from ._weights import (
    PosteriorWeights,
    check_sigma,
    log_posterior_weights,
    posterior_weight_matrix,
    posterior_weights,
)
from ._denoisers import (
    Denoiser,
    EmpiricalDenoiser,
    GaussianModel,
    GaussianDenoiser,
    ConstantDenoiser,
    IdentityDenoiser,
    CompositeDenoiser,
    gaussian_from_dataset,
    register_denoiser_kind,
    lookup_dataset,
    denoiser_to_dict,
    denoiser_from_dict,
)
from ._flow import check_t, flow_denoiser, flow_vector_fields, flow_weight_matrix
from ._diagnostics import (
    denoise,
    denoising_mse,
    generalization_gap,
    finite_difference_jacobian,
    posterior_covariance_jacobian,
    gaussian_jacobian,
    tweedie_jacobian_check,
    gauss_excess_profile,
)
