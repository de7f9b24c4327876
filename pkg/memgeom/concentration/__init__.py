"""
The :mod:`memgeom.concentration` module includes the posterior-weight
concentration diagnostics: weight curves, the noise-level thresholds of the
self weight, the (epsilon, delta) weight certificate and the cosine bound
between optimal and conditional flow fields.
"""

from ._normal import normal_cdf, normal_sf, normal_quantile, normal_isf
from ._weights import (
    DEFAULT_N_BASE,
    DEFAULT_N_NOISE,
    WeightComparison,
    max_vs_self_weight,
    self_weight_samples,
    w_sigma_curve,
)
from ._thresholds import (
    ThresholdAverages,
    ThresholdReport,
    ThresholdValidation,
    WeightCertificate,
    a_constants,
    average_thresholds,
    b_constant,
    certificate_delta,
    concentration_thresholds,
    validate_certificate,
    validate_thresholds,
    weight_certificate,
)
from ._cosine import CosineBoundReport, cosine_bound, flow_cosines, validate_cosine_bound
