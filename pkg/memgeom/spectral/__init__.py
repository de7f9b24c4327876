"""
The :mod:`memgeom.spectral` module analyzes Gaussian denoisers with circulant
(stationary) covariances: DFT diagonalization, the filter kernel of the
denoiser and the total-variation bound on its off-diagonal decay.
"""

from ._circulant import (
    IMAG_TOL,
    CirculantModel,
    circulant_matrix,
    inverse_dft,
    power_law_spectrum,
    random_symmetric_spectrum,
    spike_spectrum,
    wraparound_distance,
)
from ._sensitivity import (
    DEFAULT_DECAY_TOL,
    SensitivityProfile,
    offdiag_sensitivity,
    sensitivity_profile,
    spectrum_concentration_sweep,
)
