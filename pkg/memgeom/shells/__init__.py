"""
The :mod:`memgeom.shells` module includes the Gaussian shell geometry, the
two-shell overlap function Phi, shell coverage with its bounds, shell
disjointness and the shell-only denoising objective.
"""

from ._geometry import DEFAULT_C, ShellSpec, shell_radii
from ._phi import (
    NormBank,
    PhiEstimate,
    PhiTable,
    default_phi_knots,
    phi,
    phi_table,
    shell_membership_rate,
)
from ._coverage import (
    CoverageBounds,
    coverage,
    coverage_curve,
    coverage_bounds,
    disjointness_sigma,
    in_any_shell,
    shells_disjoint,
)
from ._objective import (
    NOISE_LAWS,
    ShellProjector,
    annulus_second_moment,
    sample_annulus,
    shell_only_loss,
)
