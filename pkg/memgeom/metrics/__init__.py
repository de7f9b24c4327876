"""
The :mod:`memgeom.metrics` module includes the nearest-neighbor memorization
criterion and the squared-error helpers behind denoising losses.
"""

from .regression import squared_error
from .memorization import MEMORIZATION_RATIO, MemorizationReport, memorization_flags
