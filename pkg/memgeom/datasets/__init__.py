"""
The :mod:`memgeom.datasets` module includes the immutable dataset type, loaders
for CSV and raw-f64 files, synthetic generators and brute-force distances.
"""

from ._dataset import Dataset, DatasetError, as_points, as_vector
from .data_imports import load_dataset, save_dataset, save_array, affine_rescale
from .synthetic import SyntheticSpec, SYNTHETIC_KINDS, synthesize, split_train_test
from .distances import (
    DistanceProfile,
    distance_profile,
    squared_distances,
    pairwise_distances,
    nearest_neighbor_distances,
    min_pairwise_distance,
)
