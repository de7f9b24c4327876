from dataclasses import dataclass

import numpy as np

from ..denoise import check_t, flow_vector_fields
from ..random import monte_carlo, resolve_seed
from ..schedule import t_to_sigma
from ._normal import normal_sf
from ._thresholds import certificate_delta


@dataclass(frozen=True)
class CosineBoundReport:
    """Lower bound on the cosine between the optimal and conditional velocity fields

    With probability at least 1 - delta_total over X_t = (1 - t) Z + t x_1,
    cos(u_opt(X_t), u_cond(X_t | x_1)) >= bound. A vacuous report has
    ``bound = -inf``.
    """

    point_index: int
    t: float
    epsilon: float
    a: float
    c: float
    bound: float
    delta_total: float
    kappa_epsilon: float
    diameter: float
    vacuous: bool

    def to_dict(self):
        return dict(self.__dict__)


def cosine_bound(dataset, point_index, t, epsilon, a, c):
    """Cosine similarity bound between the optimal and conditional flow fields

    bound = 1 - 2 D eps / ((1 - t) sqrt(d - 2 sqrt(d c) + |x_1|^2 - a |x_1|) + D eps)

    delta_total = e^-c + F~(a / 2) + sum_{j != 1} F~(|d_j| / (2 sigma) + sigma kappa / |d_j|)

    with D the dataset diameter, d_j = x_j - x_1, sigma = (1 - t) / t and
    kappa = log(eps / ((N - 1) (1 - eps))).

    Parameters
    ----------
    dataset : Dataset
    point_index : int
        conditioning row x_1, nonzero
    t : float in (0, 1)
    epsilon : float in (0, 1)
    a, c : float
        positive deviation parameters of the noise norm and of its
        projection on x_1

    Returns
    -------
    CosineBoundReport
        a nonpositive radicand gives a vacuous report; D = 0 gives bound 1
    """
    t = check_t(t)
    epsilon, a, c = float(epsilon), float(a), float(c)
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon should lie in the open interval (0, 1), got {epsilon}.")
    if not (a > 0 and c > 0):
        raise ValueError(f"a and c should be positive, got a={a}, c={c}.")
    if not 0 <= point_index < dataset.n_points:
        raise ValueError(
            f"point_index should be in [0, {dataset.n_points}), got {point_index}."
        )
    anchor = dataset[point_index]
    anchor_norm = float(np.linalg.norm(anchor))
    if anchor_norm == 0:
        raise ValueError("The conditioning row should be nonzero.")

    sigma = t_to_sigma(t)
    tail, kappa = certificate_delta(dataset, point_index, sigma, epsilon)
    delta_total = float(np.exp(-c) + normal_sf(a / 2) + tail)

    diameter = dataset.diameter()
    dim = dataset.dim
    radicand = dim - 2 * np.sqrt(dim * c) + anchor_norm**2 - a * anchor_norm
    excess = diameter * epsilon
    vacuous = False
    if excess == 0:
        bound = 1.0
    elif radicand <= 0:
        bound, vacuous = float("-inf"), True
    else:
        bound = float(1 - 2 * excess / ((1 - t) * np.sqrt(radicand) + excess))

    return CosineBoundReport(
        point_index=int(point_index),
        t=t,
        epsilon=epsilon,
        a=a,
        c=c,
        bound=bound,
        delta_total=delta_total,
        kappa_epsilon=kappa,
        diameter=diameter,
        vacuous=vacuous,
    )


def flow_cosines(dataset, points, t, point_index):
    """Cosine between u_opt and u_cond(. | x_1) at each row of `points`"""
    u_opt, u_cond = flow_vector_fields(dataset, points, t, point_index)
    dots = np.einsum("ij,ij->i", u_opt, u_cond)
    norms = np.linalg.norm(u_opt, axis=1) * np.linalg.norm(u_cond, axis=1)
    return dots / norms


def validate_cosine_bound(dataset, point_index, t, epsilon, a, c, n_draws, seed=None):
    """Rate at which the cosine bound holds over draws X_t = (1 - t) Z + t x_1

    Returns
    -------
    report : CosineBoundReport
    success_rate : MCEstimate
        fraction of draws whose cosine is at least the bound; should not fall
        below 1 - delta_total beyond Monte Carlo noise
    """
    report = cosine_bound(dataset, point_index, t, epsilon, a, c)
    anchor = dataset[point_index]

    def sample(rng, start, size):
        points = (1 - report.t) * rng.standard_normal((size, dataset.dim)) + report.t * anchor
        cosines = flow_cosines(dataset, points, report.t, point_index)
        return (cosines >= report.bound).astype(np.float64)

    return report, monte_carlo(sample, n_draws, resolve_seed(seed))
